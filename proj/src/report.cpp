#include "kcone/report.hpp"

namespace kcone {

Json to_json(const CohClass& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Check& c) {
  Json j;
  j["name"] = c.name;
  j["max_dev"] = c.max_dev;
  j["tol"] = c.tol;
  j["pass"] = c.pass;
  return j;
}

Json make_report(const std::string& command, const std::string& form, Json inputs, Json outputs,
                 const std::vector<Check>& checks) {
  Json r;
  r["command"] = command;
  r["form"] = form;
  r["inputs"] = inputs.is_null() ? Json::object() : std::move(inputs);
  r["outputs"] = outputs.is_null() ? Json::object() : std::move(outputs);
  Json cs = Json::array();
  for (const auto& c : checks) cs.push_back(to_json(c));
  r["checks"] = std::move(cs);
  return r;
}

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace kcone
