#include "kcone/catalog.hpp"

#include <map>

#include "kcone/errors.hpp"

namespace kcone {

namespace {

struct Source {
  const char* name;
  const char* text;
  std::vector<double> omega;
};

const std::vector<Source>& sources() {
  static const std::vector<Source> s = {
      {"P1XP1", R"({"name": "P1XP1", "dim": 2, "h11": 2,
        "intersection": [{"index": [1, 2], "value": 1}], "labels": ["h1", "h2"]})",
       {1.0, 1.0}},
      {"P3", R"({"name": "P3", "dim": 3, "h11": 1,
        "intersection": [{"index": [1, 1, 1], "value": 1}], "labels": ["H"]})",
       {1.0}},
      {"QUINTIC", R"({"name": "QUINTIC", "dim": 3, "h11": 1,
        "intersection": [{"index": [1, 1, 1], "value": 5}], "labels": ["H"]})",
       {1.0}},
      {"BLP2", R"({"name": "BLP2", "dim": 2, "h11": 2,
        "intersection": [{"index": [1, 1], "value": 1}, {"index": [2, 2], "value": -1}],
        "labels": ["H", "E"]})",
       {2.0, -1.0}},
      {"LOR3", R"({"name": "LOR3", "dim": 2, "h11": 3,
        "intersection": [{"index": [1, 1], "value": 1}, {"index": [2, 2], "value": -1},
                         {"index": [3, 3], "value": -1}]})",
       {1.0, 0.0, 0.0}},
      {"CY3GEN", R"({"name": "CY3GEN", "dim": 3, "h11": 2,
        "intersection": [{"index": [1, 1, 1], "value": 8}, {"index": [1, 1, 2], "value": 4},
                         {"index": [1, 2, 2], "value": 2}, {"index": [2, 2, 2], "value": 0}]})",
       {1.0, 1.0}},
  };
  return s;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> out;
    for (const auto& s : sources()) {
      auto form = std::make_shared<const IntersectionForm>(parse_manifold(s.text));
      out.push_back({form, Eigen::Map<const CohClass>(s.omega.data(), s.omega.size())});
    }
    return out;
  }();
  return entries;
}

std::optional<CatalogEntry> find_catalog(const std::string& name) {
  for (const auto& e : catalog())
    if (e.form->name() == name) return e;
  return std::nullopt;
}

const std::string& catalog_source(const std::string& name) {
  static const std::map<std::string, std::string> texts = [] {
    std::map<std::string, std::string> m;
    for (const auto& s : sources()) m.emplace(s.name, s.text);
    return m;
  }();
  auto it = texts.find(name);
  if (it == texts.end()) throw Error("no catalog entry named " + name);
  return it->second;
}

}  // namespace kcone
