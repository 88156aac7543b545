#include "kcone/intersection_ring.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "kcone/errors.hpp"

namespace kcone {

namespace {

double eval_sorted_entries(const std::map<MultiIndex, double>& coeffs,
                           std::span<const CohClass* const> args) {
  double total = 0.0;
  MultiIndex perm;
  for (const auto& [index, value] : coeffs) {
    // Sum over the distinct orderings of the stored sorted index; this is the
    // full symmetric expansion restricted to nonzero coefficients.
    perm = index;
    double sum = 0.0;
    do {
      double prod = 1.0;
      for (std::size_t k = 0; k < perm.size(); ++k) prod *= (*args[k])[perm[k]];
      sum += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    total += value * sum;
  }
  return total;
}

std::string index_to_string(const MultiIndex& index) {
  std::ostringstream out;
  out << '[';
  for (std::size_t k = 0; k < index.size(); ++k) out << (k ? "," : "") << index[k] + 1;
  out << ']';
  return out.str();
}

}  // namespace

IntersectionForm::IntersectionForm(std::string name, int dim, int rank,
                                   const std::vector<std::pair<MultiIndex, double>>& entries,
                                   std::vector<std::string> labels)
    : name_(std::move(name)), dim_(dim), rank_(rank), labels_(std::move(labels)) {
  if (dim_ < 1) throw DimensionError("dim must be >= 1");
  if (rank_ < 1) throw DimensionError("h11 must be >= 1");
  if (!labels_.empty() && static_cast<int>(labels_.size()) != rank_)
    throw DimensionError("labels must list exactly h11 names");

  std::map<MultiIndex, double> seen;
  for (const auto& [raw, value] : entries) {
    if (static_cast<int>(raw.size()) != dim_)
      throw DimensionError("index length mismatch: " + index_to_string(raw) + " in a dim=" +
                           std::to_string(dim_) + " form");
    for (int i : raw)
      if (i < 0 || i >= rank_)
        throw DimensionError("index out of range: " + index_to_string(raw));
    if (!std::isfinite(value)) throw ParseError("non-finite coefficient at " + index_to_string(raw));
    MultiIndex index = raw;
    std::sort(index.begin(), index.end());
    auto [it, inserted] = seen.emplace(index, value);
    if (!inserted && it->second != value)
      throw ParseError("conflicting duplicate entries for index " + index_to_string(index));
  }
  for (const auto& [index, value] : seen)
    if (value != 0.0) coeffs_.emplace(index, value);
  if (coeffs_.empty()) throw ParseError("intersection form is identically zero");
}

double IntersectionForm::coefficient(MultiIndex index) const {
  std::sort(index.begin(), index.end());
  auto it = coeffs_.find(index);
  return it == coeffs_.end() ? 0.0 : it->second;
}

double IntersectionForm::eval(std::span<const CohClass> args) const {
  if (static_cast<int>(args.size()) != dim_)
    throw DimensionError("eval_form expects " + std::to_string(dim_) + " arguments, got " +
                         std::to_string(args.size()));
  std::vector<const CohClass*> ptrs;
  ptrs.reserve(args.size());
  for (const auto& a : args) {
    if (a.size() != rank_) throw DimensionError("class length does not match h11");
    ptrs.push_back(&a);
  }
  return eval_sorted_entries(coeffs_, ptrs);
}

double IntersectionForm::eval_with_power(std::span<const CohClass> args, const CohClass& w) const {
  if (static_cast<int>(args.size()) > dim_)
    throw DimensionError("too many arguments for eval_with_power");
  if (w.size() != rank_) throw DimensionError("class length does not match h11");
  std::vector<const CohClass*> ptrs;
  ptrs.reserve(dim_);
  for (const auto& a : args) {
    if (a.size() != rank_) throw DimensionError("class length does not match h11");
    ptrs.push_back(&a);
  }
  while (static_cast<int>(ptrs.size()) < dim_) ptrs.push_back(&w);
  return eval_sorted_entries(coeffs_, ptrs);
}

IntersectionForm IntersectionForm::scaled(double factor) const {
  std::vector<std::pair<MultiIndex, double>> entries;
  for (const auto& [index, value] : coeffs_) entries.emplace_back(index, factor * value);
  return IntersectionForm(name_, dim_, rank_, entries, labels_);
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

double volume(const IntersectionForm& form, const CohClass& omega) {
  return form.eval_with_power({}, omega) / factorial(form.dim());
}

IntersectionForm pullback_form(const IntersectionForm& form, const Matrix& map, std::string name) {
  if (map.rows() != form.rank())
    throw DimensionError("pullback matrix must have h11 = " + std::to_string(form.rank()) + " rows");
  const int n = form.dim();
  const int m_src = static_cast<int>(map.cols());
  if (m_src < 1) throw DimensionError("pullback matrix has no columns");

  std::vector<CohClass> images(m_src);
  for (int j = 0; j < m_src; ++j) images[j] = map.col(j);

  std::vector<std::pair<MultiIndex, double>> entries;
  // Enumerate sorted multi-indices over {0..m_src-1} of length n.
  MultiIndex index(n, 0);
  std::vector<CohClass> args(n);
  while (true) {
    for (int k = 0; k < n; ++k) args[k] = images[index[k]];
    double value = form.eval(args);
    if (value != 0.0) entries.emplace_back(index, value);
    int k = n - 1;
    while (k >= 0 && index[k] == m_src - 1) --k;
    if (k < 0) break;
    ++index[k];
    for (int j = k + 1; j < n; ++j) index[j] = index[k];
  }
  return IntersectionForm(name.empty() ? form.name() + "_pullback" : std::move(name), n, m_src,
                          entries);
}

double parse_rational(const std::string& raw) {
  auto first = raw.find_first_not_of(" \t");
  auto last = raw.find_last_not_of(" \t");
  if (first == std::string::npos) throw ParseError("empty numeric string");
  const std::string text = raw.substr(first, last - first + 1);

  auto parse_int = [&](std::string_view part) {
    long long v = 0;
    const char* begin = part.data();
    if (!part.empty() && part.front() == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || begin == ptr)
      throw ParseError("bad rational component '" + std::string(part) + "'");
    return v;
  };

  if (auto slash = text.find('/'); slash != std::string::npos) {
    std::string_view sv(text);
    long long p = parse_int(sv.substr(0, slash));
    long long q = parse_int(sv.substr(slash + 1));
    if (q == 0) throw ParseError("zero denominator in '" + text + "'");
    return static_cast<double>(p) / static_cast<double>(q);
  }
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !std::isfinite(v))
    throw ParseError("bad number '" + text + "'");
  return v;
}

IntersectionForm parse_manifold(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("manifold file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("manifold file must be a JSON object");
  for (const char* key : {"name", "dim", "h11", "intersection"})
    if (!doc.contains(key)) throw ParseError(std::string("manifold file lacks '") + key + "'");
  if (!doc["name"].is_string()) throw ParseError("'name' must be a string");
  if (!doc["dim"].is_number_integer() || !doc["h11"].is_number_integer())
    throw ParseError("'dim' and 'h11' must be integers");
  if (!doc["intersection"].is_array()) throw ParseError("'intersection' must be an array");

  const int dim = doc["dim"].get<int>();
  const int rank = doc["h11"].get<int>();
  std::vector<std::pair<MultiIndex, double>> entries;
  for (const auto& item : doc["intersection"]) {
    if (!item.is_object() || !item.contains("index") || !item.contains("value"))
      throw ParseError("intersection entries need 'index' and 'value'");
    const auto& idx = item["index"];
    if (!idx.is_array()) throw ParseError("'index' must be an array");
    MultiIndex index;
    for (const auto& i : idx) {
      if (!i.is_number_integer()) throw ParseError("index entries must be integers");
      index.push_back(i.get<int>() - 1);
    }
    const auto& v = item["value"];
    double value;
    if (v.is_number()) value = v.get<double>();
    else if (v.is_string()) value = parse_rational(v.get<std::string>());
    else throw ParseError("'value' must be a number or a \"p/q\" string");
    entries.emplace_back(std::move(index), value);
  }
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    if (!doc["labels"].is_array()) throw ParseError("'labels' must be an array");
    for (const auto& l : doc["labels"]) {
      if (!l.is_string()) throw ParseError("labels must be strings");
      labels.push_back(l.get<std::string>());
    }
  }
  return IntersectionForm(doc["name"].get<std::string>(), dim, rank, entries, std::move(labels));
}

std::string serialize_manifold(const IntersectionForm& form) {
  nlohmann::ordered_json doc;
  doc["name"] = form.name();
  doc["dim"] = form.dim();
  doc["h11"] = form.rank();
  auto entries = nlohmann::ordered_json::array();
  for (const auto& [index, value] : form.coeffs()) {
    nlohmann::ordered_json e;
    std::vector<int> one_based;
    for (int i : index) one_based.push_back(i + 1);
    e["index"] = one_based;
    e["value"] = value;
    entries.push_back(std::move(e));
  }
  doc["intersection"] = std::move(entries);
  if (!form.labels().empty()) doc["labels"] = form.labels();
  return doc.dump(2);
}

}  // namespace kcone
