#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kcone/intersection_ring.hpp"
#include "kcone/verify.hpp"

namespace kcone {

// Insertion-ordered so identical inputs give byte-identical reports.
using Json = nlohmann::ordered_json;

Json to_json(const CohClass& v);
Json to_json(const Matrix& m);
Json to_json(const Check& c);

// { "command", "form", "inputs", "outputs", "checks" }.
Json make_report(const std::string& command, const std::string& form, Json inputs, Json outputs,
                 const std::vector<Check>& checks);

std::string dump_report(const Json& report);

}  // namespace kcone
