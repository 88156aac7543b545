#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kcone/intersection_ring.hpp"

namespace kcone {

struct CatalogEntry {
  std::shared_ptr<const IntersectionForm> form;
  CohClass default_omega;
};

// Built-in test manifolds: P1XP1, P3, QUINTIC, BLP2, LOR3, CY3GEN.
const std::vector<CatalogEntry>& catalog();
std::optional<CatalogEntry> find_catalog(const std::string& name);

// The manifold-file text each built-in entry is parsed from.
const std::string& catalog_source(const std::string& name);

}  // namespace kcone
