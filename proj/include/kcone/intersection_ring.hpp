#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace kcone {

// A real (1,1)-class, as coordinates over the basis declared by the form.
using CohClass = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Sorted, 0-based multi-index of length dim().
using MultiIndex = std::vector<int>;

// Symmetric n-linear intersection form on R^m, stored sparsely over sorted
// multi-indices. Immutable after construction.
class IntersectionForm {
 public:
  // Indices may be given in any order and are normalized to sorted order.
  // Throws DimensionError on malformed input and ParseError on conflicting
  // duplicates or an all-zero form.
  IntersectionForm(std::string name, int dim, int rank,
                   const std::vector<std::pair<MultiIndex, double>>& entries,
                   std::vector<std::string> labels = {});

  const std::string& name() const noexcept { return name_; }
  int dim() const noexcept { return dim_; }
  int rank() const noexcept { return rank_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::map<MultiIndex, double>& coeffs() const noexcept { return coeffs_; }

  // Coefficient for an arbitrary (unsorted, 0-based) index tuple.
  double coefficient(MultiIndex index) const;

  // Full multilinear expansion c(a_1, ..., a_n). Requires exactly dim() args.
  double eval(std::span<const CohClass> args) const;

  // c(a_1, ..., a_k, w, ..., w) with w repeated dim()-k times.
  double eval_with_power(std::span<const CohClass> args, const CohClass& w) const;

  // The form scaled by a constant factor.
  IntersectionForm scaled(double factor) const;

 private:
  std::string name_;
  int dim_;
  int rank_;
  std::map<MultiIndex, double> coeffs_;
  std::vector<std::string> labels_;
};

double factorial(int k);

// Vol = c(w, ..., w) / n!.
double volume(const IntersectionForm& form, const CohClass& omega);

// c'(a_1, ..., a_n) = c(M a_1, ..., M a_n), M of shape rank() x m'.
IntersectionForm pullback_form(const IntersectionForm& form, const Matrix& map,
                               std::string name = {});

// Manifold file (JSON) reading and writing.
IntersectionForm parse_manifold(const std::string& text);
std::string serialize_manifold(const IntersectionForm& form);

// Parses "p/q", integers and decimals into a double.
double parse_rational(const std::string& text);

}  // namespace kcone
