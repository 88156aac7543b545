#pragma once

#include <memory>
#include <span>

#include "kcone/intersection_ring.hpp"

namespace kcone {

// Smallest-to-largest gram eigenvalue ratio below which a point is rejected.
inline constexpr double kPosdefTol = 1e-10;

// A class omega admitted as a point of the cone, with its volume, Gram matrix
// and inverse Gram matrix cached.
//
// Only necessary conditions are enforced: Vol(omega) > 0 and a positive
// definite Gram matrix. Whether omega is actually a Kähler class cannot be
// decided from the intersection form; the caller asserts it.
class ConePoint {
 public:
  // Throws NonPositiveVolume or IndefiniteMetric.
  ConePoint(std::shared_ptr<const IntersectionForm> form, CohClass omega);
  ConePoint(const IntersectionForm& form, CohClass omega);

  const IntersectionForm& form() const noexcept { return *form_; }
  const std::shared_ptr<const IntersectionForm>& form_ptr() const noexcept { return form_; }
  const CohClass& omega() const noexcept { return omega_; }
  int dim() const noexcept { return form_->dim(); }
  int rank() const noexcept { return form_->rank(); }
  double vol() const noexcept { return vol_; }
  const Matrix& gram() const noexcept { return gram_; }
  const Matrix& gram_inv() const noexcept { return gram_inv_; }

 private:
  std::shared_ptr<const IntersectionForm> form_;
  CohClass omega_;
  double vol_ = 0.0;
  Matrix gram_;
  Matrix gram_inv_;
};

// True when omega passes the ConePoint admission checks.
bool admissible(const std::shared_ptr<const IntersectionForm>& form, const CohClass& omega);

// Divided-power Lambda^k(u_1 ... u_k) = c(u_1, ..., u_k, w, ..., w) / ((n-k)! Vol).
// Zero when k exceeds the complex dimension.
double lambda_scalar(const ConePoint& p, std::span<const CohClass> us);
double lambda1(const ConePoint& p, const CohClass& u);
double lambda2(const ConePoint& p, const CohClass& u, const CohClass& v);
double lambda3(const ConePoint& p, const CohClass& u, const CohClass& v, const CohClass& z);

// g(u, v) = Lambda(u) Lambda(v) - Lambda^2(u v).
double inner(const ConePoint& p, const CohClass& u, const CohClass& v);
double norm(const ConePoint& p, const CohClass& u);

// u - (Lambda(u)/n) omega.
CohClass primitive_part(const ConePoint& p, const CohClass& u);

// The (1,1)-class Lambda(u v), defined through
//   g(Lambda(u v), z) = -Lambda^3(u v z) + Lambda^2(u v) Lambda(z)  for all z.
CohClass lambda_class(const ConePoint& p, const CohClass& u, const CohClass& v);

// Unit vector e_i of length m.
CohClass basis_class(int m, int i);

}  // namespace kcone
