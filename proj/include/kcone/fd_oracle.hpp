#pragma once

#include <vector>

#include "kcone/cone_geometry.hpp"
#include "kcone/finite_difference.hpp"

namespace kcone {

// Raw maxima of an oracle comparison. `rel()` divides by the check's natural
// scale.
struct FDReport {
  double max_abs = 0.0;
  double scale = 0.0;
  double rel() const { return scale > 0.0 ? max_abs / scale : max_abs; }
  void merge(const FDReport& o) {
    if (o.rel() > rel()) *this = o;
  }
};

// Finite-difference Hessian of -log Vol against the Gram matrix; scale is
// max |gram|.
FDReport check_hessian_metric(const ConePoint& p, const FDConfig& cfg = {});

// d_v Lambda^k(u_1..u_k) = -Lambda(v) Lambda^k(u..) + Lambda^{k+1}(u.. v) for
// constant classes; scale is the magnitude of the two right-hand terms.
FDReport check_lemma1(const ConePoint& p, const std::vector<CohClass>& classes, const CohClass& v,
                      const FDConfig& cfg = {});

struct ConnectionReport {
  FDReport compatibility;  // d_z g(u,v) - g(Gamma(z,u),v) - g(u,Gamma(z,v))
  double torsion = 0.0;    // |Gamma(z,u) - Gamma(u,z)|
};
ConnectionReport check_connection(const ConePoint& p, const FDConfig& cfg = {});

// Riemann tensor against d_u Gamma(v,z) - d_v Gamma(u,z) + Gamma(u,Gamma(v,z))
// - Gamma(v,Gamma(u,z)) lowered with g, over basis quadruples; scale is
// max(|R|, |g|^2).
FDReport check_curvature(const ConePoint& p, const FDConfig& cfg = {}, Exec exec = Exec::parallel);

// The field with its jacobian synthesized by central differences.
VectorField with_fd_jacobian(VectorField field, const FDConfig& cfg = {});

// max |Lambda(nabla_z u)| over basis z for u = primitive_projection_field(u0).
double check_primitive_connection(const ConePoint& p, const CohClass& u0, const FDConfig& cfg = {});

}  // namespace kcone
