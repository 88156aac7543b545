#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kcone/kernels.hpp"
#include "kcone/lefschetz_metric.hpp"

namespace kcone {

// A tangent field on the cone: its value at a point and its directional
// derivative d_z u there. `jacobian_at` may be empty; see with_fd_jacobian().
struct VectorField {
  std::function<CohClass(const ConePoint&)> value_at;
  std::function<CohClass(const ConePoint&, const CohClass&)> jacobian_at;
};

VectorField constant_field(CohClass u0);
VectorField tautological_field();
// omega -> primitive_part(omega, u0). Carries no jacobian.
VectorField primitive_projection_field(CohClass u0);

// Gamma(z, u) = -1/2 Lambda(u) z - 1/2 Lambda(z) u + 1/2 Lambda(u z),
// i.e. nabla_z u for a constant field u.
CohClass christoffel(const ConePoint& p, const CohClass& z, const CohClass& u);

// nabla_z u = d_z u + Gamma(z, u). Throws Error if the field has no jacobian.
CohClass covariant_derivative(const ConePoint& p, const VectorField& u, const CohClass& z);

// Riemann tensor R(u,v,z,w) = -1/4 <L(uw), L(vz)> + 1/4 <L(uz), L(vw)> with
// L = lambda_class, evaluated on the primitive parts of all four arguments.
double riemann(const ConePoint& p, const CohClass& u, const CohClass& v, const CohClass& z,
               const CohClass& w);

// <u w, v z> for the (2,2)-classes u w and v z.
double inner22(const ConePoint& p, const CohClass& u, const CohClass& w, const CohClass& v,
               const CohClass& z);

// Space-form perturbation expression of the same tensor:
//   -1/4 <u,w><v,z> + 1/4 <u,z><v,w> - 1/4 <uw,vz> + 1/4 <uz,vw>
// on primitive parts.
double riemann_alt(const ConePoint& p, const CohClass& u, const CohClass& v, const CohClass& z,
                   const CohClass& w);

// Dense rank-4 tensor with the algebraic symmetries of a curvature tensor,
// tied to the point where it was evaluated.
class CurvatureTensor {
 public:
  CurvatureTensor(ConePoint base, std::vector<double> entries);

  int rank() const noexcept { return m_; }
  const ConePoint& base_point() const noexcept { return base_; }
  const std::vector<double>& entries() const noexcept { return entries_; }

  double operator()(int i, int j, int k, int l) const {
    return entries_[((static_cast<std::size_t>(i) * m_ + j) * m_ + k) * m_ + l];
  }
  // Multilinear evaluation on arbitrary classes.
  double eval(const CohClass& u, const CohClass& v, const CohClass& z, const CohClass& w) const;
  double max_abs() const;

 private:
  ConePoint base_;
  int m_;
  std::vector<double> entries_;
};

CurvatureTensor riemann_tensor(const ConePoint& p, Exec exec = Exec::parallel);

struct SymmetryReport {
  double antisym_first = 0.0;   // R(u,v,z,w) + R(v,u,z,w)
  double antisym_second = 0.0;  // R(u,v,z,w) + R(u,v,w,z)
  double pair = 0.0;            // R(u,v,z,w) - R(z,w,u,v)
  double bianchi = 0.0;         // R(u,v,z,w) + R(v,z,u,w) + R(z,u,v,w)
  double max() const;
};
SymmetryReport symmetry_deviation(const CurvatureTensor& r);

// K(u,v) = R(u,v,v,u) / (g(u,u) g(v,v) - g(u,v)^2). Throws DegeneratePlane.
double sectional(const CurvatureTensor& r, const CohClass& u, const CohClass& v);

struct DerivedCurvatures {
  Matrix ricci;   // Ric(u,v) = sum_a R(e_a,u,v,e_a) over a g-orthonormal basis
  double scalar;  // trace of Ric
};
DerivedCurvatures derived_curvatures(const CurvatureTensor& r);

struct GeodesicSample {
  double t;
  CohClass point;
  CohClass velocity;
  double speed2;  // g(velocity, velocity)
};

struct GeodesicPath {
  std::vector<GeodesicSample> samples;
  double speed_drift = 0.0;
};

// Fixed-step RK4 for gamma'' = -Gamma(gamma', gamma'). Throws LeftCone when a
// stage leaves the admissible set.
GeodesicPath integrate_geodesic(const ConePoint& start, const CohClass& v0, double T, int steps);

struct LengthReport {
  double length = 0.0;
  double delta_log_vol = 0.0;
  double lower_bound = 0.0;     // |delta log Vol| / sqrt(n)
  double sqrt2_constant = 0.0;  // sqrt(2) |delta log Vol| / sqrt(n)
  bool bound_holds = true;      // length >= lower_bound - 1e-9
};

// Length of the piecewise-linear path through `samples` (Simpson's rule on
// each segment) and the volume lower bound.
LengthReport path_length(const std::shared_ptr<const IntersectionForm>& form,
                         const std::vector<CohClass>& samples);

enum class ProbeVerdict { divergent, convergent, inconclusive };
const char* to_string(ProbeVerdict v);

struct ProbeRow {
  double t;
  double vol;
  double length;     // cumulative length of alpha + s omega for s in [t, t_max]
  double increment;  // length gained since the previous schedule point
};

struct ProbeReport {
  std::vector<ProbeRow> rows;
  ProbeVerdict verdict = ProbeVerdict::inconclusive;
  double divergence_threshold = 0.0;  // per halving, 0.9 * log 2 / sqrt(n)
  double min_recent_growth = 0.0;     // min over the last 5 increments, per log 2 of t
  double tail_variation = 0.0;        // last increment
};

inline constexpr double kProbeConvTol = 1e-3;
inline constexpr int kProbeWindow = 5;

// Walks alpha + t omega along a decreasing schedule of t.
ProbeReport boundary_probe(const std::shared_ptr<const IntersectionForm>& form,
                           const CohClass& alpha, const CohClass& omega,
                           const std::vector<double>& t_schedule);
std::vector<double> halving_schedule(double t_max, double t_min, int halvings);

struct Split {
  double t;
  CohClass omega1;  // unit volume
};

Split split(const ConePoint& p);
// e^{t/n} omega1; throws Error when Vol(omega1) differs from 1 by more than 1e-10.
CohClass unsplit(const IntersectionForm& form, double t, const CohClass& omega1);

// Pullback of the metric along (t, omega1) -> e^{t/n} omega1, measured by
// finite differences at p in coordinates (t, primitive directions).
struct SplitMetricReport {
  double dt2 = 0.0;               // expected 1/n
  double max_mixed = 0.0;         // |g(d_t, d_s)|
  double max_slice_dev = 0.0;     // pulled-back slice block vs g at omega1
  double round_trip_error = 0.0;  // |unsplit(split(omega)) - omega|
};
SplitMetricReport split_metric_report(const ConePoint& p);

struct PullbackReport {
  int points = 0;
  double max_vol_dev = 0.0;   // relative |Vol_X(M w) - p Vol_Y(w)|
  double max_gram_dev = 0.0;  // max |M^T G_X M - G_Y| / max |G_Y|
  bool isometric(double tol = 1e-10) const { return max_vol_dev <= tol && max_gram_dev <= tol; }
};

// Compares the cone metric of `source` (Y) with the one pulled back from
// `target` (X) along `map` at each sample point.
PullbackReport pullback_isometry_check(const std::shared_ptr<const IntersectionForm>& source,
                                       const std::shared_ptr<const IntersectionForm>& target,
                                       const Matrix& map, double degree,
                                       const std::vector<CohClass>& points);

}  // namespace kcone
