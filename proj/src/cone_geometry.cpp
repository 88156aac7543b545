#include "kcone/cone_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "kcone/errors.hpp"
#include "kcone/finite_difference.hpp"

namespace kcone {

VectorField constant_field(CohClass u0) {
  VectorField f;
  f.value_at = [u0](const ConePoint&) { return u0; };
  f.jacobian_at = [m = u0.size()](const ConePoint&, const CohClass&) {
    return CohClass(CohClass::Zero(m));
  };
  return f;
}

VectorField tautological_field() {
  VectorField f;
  f.value_at = [](const ConePoint& p) { return p.omega(); };
  f.jacobian_at = [](const ConePoint&, const CohClass& z) { return z; };
  return f;
}

VectorField primitive_projection_field(CohClass u0) {
  VectorField f;
  f.value_at = [u0](const ConePoint& p) { return primitive_part(p, u0); };
  return f;
}

CohClass christoffel(const ConePoint& p, const CohClass& z, const CohClass& u) {
  // Canonical argument order makes Gamma(z,u) and Gamma(u,z) bit-identical.
  const bool swap = std::lexicographical_compare(u.begin(), u.end(), z.begin(), z.end());
  const CohClass& a = swap ? u : z;
  const CohClass& b = swap ? z : u;
  return -0.5 * lambda1(p, b) * a - 0.5 * lambda1(p, a) * b + 0.5 * lambda_class(p, a, b);
}

CohClass covariant_derivative(const ConePoint& p, const VectorField& u, const CohClass& z) {
  if (!u.jacobian_at) throw Error("vector field has no jacobian; synthesize one first");
  return u.jacobian_at(p, z) + christoffel(p, z, u.value_at(p));
}

double riemann(const ConePoint& p, const CohClass& u, const CohClass& v, const CohClass& z,
               const CohClass& w) {
  const CohClass pu = primitive_part(p, u), pv = primitive_part(p, v);
  const CohClass pz = primitive_part(p, z), pw = primitive_part(p, w);
  return -0.25 * inner(p, lambda_class(p, pu, pw), lambda_class(p, pv, pz)) +
         0.25 * inner(p, lambda_class(p, pu, pz), lambda_class(p, pv, pw));
}

double inner22(const ConePoint& p, const CohClass& u, const CohClass& w, const CohClass& v,
               const CohClass& z) {
  std::array<CohClass, 4> four{u, w, v, z};
  return lambda_scalar(p, four) + inner(p, lambda_class(p, u, w), lambda_class(p, v, z)) -
         lambda2(p, u, w) * lambda2(p, v, z);
}

double riemann_alt(const ConePoint& p, const CohClass& u, const CohClass& v, const CohClass& z,
                   const CohClass& w) {
  const CohClass pu = primitive_part(p, u), pv = primitive_part(p, v);
  const CohClass pz = primitive_part(p, z), pw = primitive_part(p, w);
  return -0.25 * inner(p, pu, pw) * inner(p, pv, pz) + 0.25 * inner(p, pu, pz) * inner(p, pv, pw) -
         0.25 * inner22(p, pu, pw, pv, pz) + 0.25 * inner22(p, pu, pz, pv, pw);
}

CurvatureTensor::CurvatureTensor(ConePoint base, std::vector<double> entries)
    : base_(std::move(base)), m_(base_.rank()), entries_(std::move(entries)) {
  if (entries_.size() != static_cast<std::size_t>(m_) * m_ * m_ * m_)
    throw DimensionError("curvature tensor needs m^4 entries");
}

double CurvatureTensor::eval(const CohClass& u, const CohClass& v, const CohClass& z,
                             const CohClass& w) const {
  double s = 0.0;
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j)
      for (int k = 0; k < m_; ++k)
        for (int l = 0; l < m_; ++l) s += (*this)(i, j, k, l) * u[i] * v[j] * z[k] * w[l];
  return s;
}

double CurvatureTensor::max_abs() const {
  double mx = 0.0;
  for (double e : entries_) mx = std::max(mx, std::abs(e));
  return mx;
}

CurvatureTensor riemann_tensor(const ConePoint& p, Exec exec) {
  const int m = p.rank();
  Matrix prim(m, m);
  for (int i = 0; i < m; ++i) prim.col(i) = primitive_part(p, basis_class(m, i));
  const Matrix classes = lambda_class_table(p, prim, exec);
  const Matrix table = pair_inner_table(classes, p.gram(), exec);
  return CurvatureTensor(p, assemble_curvature(table, m, -0.25, 0.25, exec));
}

double SymmetryReport::max() const {
  return std::max({antisym_first, antisym_second, pair, bianchi});
}

SymmetryReport symmetry_deviation(const CurvatureTensor& r) {
  SymmetryReport s;
  const int m = r.rank();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          const double x = r(i, j, k, l);
          s.antisym_first = std::max(s.antisym_first, std::abs(x + r(j, i, k, l)));
          s.antisym_second = std::max(s.antisym_second, std::abs(x + r(i, j, l, k)));
          s.pair = std::max(s.pair, std::abs(x - r(k, l, i, j)));
          s.bianchi = std::max(s.bianchi, std::abs(x + r(j, k, i, l) + r(k, i, j, l)));
        }
  return s;
}

double sectional(const CurvatureTensor& r, const CohClass& u, const CohClass& v) {
  const ConePoint& p = r.base_point();
  const double uu = inner(p, u, u), vv = inner(p, v, v), uv = inner(p, u, v);
  const double denom = uu * vv - uv * uv;
  if (!(denom > 1e-12 * uu * vv)) throw DegeneratePlane("sectional curvature of a degenerate plane");
  return r.eval(u, v, v, u) / denom;
}

DerivedCurvatures derived_curvatures(const CurvatureTensor& r) {
  const int m = r.rank();
  const Matrix& ginv = r.base_point().gram_inv();
  DerivedCurvatures d{Matrix::Zero(m, m), 0.0};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double s = 0.0;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) s += ginv(a, b) * r(a, i, j, b);
      d.ricci(i, j) = s;
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) d.scalar += ginv(i, j) * d.ricci(i, j);
  return d;
}

namespace {

ConePoint point_on_path(const std::shared_ptr<const IntersectionForm>& form, const CohClass& x,
                        double t) {
  try {
    return ConePoint(form, x);
  } catch (const InadmissiblePoint& e) {
    throw LeftCone(t, e.what());
  }
}

}  // namespace

GeodesicPath integrate_geodesic(const ConePoint& start, const CohClass& v0, double T, int steps) {
  if (steps < 1) throw Error("geodesic integration needs steps >= 1");
  if (v0.size() != start.rank()) throw DimensionError("initial velocity length does not match h11");
  if (v0.norm() == 0.0) throw Error("geodesic initial velocity must be nonzero");

  const auto& form = start.form_ptr();
  const double h = T / steps;
  GeodesicPath path;
  path.samples.reserve(steps + 1);

  CohClass x = start.omega();
  CohClass v = v0;
  ConePoint here = start;
  const double speed0 = inner(start, v0, v0);
  path.samples.push_back({0.0, x, v, speed0});

  auto accel = [](const ConePoint& p, const CohClass& vel) -> CohClass {
    return -christoffel(p, vel, vel);
  };

  for (int s = 0; s < steps; ++s) {
    const double t = s * h;
    const CohClass k1x = v;
    const CohClass k1v = accel(here, v);

    const CohClass x2 = x + 0.5 * h * k1x, v2 = v + 0.5 * h * k1v;
    const ConePoint p2 = point_on_path(form, x2, t + 0.5 * h);
    const CohClass k2x = v2, k2v = accel(p2, v2);

    const CohClass x3 = x + 0.5 * h * k2x, v3 = v + 0.5 * h * k2v;
    const ConePoint p3 = point_on_path(form, x3, t + 0.5 * h);
    const CohClass k3x = v3, k3v = accel(p3, v3);

    const CohClass x4 = x + h * k3x, v4 = v + h * k3v;
    const ConePoint p4 = point_on_path(form, x4, t + h);
    const CohClass k4x = v4, k4v = accel(p4, v4);

    x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    here = point_on_path(form, x, t + h);
    const double speed2 = inner(here, v, v);
    path.speed_drift = std::max(path.speed_drift, std::abs(speed2 - speed0));
    path.samples.push_back({(s + 1) * h, x, v, speed2});
  }
  return path;
}

LengthReport path_length(const std::shared_ptr<const IntersectionForm>& form,
                         const std::vector<CohClass>& samples) {
  if (samples.size() < 2) throw Error("path_length needs at least two samples");
  LengthReport r;
  auto speed = [&](const CohClass& at, const CohClass& delta) {
    ConePoint p(form, at);
    return std::sqrt(std::max(inner(p, delta, delta), 0.0));
  };
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const CohClass& a = samples[k];
    const CohClass& b = samples[k + 1];
    const CohClass delta = b - a;
    r.length += (speed(a, delta) + 4.0 * speed(CohClass(0.5 * (a + b)), delta) + speed(b, delta)) / 6.0;
  }
  const double n = form->dim();
  r.delta_log_vol = std::log(volume(*form, samples.back())) - std::log(volume(*form, samples.front()));
  r.lower_bound = std::abs(r.delta_log_vol) / std::sqrt(n);
  r.sqrt2_constant = std::sqrt(2.0) * r.lower_bound;
  r.bound_holds = r.length >= r.lower_bound - 1e-9;
  return r;
}

const char* to_string(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::divergent: return "DIVERGENT";
    case ProbeVerdict::convergent: return "CONVERGENT";
    case ProbeVerdict::inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

std::vector<double> halving_schedule(double t_max, double t_min, int halvings) {
  if (!(t_max > 0.0) || !(t_min > 0.0) || t_min > t_max || halvings < 0)
    throw Error("probe schedule needs 0 < t_min <= t_max and halvings >= 0");
  std::vector<double> ts;
  double t = t_max;
  for (int k = 0; k <= halvings && t >= t_min; ++k, t /= 2.0) ts.push_back(t);
  return ts;
}

namespace {

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 8> kGLNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGLWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

}  // namespace

ProbeReport boundary_probe(const std::shared_ptr<const IntersectionForm>& form,
                           const CohClass& alpha, const CohClass& omega,
                           const std::vector<double>& t_schedule) {
  if (t_schedule.empty()) throw Error("probe schedule is empty");
  for (std::size_t k = 0; k < t_schedule.size(); ++k) {
    if (!(t_schedule[k] > 0.0)) throw Error("probe schedule must be positive");
    if (k > 0 && !(t_schedule[k] < t_schedule[k - 1]))
      throw Error("probe schedule must be strictly decreasing");
  }
  ConePoint check(form, omega);  // omega itself must be admissible
  const double n = form->dim();

  // |gamma'(t)| = |omega| at alpha + t omega, integrated in s = log t.
  auto speed = [&](double t) {
    ConePoint p(form, CohClass(alpha + t * omega));
    return std::sqrt(std::max(inner(p, omega, omega), 0.0));
  };
  auto segment = [&](double t_lo, double t_hi) {
    constexpr int panels = 4;
    const double s_lo = std::log(t_lo), s_hi = std::log(t_hi);
    const double w = (s_hi - s_lo) / panels;
    double total = 0.0;
    for (int q = 0; q < panels; ++q) {
      const double mid = s_lo + (q + 0.5) * w;
      for (std::size_t g = 0; g < kGLNodes.size(); ++g) {
        const double t = std::exp(mid + 0.5 * w * kGLNodes[g]);
        total += 0.5 * w * kGLWeights[g] * speed(t) * t;
      }
    }
    return total;
  };

  ProbeReport r;
  r.divergence_threshold = 0.9 * std::log(2.0) / std::sqrt(n);
  double cumulative = 0.0;
  for (std::size_t k = 0; k < t_schedule.size(); ++k) {
    const double t = t_schedule[k];
    const CohClass at = alpha + t * omega;
    ConePoint p(form, at);
    const double inc = k == 0 ? 0.0 : segment(t, t_schedule[k - 1]);
    cumulative += inc;
    r.rows.push_back({t, p.vol(), cumulative, inc});
  }

  const std::size_t increments = r.rows.size() - 1;
  if (increments >= static_cast<std::size_t>(kProbeWindow)) {
    double min_growth = std::numeric_limits<double>::infinity();
    bool divergent = true;
    for (std::size_t k = r.rows.size() - kProbeWindow; k < r.rows.size(); ++k) {
      const double ratio = std::log(r.rows[k - 1].t / r.rows[k].t);
      const double per_halving = r.rows[k].increment * std::log(2.0) / ratio;
      min_growth = std::min(min_growth, per_halving);
      if (per_halving < r.divergence_threshold) divergent = false;
    }
    r.min_recent_growth = min_growth;
    if (divergent) r.verdict = ProbeVerdict::divergent;
  }
  r.tail_variation = increments > 0 ? r.rows.back().increment : 0.0;
  if (r.verdict != ProbeVerdict::divergent && increments > 0 && r.tail_variation < kProbeConvTol)
    r.verdict = ProbeVerdict::convergent;
  return r;
}

Split split(const ConePoint& p) {
  return {std::log(p.vol()), p.omega() / std::pow(p.vol(), 1.0 / p.dim())};
}

CohClass unsplit(const IntersectionForm& form, double t, const CohClass& omega1) {
  const double v = volume(form, omega1);
  if (!(std::abs(v - 1.0) <= 1e-10))
    throw Error("unsplit needs a unit-volume class, got Vol = " + std::to_string(v));
  return std::exp(t / form.dim()) * omega1;
}

SplitMetricReport split_metric_report(const ConePoint& p) {
  const IntersectionForm& form = p.form();
  const int m = p.rank();
  const int n = p.dim();
  const Split s = split(p);
  const ConePoint slice_point(p.form_ptr(), s.omega1);

  SplitMetricReport r;
  r.round_trip_error =
      (unsplit(form, s.t, s.omega1) - p.omega()).cwiseAbs().maxCoeff() / p.omega().cwiseAbs().maxCoeff();

  // Basis of primitive directions at omega1.
  Matrix prim(m, m);
  for (int i = 0; i < m; ++i) prim.col(i) = primitive_part(slice_point, basis_class(m, i));
  Eigen::ColPivHouseholderQR<Matrix> qr(prim);
  qr.setThreshold(1e-10);
  const int r_dim = static_cast<int>(qr.rank());
  const Matrix q = Matrix(qr.householderQ()).leftCols(r_dim);

  auto phi = [&](double t, const CohClass& w1) -> CohClass {
    return std::exp(t / n) * w1;
  };
  auto to_slice = [&](const CohClass& w) -> CohClass {
    return w / std::pow(volume(form, w), 1.0 / n);
  };

  FDConfig cfg;
  Matrix jac(m, r_dim + 1);
  // d/dt along the R factor, written as a function of a 1-vector.
  {
    const double h = cfg.step_scale * std::max(1.0, std::abs(s.t));
    auto central = [&](double hh) -> CohClass {
      return (phi(s.t + hh, s.omega1) - phi(s.t - hh, s.omega1)) / (2.0 * hh);
    };
    jac.col(0) = (4.0 * central(h / 2.0) - central(h)) / 3.0;
  }
  for (int j = 0; j < r_dim; ++j) {
    const CohClass u = q.col(j);
    jac.col(j + 1) = fd_directional(
        [&](const CohClass& w) { return phi(s.t, to_slice(w)); }, s.omega1, u, cfg);
  }
  const Matrix pulled = jac.transpose() * p.gram() * jac;
  r.dt2 = pulled(0, 0);
  for (int j = 0; j < r_dim; ++j) r.max_mixed = std::max(r.max_mixed, std::abs(pulled(0, j + 1)));
  const Matrix slice = q.transpose() * slice_point.gram() * q;
  if (r_dim > 0)
    r.max_slice_dev = (pulled.bottomRightCorner(r_dim, r_dim) - slice).cwiseAbs().maxCoeff();
  return r;
}

PullbackReport pullback_isometry_check(const std::shared_ptr<const IntersectionForm>& source,
                                       const std::shared_ptr<const IntersectionForm>& target,
                                       const Matrix& map, double degree,
                                       const std::vector<CohClass>& points) {
  if (map.rows() != target->rank() || map.cols() != source->rank())
    throw DimensionError("pullback matrix must be h11(X) x h11(Y)");
  if (source->dim() != target->dim()) throw DimensionError("source and target dimensions differ");
  if (!(degree > 0.0)) throw Error("pullback degree must be positive");
  Eigen::FullPivLU<Matrix> lu(map);
  if (lu.rank() < map.cols()) throw Error("pullback matrix must be injective");

  PullbackReport r;
  for (const CohClass& w : points) {
    ConePoint y(source, w);
    ConePoint x(target, CohClass(map * w));
    const double expected = degree * y.vol();
    r.max_vol_dev = std::max(r.max_vol_dev, std::abs(x.vol() - expected) / std::abs(expected));
    const Matrix pulled = map.transpose() * x.gram() * map;
    r.max_gram_dev = std::max(
        r.max_gram_dev, (pulled - y.gram()).cwiseAbs().maxCoeff() / y.gram().cwiseAbs().maxCoeff());
    ++r.points;
  }
  return r;
}

}  // namespace kcone
