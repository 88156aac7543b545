#include "kcone/fd_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace kcone {

FDReport check_hessian_metric(const ConePoint& p, const FDConfig& cfg) {
  const IntersectionForm& form = p.form();
  const int m = p.rank();
  auto neg_log_vol = [&](const CohClass& w) { return -std::log(volume(form, w)); };
  FDReport r;
  r.scale = p.gram().cwiseAbs().maxCoeff();
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const double h = fd_second(neg_log_vol, p.omega(), basis_class(m, i), basis_class(m, j), cfg);
      r.max_abs = std::max(r.max_abs, std::abs(h - p.gram()(i, j)));
    }
  return r;
}

FDReport check_lemma1(const ConePoint& p, const std::vector<CohClass>& classes, const CohClass& v,
                      const FDConfig& cfg) {
  const auto& form = p.form_ptr();
  auto lam = [&](const CohClass& w) { return lambda_scalar(ConePoint(form, w), classes); };
  const double fd = fd_directional(lam, p.omega(), v, cfg);
  std::vector<CohClass> extended = classes;
  extended.push_back(v);
  const double a = -lambda1(p, v) * lambda_scalar(p, classes);
  const double b = lambda_scalar(p, extended);
  return {std::abs(fd - (a + b)), std::abs(a) + std::abs(b)};
}

ConnectionReport check_connection(const ConePoint& p, const FDConfig& cfg) {
  const auto& form = p.form_ptr();
  const int m = p.rank();
  ConnectionReport r;
  std::vector<CohClass> e(m);
  for (int i = 0; i < m; ++i) e[i] = basis_class(m, i);

  std::vector<double> dev(static_cast<std::size_t>(m) * m * m, 0.0);
  double term_scale = p.gram().cwiseAbs().maxCoeff() / p.omega().norm();
  for (int z = 0; z < m; ++z) {
    for (int u = 0; u < m; ++u) {
      const CohClass gzu = christoffel(p, e[z], e[u]);
      r.torsion = std::max(r.torsion, (gzu - christoffel(p, e[u], e[z])).cwiseAbs().maxCoeff());
      for (int v = 0; v < m; ++v) {
        auto g_uv = [&](const CohClass& w) { return inner(ConePoint(form, w), e[u], e[v]); };
        const double lhs = fd_directional(g_uv, p.omega(), e[z], cfg);
        const double rhs = inner(p, gzu, e[v]) + inner(p, e[u], christoffel(p, e[z], e[v]));
        term_scale = std::max({term_scale, std::abs(lhs), std::abs(rhs)});
        dev[(z * m + u) * m + v] = std::abs(lhs - rhs);
      }
    }
  }
  r.compatibility.max_abs = *std::max_element(dev.begin(), dev.end());
  r.compatibility.scale = term_scale;
  return r;
}

FDReport check_curvature(const ConePoint& p, const FDConfig& cfg, Exec exec) {
  const auto& form = p.form_ptr();
  const int m = p.rank();
  std::vector<CohClass> e(m);
  for (int i = 0; i < m; ++i) e[i] = basis_class(m, i);

  // gamma[b*m + c] = Gamma(e_b, e_c) at p; dgamma[(a*m + b)*m + c] = d_a of it.
  std::vector<CohClass> gamma(m * m);
  for (int b = 0; b < m; ++b)
    for (int c = 0; c < m; ++c) gamma[b * m + c] = christoffel(p, e[b], e[c]);

  std::vector<CohClass> dgamma(static_cast<std::size_t>(m) * m * m);
  auto differentiate = [&](int a) {
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        auto g = [&](const CohClass& w) -> CohClass { return christoffel(ConePoint(form, w), e[b], e[c]); };
        dgamma[(a * m + b) * m + c] = fd_directional(g, p.omega(), e[a], cfg);
      }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int a = 0; a < m; ++a) differentiate(a);
  } else {
    for (int a = 0; a < m; ++a) differentiate(a);
  }

  const CurvatureTensor analytic = riemann_tensor(p, exec);
  FDReport r;
  const double gmax = p.gram().cwiseAbs().maxCoeff();
  r.scale = std::max(analytic.max_abs(), gmax * gmax);
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v)
      for (int z = 0; z < m; ++z) {
        const CohClass rvec = dgamma[(u * m + v) * m + z] - dgamma[(v * m + u) * m + z] +
                              christoffel(p, e[u], gamma[v * m + z]) -
                              christoffel(p, e[v], gamma[u * m + z]);
        const CohClass lowered = p.gram() * rvec;
        for (int w = 0; w < m; ++w)
          r.max_abs = std::max(r.max_abs, std::abs(lowered[w] - analytic(u, v, z, w)));
      }
  return r;
}

VectorField with_fd_jacobian(VectorField field, const FDConfig& cfg) {
  auto value = field.value_at;
  field.jacobian_at = [value, cfg](const ConePoint& p, const CohClass& z) -> CohClass {
    const auto& form = p.form_ptr();
    return fd_directional([&](const CohClass& w) -> CohClass { return value(ConePoint(form, w)); },
                          p.omega(), z, cfg);
  };
  return field;
}

double check_primitive_connection(const ConePoint& p, const CohClass& u0, const FDConfig& cfg) {
  const VectorField u = with_fd_jacobian(primitive_projection_field(u0), cfg);
  double worst = 0.0;
  for (int i = 0; i < p.rank(); ++i)
    worst = std::max(worst, std::abs(lambda1(p, covariant_derivative(p, u, basis_class(p.rank(), i)))));
  return worst;
}

}  // namespace kcone
