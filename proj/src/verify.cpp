#include "kcone/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "kcone/catalog.hpp"
#include "kcone/cone_geometry.hpp"
#include "kcone/errors.hpp"
#include "kcone/fd_oracle.hpp"
#include "kcone/product_algebra.hpp"

namespace kcone {

Check make_check(std::string name, double max_dev, double tol) {
  return {std::move(name), max_dev, tol, std::isfinite(max_dev) && max_dev <= tol};
}

bool Criterion::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<VerifyTarget> catalog_targets() {
  std::vector<VerifyTarget> out;
  for (const auto& e : catalog()) out.push_back({e.form, e.default_omega});
  return out;
}

std::mt19937_64 seeded_rng(const std::string& label) {
  // FNV-1a, so seeds do not depend on the standard library's std::hash.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : label) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return std::mt19937_64(h);
}

namespace {

CohClass random_class(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CohClass v(m);
  for (int i = 0; i < m; ++i) v[i] = normal(rng);
  return v;
}

const std::string& label(const VerifyTarget& t) { return t.form->name(); }

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const VerifyTarget* find_target(const std::vector<VerifyTarget>& targets, const std::string& name) {
  for (const auto& t : targets)
    if (label(t) == name) return &t;
  return nullptr;
}

}  // namespace

CohClass random_admissible_near(const std::shared_ptr<const IntersectionForm>& form,
                                const CohClass& omega, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 200; ++attempt) {
    CohClass r = random_class(form->rank(), rng);
    const double s = scale * std::pow(0.5, attempt / 20) * unit(rng);
    CohClass w = omega + s * omega.norm() * r / r.norm();
    if (admissible(form, w)) return w;
  }
  return omega;
}

Criterion verify_hessian(const std::vector<VerifyTarget>& targets) {
  Criterion c{1, "Hessian of -log Vol equals the Gram matrix (rel 1e-6)", {}, {}};
  for (const auto& t : targets) {
    auto rng = seeded_rng(label(t) + "/hessian");
    std::vector<CohClass> points{t.omega};
    for (int k = 0; k < 3; ++k) points.push_back(random_admissible_near(t.form, t.omega, 0.2, rng));
    double worst = 0.0;
    for (const auto& w : points) worst = std::max(worst, check_hessian_metric(ConePoint(t.form, w)).rel());
    c.checks.push_back(make_check(label(t) + ": hessian vs gram", worst, 1e-6));
  }
  return c;
}

Criterion verify_lemma1(const std::vector<VerifyTarget>& targets) {
  Criterion c{2, "Derivative of Lambda^k along omega (rel 1e-6)", {}, {}};
  for (const auto& t : targets) {
    const ConePoint p(t.form, t.omega);
    const int n = p.dim(), m = p.rank();
    if (n < 2) continue;
    auto rng = seeded_rng(label(t) + "/lemma1");
    for (int k = 1; k <= n - 1; ++k) {
      double worst = 0.0;
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<CohClass> classes;
        for (int q = 0; q < k; ++q) classes.push_back(random_class(m, rng));
        const CohClass v = random_class(m, rng);
        worst = std::max(worst, check_lemma1(p, classes, v).rel());
      }
      c.checks.push_back(make_check(label(t) + ": k=" + std::to_string(k), worst, 1e-6));
    }
  }
  return c;
}

Criterion verify_connection(const std::vector<VerifyTarget>& targets) {
  Criterion c{3, "Connection is torsion-free and metric compatible (rel 1e-6)", {}, {}};
  for (const auto& t : targets) {
    const auto r = check_connection(ConePoint(t.form, t.omega));
    c.checks.push_back(make_check(label(t) + ": torsion", r.torsion, 0.0));
    c.checks.push_back(make_check(label(t) + ": metric compatibility", r.compatibility.rel(), 1e-6));
  }
  return c;
}

Criterion verify_parallel_omega(const std::vector<VerifyTarget>& targets) {
  Criterion c{4, "omega is parallel; nabla preserves primitive fields", {}, {}};
  for (const auto& t : targets) {
    const ConePoint p(t.form, t.omega);
    const int m = p.rank();
    // omega as a vector field is the tautological field, d_z omega = z.
    const VectorField taut = tautological_field();
    double worst = 0.0, gamma_dev = 0.0;
    for (int i = 0; i < m; ++i) {
      const CohClass z = basis_class(m, i);
      worst = std::max(worst, covariant_derivative(p, taut, z).cwiseAbs().maxCoeff());
      gamma_dev = std::max(gamma_dev, (christoffel(p, z, p.omega()) + z).cwiseAbs().maxCoeff());
    }
    c.checks.push_back(make_check(label(t) + ": |nabla_z omega|", worst, 1e-12));
    c.checks.push_back(make_check(label(t) + ": Gamma(z, omega) = -z", gamma_dev, 1e-12));

    auto rng = seeded_rng(label(t) + "/primitive-field");
    double prim = 0.0;
    for (int trial = 0; trial < 3; ++trial)
      prim = std::max(prim, check_primitive_connection(p, random_class(m, rng)));
    c.checks.push_back(make_check(label(t) + ": |Lambda(nabla_z u)|", prim, 1e-8));
  }
  return c;
}

Criterion verify_curvature_agreement(const std::vector<VerifyTarget>& targets) {
  Criterion c{5, "Curvature formula = alternate formula (1e-10) = FD commutator (rel 1e-5)", {}, {}};
  for (const auto& t : targets) {
    const ConePoint p(t.form, t.omega);
    const int m = p.rank();
    const CurvatureTensor r = riemann_tensor(p);
    double alt = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l) {
            const CohClass a = basis_class(m, i), b = basis_class(m, j), z = basis_class(m, k),
                           w = basis_class(m, l);
            const double direct = riemann(p, a, b, z, w);
            alt = std::max({alt, std::abs(direct - riemann_alt(p, a, b, z, w)),
                            std::abs(direct - r(i, j, k, l))});
          }
    c.checks.push_back(make_check(label(t) + ": formula vs alternate", alt, 1e-10));
    c.checks.push_back(make_check(label(t) + ": formula vs FD commutator", check_curvature(p).rel(), 1e-5));
  }
  return c;
}

Criterion verify_tensor_symmetries(const std::vector<VerifyTarget>& targets) {
  Criterion c{6, "Curvature symmetries and first Bianchi identity (1e-12)", {}, {}};
  for (const auto& t : targets) {
    const ConePoint p(t.form, t.omega);
    c.checks.push_back(make_check(label(t) + ": riemann", symmetry_deviation(riemann_tensor(p)).max(), 1e-12));
    c.checks.push_back(make_check(label(t) + ": algebra curvature",
                                  symmetry_deviation(algebra_curvature(AlgebraAtPoint(p))).max(), 1e-12));
  }
  return c;
}

Criterion verify_sign_relation(const std::vector<VerifyTarget>& targets) {
  Criterion c{7, "riemann = -R_alg on primitive parts (1e-10)", {}, {}};
  for (const auto& t : targets) {
    const ConePoint p(t.form, t.omega);
    const int m = p.rank();
    const CurvatureTensor r = riemann_tensor(p);
    const CurvatureTensor alg = algebra_curvature(AlgebraAtPoint(p));
    std::vector<CohClass> prim(m);
    for (int i = 0; i < m; ++i) prim[i] = primitive_part(p, basis_class(m, i));
    double worst = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l)
            worst = std::max(worst, std::abs(r(i, j, k, l) + alg.eval(prim[i], prim[j], prim[k], prim[l])));
    c.checks.push_back(make_check(label(t) + ": riemann + R_alg", worst, 1e-10));
  }
  return c;
}

Criterion verify_surface_benchmark(const std::vector<VerifyTarget>& targets) {
  Criterion c{8, "Surface benchmark and flat rank-one cones", {}, {}};
  if (const VerifyTarget* lor = find_target(targets, "LOR3")) {
    const ConePoint p(lor->form, lor->omega);
    const CurvatureTensor r = riemann_tensor(p);
    const CohClass e2 = basis_class(3, 1), e3 = basis_class(3, 2);
    c.checks.push_back(make_check("LOR3: sectional(e2,e3) + 0.5", std::abs(sectional(r, e2, e3) + 0.5), 1e-8));
    const DerivedCurvatures d = derived_curvatures(r);
    const CohClass u = e2 / norm(p, e2);
    const double ric = u.dot(d.ricci * u);
    c.checks.push_back(make_check("LOR3: Ric(u,u) + 0.5", std::abs(ric + 0.5), 1e-8));
    c.checks.push_back(make_check("LOR3: scalar + 1", std::abs(d.scalar + 1.0), 1e-7));
    double omega_planes = 0.0;
    auto rng = seeded_rng("LOR3/omega-planes");
    std::vector<CohClass> others{basis_class(3, 1), basis_class(3, 2)};
    for (int k = 0; k < 5; ++k) others.push_back(random_class(3, rng));
    for (const auto& x : others) omega_planes = std::max(omega_planes, std::abs(sectional(r, x, p.omega())));
    c.checks.push_back(make_check("LOR3: sectional on planes through omega", omega_planes, 1e-10));
  }
  for (const auto& t : targets) {
    if (t.form->rank() != 1) continue;
    const CurvatureTensor r = riemann_tensor(ConePoint(t.form, t.omega));
    c.checks.push_back(make_check(label(t) + ": |R| (rank one)", r.max_abs(), 1e-14));
  }
  return c;
}

Criterion verify_geodesics(const std::vector<VerifyTarget>& targets) {
  Criterion c{9, "RK4 geodesics: radial closed form and speed conservation (1e-8)", {}, {}};
  constexpr int steps = 1000;
  constexpr double T = 1.0;
  for (const auto& t : targets) {
    const ConePoint p(t.form, t.omega);
    const double n = p.dim();
    const GeodesicPath radial = integrate_geodesic(p, p.omega() / n, T, steps);
    double worst = 0.0;
    for (const auto& s : radial.samples)
      worst = std::max(worst, (s.point - std::exp(s.t / n) * p.omega()).norm() / p.omega().norm());
    c.checks.push_back(make_check(label(t) + ": radial closed form", worst, 1e-8));

    auto rng = seeded_rng(label(t) + "/geodesic");
    double drift = 0.0;
    int done = 0;
    for (int attempt = 0; done < 10 && attempt < 100; ++attempt) {
      CohClass v = random_class(p.rank(), rng);
      v *= 0.5 / norm(p, v);
      try {
        drift = std::max(drift, integrate_geodesic(p, v, T, steps).speed_drift);
        ++done;
      } catch (const LeftCone&) {
      }
    }
    if (done < 10) drift = std::numeric_limits<double>::infinity();
    c.checks.push_back(make_check(label(t) + ": speed drift (10 random starts)", drift, 1e-8));
  }
  return c;
}

Criterion verify_length_bound(const std::vector<VerifyTarget>& targets) {
  Criterion c{10, "Length >= |delta log Vol| / sqrt(n)", {}, {}};
  for (const auto& t : targets) {
    const double n = t.form->dim();
    auto rng = seeded_rng(label(t) + "/length");
    std::uniform_real_distribution<double> radial_scale(-1.0, 1.0);
    double worst_violation = 0.0;
    int paths = 0;
    for (int attempt = 0; paths < 50 && attempt < 500; ++attempt) {
      std::vector<CohClass> vertices{t.omega};
      for (int k = 0; k < 4; ++k)
        vertices.push_back(std::exp(radial_scale(rng)) * random_admissible_near(t.form, t.omega, 0.3, rng));
      std::vector<CohClass> samples;
      bool ok = true;
      for (std::size_t k = 0; k + 1 < vertices.size() && ok; ++k)
        for (int q = 0; q < 20; ++q) {
          const CohClass x = vertices[k] + (q / 20.0) * (vertices[k + 1] - vertices[k]);
          if (!admissible(t.form, x)) {
            ok = false;
            break;
          }
          samples.push_back(x);
        }
      if (!ok) continue;
      samples.push_back(vertices.back());
      const LengthReport r = path_length(t.form, samples);
      worst_violation = std::max(worst_violation, r.lower_bound - r.length);
      ++paths;
    }
    if (paths < 50) worst_violation = std::numeric_limits<double>::infinity();
    c.checks.push_back(make_check(label(t) + ": bound deficit over 50 paths", std::max(worst_violation, 0.0), 1e-9));

    std::vector<CohClass> radial;
    for (int k = 0; k <= 1000; ++k) radial.push_back(std::exp(k / 1000.0 / n) * t.omega);
    const LengthReport r = path_length(t.form, radial);
    c.checks.push_back(make_check(label(t) + ": radial path attains the bound", std::abs(r.length - r.lower_bound), 1e-8));
    if (r.length < r.sqrt2_constant)
      c.notes.push_back(label(t) + ": radial path length " + format_double(r.length) +
                        " is below the sqrt(2)/sqrt(n) constant " + format_double(r.sqrt2_constant));
  }
  return c;
}

Criterion verify_boundary_probes(const std::vector<VerifyTarget>& targets) {
  Criterion c{11, "Boundary probes: volume-zero boundary far, positive-volume boundary near", {}, {}};
  const auto schedule = halving_schedule(1.0, 1e-4, 30);
  if (const VerifyTarget* t = find_target(targets, "P1XP1")) {
    const ProbeReport r = boundary_probe(t->form, basis_class(2, 0), t->omega, schedule);
    c.checks.push_back(make_check("P1XP1: classified DIVERGENT", r.verdict == ProbeVerdict::divergent ? 0.0 : 1.0, 0.0));
    c.checks.push_back(make_check("P1XP1: threshold - min growth per halving",
                                  std::max(0.0, r.divergence_threshold - r.min_recent_growth), 0.0));
  }
  if (const VerifyTarget* t = find_target(targets, "BLP2")) {
    const ProbeReport r = boundary_probe(t->form, basis_class(2, 0), t->omega, schedule);
    c.checks.push_back(make_check("BLP2: classified CONVERGENT", r.verdict == ProbeVerdict::convergent ? 0.0 : 1.0, 0.0));
    c.checks.push_back(make_check("BLP2: tail variation", r.tail_variation, kProbeConvTol));
  }
  return c;
}

Criterion verify_algebra(const std::vector<VerifyTarget>& targets) {
  Criterion c{12, "Algebra identities, Kulkarni-Nomizu reconstruction, derivations", {}, {}};
  for (const auto& t : targets) {
    const AlgebraAtPoint a(ConePoint(t.form, t.omega));
    const auto ids = algebra_identities(a);
    c.checks.push_back(make_check(label(t) + ": x.omega identity", ids.x_omega, 1e-10));
    c.checks.push_back(make_check(label(t) + ": omega.omega identity", ids.omega_omega, 1e-10));
    const auto kn = kn_residuals(a, kn_decompose(a));
    c.checks.push_back(make_check(label(t) + ": KN reconstruction",
                                  std::max({kn.reconstruction, kn.curvature, kn.symmetry}), 1e-10));
    const auto d = derivations(a);
    const int m = a.rank(), n = a.base().dim();
    int expected = -1;
    if (m == 1) expected = 0;
    else if (n == 2) expected = (m - 1) * (m - 2) / 2;
    if (expected >= 0)
      c.checks.push_back(make_check(label(t) + ": derivation dimension = " + std::to_string(expected),
                                    std::abs(static_cast<double>(d.generators.size()) - expected), 0.0));
    c.checks.push_back(make_check(label(t) + ": derivation post-checks",
                                  std::max({d.max_system_residual, d.max_omega, d.max_lambda, d.max_skew}), 1e-8));
  }
  return c;
}

Criterion verify_pullback(const std::vector<VerifyTarget>& targets) {
  Criterion c{13, "Pullbacks along finite maps are isometries (1e-10)", {}, {}};
  for (const auto& t : targets) {
    auto rng = seeded_rng(label(t) + "/pullback");
    std::vector<CohClass> points{t.omega};
    for (int k = 0; k < 3; ++k) points.push_back(random_admissible_near(t.form, t.omega, 0.2, rng));
    const int m = t.form->rank();
    const Matrix id = Matrix::Identity(m, m);
    const auto same = pullback_isometry_check(t.form, t.form, id, 1.0, points);
    c.checks.push_back(make_check(label(t) + ": identity", std::max(same.max_vol_dev, same.max_gram_dev), 1e-10));
    auto doubled = std::make_shared<const IntersectionForm>(t.form->scaled(2.0));
    const auto cover = pullback_isometry_check(t.form, doubled, id, 2.0, points);
    c.checks.push_back(make_check(label(t) + ": degree-2 scaling", std::max(cover.max_vol_dev, cover.max_gram_dev), 1e-10));
  }
  if (const VerifyTarget* t = find_target(targets, "P1XP1")) {
    Matrix swap(2, 2);
    swap << 0, 1, 1, 0;
    auto rng = seeded_rng("P1XP1/swap");
    std::vector<CohClass> points{t->omega};
    for (int k = 0; k < 3; ++k) points.push_back(random_admissible_near(t->form, t->omega, 0.2, rng));
    const auto r = pullback_isometry_check(t->form, t->form, swap, 1.0, points);
    c.checks.push_back(make_check("P1XP1: basis swap", std::max(r.max_vol_dev, r.max_gram_dev), 1e-10));
  }
  return c;
}

std::vector<Criterion> run_verification(const std::vector<VerifyTarget>& targets) {
  using Fn = Criterion (*)(const std::vector<VerifyTarget>&);
  static constexpr Fn all[] = {
      verify_hessian,         verify_lemma1,           verify_connection,
      verify_parallel_omega,  verify_curvature_agreement, verify_tensor_symmetries,
      verify_sign_relation,   verify_surface_benchmark, verify_geodesics,
      verify_length_bound,    verify_boundary_probes,  verify_algebra,
      verify_pullback};
  std::vector<Criterion> out;
  int id = 0;
  for (Fn fn : all) {
    ++id;
    try {
      out.push_back(fn(targets));
    } catch (const Error& e) {
      Criterion c{id, "aborted", {}, {}};
      c.checks.push_back({std::string(e.kind()) + ": " + e.what(),
                          std::numeric_limits<double>::infinity(), 0.0, false});
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace kcone
