#include <doctest.h>

#include <cmath>
#include <random>

#include "kcone/catalog.hpp"
#include "kcone/errors.hpp"
#include "kcone/fd_oracle.hpp"

using namespace kcone;

namespace {

CohClass vec(std::initializer_list<double> xs) {
  CohClass v(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

CohClass random_class(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  CohClass v(m);
  for (int i = 0; i < m; ++i) v(i) = d(rng);
  return v;
}

ConePoint at(const char* name) {
  auto e = find_catalog(name);
  return ConePoint(e->form, e->default_omega);
}

ConePoint blowup_point() {
  auto f = std::make_shared<const IntersectionForm>(
      "BL2P3", 3, 3,
      std::vector<std::pair<MultiIndex, double>>{{{0, 0, 0}, 1.0}, {{1, 1, 1}, 1.0}, {{2, 2, 2}, 1.0}});
  return ConePoint(f, vec({1.0, -0.2, -0.3}));
}

}  // namespace

TEST_CASE("config validation") {
  FDConfig ok;
  CHECK_NOTHROW(ok.validate());
  FDConfig bad;
  bad.step_scale = 0.5;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad.step_scale = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  FDConfig bad2;
  bad2.second_step_scale = -1e-3;
  CHECK_THROWS_AS(check_hessian_metric(at("P1XP1"), bad2), Error);
}

TEST_CASE("directional derivative examples") {
  for (const auto& e : catalog()) {
    ConePoint p(e.form, e.default_omega);
    const auto& f = *e.form;
    auto vol = [&](const CohClass& w) { return volume(f, w); };
    for (int i = 0; i < p.rank(); ++i) {
      CohClass z = basis_class(p.rank(), i);
      const double expect = lambda1(p, z) * p.vol();
      const double got = fd_directional(vol, p.omega(), z);
      CHECK(std::abs(got - expect) <= 1e-7 * std::max(std::abs(expect), p.vol()));
    }
    auto logvol = [&](const CohClass& w) { return std::log(volume(f, w)); };
    CHECK(fd_directional(logvol, p.omega(), p.omega()) == doctest::Approx(p.dim()).epsilon(1e-9));
  }

  // linear functions are exact to roundoff, with or without extrapolation
  CohClass c = vec({0.3, -1.7, 2.5});
  auto lin = [&](const CohClass& w) { return c.dot(w); };
  FDConfig plain;
  plain.richardson = false;
  CHECK(fd_directional(lin, vec({1, 2, 3}), vec({1, 1, 0})) == doctest::Approx(-1.4).epsilon(1e-10));
  CHECK(fd_directional(lin, vec({1, 2, 3}), vec({1, 1, 0}), plain) == doctest::Approx(-1.4).epsilon(1e-10));

  // vector-valued, and the zero direction
  auto twice = [](const CohClass& w) -> CohClass { return 2.0 * w; };
  CohClass d = fd_directional(twice, vec({1, 1}), vec({0, 3}));
  CHECK(d(0) == doctest::Approx(0.0).scale(1.0));
  CHECK(d(1) == doctest::Approx(6.0));
  CHECK(fd_directional(lin, vec({1, 2, 3}), vec({0, 0, 0})) == 0.0);
}

TEST_CASE("Richardson extrapolation beats plain central differences by at least 4x") {
  std::mt19937_64 rng(21);
  for (const auto& e : catalog()) {
    ConePoint p(e.form, e.default_omega);
    const auto& f = *e.form;
    auto logvol = [&](const CohClass& w) { return std::log(volume(f, w)); };
    CohClass z = random_class(p.rank(), rng);
    const double exact = lambda1(p, z);

    FDConfig coarse;
    coarse.step_scale = 2e-2;
    coarse.richardson = false;
    FDConfig fine = coarse;
    fine.step_scale = 1e-2;
    FDConfig rich = coarse;
    rich.richardson = true;

    const double e_coarse = std::abs(fd_directional(logvol, p.omega(), z, coarse) - exact);
    const double e_fine = std::abs(fd_directional(logvol, p.omega(), z, fine) - exact);
    const double e_rich = std::abs(fd_directional(logvol, p.omega(), z, rich) - exact);
    if (e_coarse < 1e-12) continue;  // log-linear along z, nothing to witness
    // second-order: halving h cuts the error about 4x
    CHECK(e_coarse / e_fine == doctest::Approx(4.0).epsilon(0.1));
    CHECK(e_rich * 4.0 <= e_fine);
  }
}

TEST_CASE("mixed second derivative") {
  auto f = [](const CohClass& w) { return w(0) * w(0) * w(1) + std::exp(w(1)); };
  CohClass w = vec({1.5, 0.5});
  // d/dx d/dy = 2x
  CHECK(fd_second(f, w, vec({1, 0}), vec({0, 1})) == doctest::Approx(3.0).epsilon(1e-9));
  // d^2/dy^2 = e^y
  CHECK(fd_second(f, w, vec({0, 1}), vec({0, 1})) == doctest::Approx(std::exp(0.5)).epsilon(1e-8));
  CHECK(fd_second(f, w, vec({0, 0}), vec({0, 1})) == 0.0);
}

TEST_CASE("Hessian of -log Vol is the metric") {
  CHECK(check_hessian_metric(at("P1XP1")).rel() <= 1e-6);
  CHECK(check_hessian_metric(at("LOR3")).rel() <= 1e-6);
  auto q = find_catalog("QUINTIC");
  CHECK(check_hessian_metric(ConePoint(q->form, vec({1}))).rel() <= 1e-6);
  CHECK(check_hessian_metric(ConePoint(q->form, vec({2}))).rel() <= 1e-6);
  for (const auto& e : catalog()) CHECK(check_hessian_metric(ConePoint(e.form, e.default_omega)).rel() <= 1e-6);
  CHECK(check_hessian_metric(blowup_point()).rel() <= 1e-6);
}

TEST_CASE("derivative of Lambda^k along a direction") {
  std::mt19937_64 rng(1);
  auto p = at("P1XP1");
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<CohClass> u{random_class(2, rng)};
    CHECK(check_lemma1(p, u, random_class(2, rng)).rel() <= 1e-6);
  }
  auto q = at("QUINTIC");
  std::vector<CohClass> two{vec({1}), vec({-0.4})};
  CHECK(check_lemma1(q, two, vec({0.7})).rel() <= 1e-6);
  auto b = blowup_point();
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<CohClass> uu{random_class(3, rng), random_class(3, rng)};
    CHECK(check_lemma1(b, uu, random_class(3, rng)).rel() <= 1e-6);
  }
  auto zero = check_lemma1(p, {vec({1, 0})}, vec({0, 0}));
  CHECK(zero.max_abs == 0.0);
}

TEST_CASE("connection is metric and torsion free") {
  for (const auto& e : catalog()) {
    auto rep = check_connection(ConePoint(e.form, e.default_omega));
    CHECK(rep.compatibility.rel() <= 1e-6);
    CHECK(rep.torsion == 0.0);
  }
  CHECK(check_connection(blowup_point()).compatibility.rel() <= 1e-6);
}

TEST_CASE("curvature formula matches the differentiated connection") {
  CHECK(check_curvature(at("LOR3")).rel() <= 1e-5);
  CHECK(check_curvature(at("CY3GEN")).rel() <= 1e-5);
  CHECK(check_curvature(at("BLP2")).rel() <= 1e-5);
  auto b = check_curvature(blowup_point());
  CHECK(b.rel() <= 1e-5);
  CHECK(b.scale > 0.0);
  auto one = check_curvature(at("QUINTIC"));
  CHECK(one.max_abs <= 1e-10);
  CHECK(check_curvature(at("LOR3"), {}, Exec::serial).max_abs == check_curvature(at("LOR3"), {}, Exec::parallel).max_abs);
}

TEST_CASE("primitive projection field has primitive covariant derivative") {
  std::mt19937_64 rng(6);
  for (const auto& e : catalog()) {
    ConePoint p(e.form, e.default_omega);
    CHECK(check_primitive_connection(p, random_class(p.rank(), rng)) <= 1e-8);
  }
  CHECK(check_primitive_connection(blowup_point(), vec({0.2, 1.0, -0.5})) <= 1e-8);
}

TEST_CASE("synthesized jacobians") {
  auto p = at("CY3GEN");
  auto taut = with_fd_jacobian(VectorField{tautological_field().value_at, {}});
  CohClass z = vec({0.3, -0.8});
  CHECK((taut.jacobian_at(p, z) - z).norm() <= 1e-9);
  CHECK(covariant_derivative(p, taut, z).norm() <= 1e-9);
  // linear in the direction
  auto prim = with_fd_jacobian(primitive_projection_field(vec({1, 0})));
  CohClass a = vec({1, 2}), b = vec({-0.5, 0.25});
  CohClass sum = prim.jacobian_at(p, CohClass(a + 3.0 * b));
  CHECK((sum - prim.jacobian_at(p, a) - 3.0 * prim.jacobian_at(p, b)).norm() <= 1e-8);
}
