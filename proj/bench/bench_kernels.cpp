// Serial vs OpenMP timings for the curvature table kernels.

#include <chrono>
#include <cstdio>
#include <memory>

#include "kcone/cone_geometry.hpp"
#include "kcone/product_algebra.hpp"

using namespace kcone;

namespace {

// Lorentzian surface form x_1^2 - x_2^2 - ... - x_m^2 at e_1.
ConePoint lorentz_point(int m) {
  std::vector<std::pair<MultiIndex, double>> entries{{{0, 0}, 1.0}};
  for (int i = 1; i < m; ++i) entries.push_back({{i, i}, -1.0});
  auto form = std::make_shared<const IntersectionForm>("LOR" + std::to_string(m), 2, m, entries);
  return ConePoint(form, basis_class(m, 0));
}

// Product of k projective lines: dim k, h11 k, c(e_1, ..., e_k) = 1.
ConePoint p1_power_point(int k) {
  MultiIndex index(k);
  for (int i = 0; i < k; ++i) index[i] = i;
  auto form = std::make_shared<const IntersectionForm>("P1^" + std::to_string(k), k, k,
                                                       std::vector<std::pair<MultiIndex, double>>{{index, 1.0}});
  return ConePoint(form, CohClass::Ones(k));
}

template <class F>
double best_ms(F&& f, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void row(const char* what, const ConePoint& p) {
  double sink = 0.0;
  const double rs = best_ms([&] { sink += riemann_tensor(p, Exec::serial).max_abs(); }, 3);
  const double rp = best_ms([&] { sink += riemann_tensor(p, Exec::parallel).max_abs(); }, 3);
  const AlgebraAtPoint a(p);
  const double as = best_ms([&] { sink += algebra_curvature(a, Exec::serial).max_abs(); }, 3);
  const double ap = best_ms([&] { sink += algebra_curvature(a, Exec::parallel).max_abs(); }, 3);
  std::printf("%-8s m=%2d n=%d  riemann %9.3f ms / %9.3f ms   algebra %9.3f ms / %9.3f ms  (%g)\n",
              what, p.rank(), p.dim(), rs, rp, as, ap, sink);
}

}  // namespace

int main() {
  std::printf("threads: %d   columns: serial / parallel\n", max_threads());
  for (int m : {3, 6, 10, 16, 24}) row("lorentz", lorentz_point(m));
  for (int k : {2, 3, 4, 5}) row("p1^k", p1_power_point(k));
  return 0;
}
