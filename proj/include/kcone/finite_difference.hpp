#pragma once

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "kcone/errors.hpp"
#include "kcone/intersection_ring.hpp"

namespace kcone {

struct FDConfig {
  double step_scale = 1e-4;         // first derivatives: h = step_scale * |omega|
  double second_step_scale = 1e-3;  // second derivatives
  bool richardson = true;           // one extrapolation level with h and h/2

  void validate() const {
    if (!(step_scale > 0.0 && step_scale < 1e-1) ||
        !(second_step_scale > 0.0 && second_step_scale < 1e-1))
      throw Error("finite-difference step scale must lie in (0, 0.1)");
  }
};

namespace detail {
template <class F>
using FDValue = std::decay_t<std::invoke_result_t<F, const CohClass&>>;
}

// Derivative of f at omega in direction z by central differences, optionally
// Richardson-extrapolated. f may return a double or a CohClass.
template <class F>
detail::FDValue<F> fd_directional(F&& f, const CohClass& omega, const CohClass& z,
                                  const FDConfig& cfg = {}) {
  cfg.validate();
  const double zn = z.norm();
  auto central = [&](double h) -> detail::FDValue<F> {
    CohClass plus = omega + h * z;
    CohClass minus = omega - h * z;
    return (f(plus) - f(minus)) / (2.0 * h);
  };
  if (zn == 0.0) return central(1.0) * 0.0;
  const double h = cfg.step_scale * omega.norm() / zn;
  if (!cfg.richardson) return central(h);
  auto coarse = central(h);
  auto fine = central(h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

// Mixed second derivative d_{z1} d_{z2} f at omega (scalar f).
template <class F>
double fd_second(F&& f, const CohClass& omega, const CohClass& z1, const CohClass& z2,
                 const FDConfig& cfg = {}) {
  cfg.validate();
  const double scale = cfg.second_step_scale * omega.norm();
  const double h1 = scale / std::max(z1.norm(), 1e-300);
  const double h2 = scale / std::max(z2.norm(), 1e-300);
  auto quad = [&](double s) {
    const double a = s * h1, b = s * h2;
    return (f(CohClass(omega + a * z1 + b * z2)) - f(CohClass(omega + a * z1 - b * z2)) -
            f(CohClass(omega - a * z1 + b * z2)) + f(CohClass(omega - a * z1 - b * z2))) /
           (4.0 * a * b);
  };
  if (z1.norm() == 0.0 || z2.norm() == 0.0) return 0.0;
  if (!cfg.richardson) return quad(1.0);
  return (4.0 * quad(0.5) - quad(1.0)) / 3.0;
}

}  // namespace kcone
