#include "gptas/params.hpp"

#include <cmath>
#include <limits>

#include "gptas/util.hpp"

namespace gptas {

namespace {

// Ceil of a positive double into an int, clamped instead of overflowing.
int ceil_to_int(double x) {
  double c = std::ceil(x);
  if (c >= static_cast<double>(std::numeric_limits<int>::max())) {
    return std::numeric_limits<int>::max();
  }
  return static_cast<int>(c);
}

std::int64_t ceil_to_int64(double x) {
  double c = std::ceil(x);
  if (c >= static_cast<double>(std::numeric_limits<std::int64_t>::max())) {
    return std::numeric_limits<std::int64_t>::max();
  }
  return static_cast<std::int64_t>(c);
}

}  // namespace

DerivedParams derive_params(const PtasParams& par, int genus) {
  require(par.epsilon > 0.0, "epsilon must be positive");
  require(par.xi >= 0.5, "xi must be at least 1/2");
  require(par.theta_max >= 1, "theta_max must be at least 1");
  require(genus >= 0, "genus must be nonnegative");

  DerivedParams d;
  double inv = 1.0 / par.epsilon;
  // Boundary-to-mortar growth (1 + 1/eps)^2 on top of the cut-graph doubling
  // 2 * (4 xi g + 1).
  d.gamma = 2.0 * (8.0 * par.xi * genus + 2.0) * (inv + 1.0) * (inv + 1.0);
  d.kappa = d.gamma * inv;
  d.kappa_ceil = std::max(2, ceil_to_int(d.kappa));
  d.stride = std::max(1, d.kappa_ceil - 1);
  double want_theta = std::ceil(d.gamma * d.kappa);
  d.theta = want_theta < static_cast<double>(par.theta_max)
                ? static_cast<int>(want_theta)
                : par.theta_max;
  d.levels = ceil_to_int64(3.0 * d.theta * d.gamma * inv);
  return d;
}

}  // namespace gptas
