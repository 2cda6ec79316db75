#pragma once

#include <cstdint>

namespace gptas {

struct PtasParams {
  double epsilon = 0.5;  // approximation slack, > 0
  double xi = 2.0;       // preprocessing radius factor, >= 1/2
  int theta_max = 12;    // cap on portals per brick
  int width_cap = 14;    // widest tree decomposition the table stage accepts
};

// Working constants for one instance. gamma bounds the mortar length in
// units of the boundary length, kappa the brick side complexity; theta is
// the portal count, levels the modulus of the contraction step.
struct DerivedParams {
  double gamma = 0.0;
  double kappa = 0.0;
  int kappa_ceil = 0;  // brick side vertex budget
  int stride = 0;      // columns per brick
  int theta = 0;
  std::int64_t levels = 0;
};

DerivedParams derive_params(const PtasParams& par, int genus);

}  // namespace gptas
