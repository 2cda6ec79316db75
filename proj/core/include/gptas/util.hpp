#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace gptas {

// Malformed input text; line is 1-based, 0 when unknown.
struct ParseError : std::runtime_error {
  int line;
  explicit ParseError(const std::string& msg, int line = 0);
};

// Invalid graph or argument handed to a library routine.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A bound the algorithm promises failed to hold at runtime.
struct BoundViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Broken internal invariant.
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& msg);       // throws StructuralError
void ensure(bool ok, const std::string& msg);        // throws InternalError
void ensure_bound(bool ok, const std::string& msg);  // throws BoundViolation

// Comparisons with relative slack, so quantities that differ only by the
// order floating point rounding happened in still compare as intended.
inline constexpr double kRelTol = 1e-9;

inline double cmp_tol(double a, double b) {
  double s = std::fabs(a) > std::fabs(b) ? std::fabs(a) : std::fabs(b);
  return kRelTol * (s > 1.0 ? s : 1.0);
}
inline bool approx_le(double a, double b) { return a <= b + cmp_tol(a, b); }
inline bool approx_ge(double a, double b) { return approx_le(b, a); }
inline bool approx_eq(double a, double b) { return std::fabs(a - b) <= cmp_tol(a, b); }
inline bool approx_lt(double a, double b) { return a < b - cmp_tol(a, b); }

// Deterministic RNG. Integer and unit draws are hand-rolled on top of
// mt19937_64 because the standard distributions differ between library
// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // uniform over [lo, hi], both ends included
  std::int64_t range(std::int64_t lo, std::int64_t hi);

  double unit();  // [0, 1)
  bool coin(double p) { return unit() < p; }

  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(range(0, static_cast<std::int64_t>(xs.size()) - 1))];
  }

  template <typename T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(range(0, static_cast<std::int64_t>(i) - 1));
      std::swap(xs[i - 1], xs[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace gptas
