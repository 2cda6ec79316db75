#include "gptas/util.hpp"

#include <fmt/core.h>

#include <limits>

namespace gptas {

ParseError::ParseError(const std::string& msg, int line_)
    : std::runtime_error(line_ > 0 ? fmt::format("line {}: {}", line_, msg) : msg),
      line(line_) {}

void require(bool ok, const std::string& msg) {
  if (!ok) throw StructuralError(msg);
}

void ensure(bool ok, const std::string& msg) {
  if (!ok) throw InternalError(msg);
}

void ensure_bound(bool ok, const std::string& msg) {
  if (!ok) throw BoundViolation(msg);
}

std::int64_t Rng::range(std::int64_t lo, std::int64_t hi) {
  ensure(lo <= hi, "Rng::range on an empty interval");
  std::uint64_t span =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(bits());
  std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % span + 1) % span;
  std::uint64_t bound = std::numeric_limits<std::uint64_t>::max() - rem;
  std::uint64_t r;
  do {
    r = bits();
  } while (r > bound);
  return lo + static_cast<std::int64_t>(r % span);
}

double Rng::unit() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

}  // namespace gptas
