#include "bilevel/evo/encoding.hpp"

#include <bit>

namespace bilevel::evo {

int bit_width(const IntBound& bound) {
  if (bound.hi <= bound.lo) return 0;
  return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(bound.hi - bound.lo)));
}

std::uint64_t encode(std::int64_t value, const IntBound& bound) {
  const int width = bit_width(bound);
  const auto raw = static_cast<std::uint64_t>(value - bound.lo);
  if (width >= 64) return raw;
  return raw & ((std::uint64_t{1} << width) - 1);
}

std::int64_t decode(std::uint64_t bits, const IntBound& bound) {
  const auto span = static_cast<std::uint64_t>(bound.hi - bound.lo);
  if (bits > span) return bound.hi;
  return bound.lo + static_cast<std::int64_t>(bits);
}

}  // namespace bilevel::evo
