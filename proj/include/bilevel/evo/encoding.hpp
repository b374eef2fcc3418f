#pragma once

#include <cstdint>

#include "bilevel/evo/genome.hpp"

namespace bilevel::evo {

// Offset binary: a gene v in {lo..hi} is stored as the unsigned value v - lo
// in bit_width(bound) bits. Decoding clamps to the bound, so bit patterns
// beyond hi map to hi.

int bit_width(const IntBound& bound);
std::uint64_t encode(std::int64_t value, const IntBound& bound);
std::int64_t decode(std::uint64_t bits, const IntBound& bound);

}  // namespace bilevel::evo
