#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bilevel/evo/genome.hpp"
#include "bilevel/evo/params.hpp"

namespace bilevel::evo {

inline constexpr double kPcxDenominatorFloor = 1e-10;
inline constexpr double kPcxOmegaEtaCap = 1e6;

/// Deterministic weight along (p2 - p1) / 2: sum over genes of m / |x_p - g|,
/// each denominator floored and the total capped.
double pcx_omega_eta(std::span<const double> index_parent, std::span<const double> centroid);

/// Parent-centric child around `index_parent`, with `p1`, `p2` the other two
/// parents. Unclamped; the caller applies bounds. In literal mode the
/// result is a pure function of the parents and `rng` is not touched.
std::vector<double> pcx_crossover(std::span<const double> p1, std::span<const double> p2,
                                  std::span<const double> index_parent, const EAParams& params,
                                  Rng& rng);

/// Bounded polynomial mutation; every gene mutates independently with
/// probability `p_mutation`.
std::vector<double> polynomial_mutation(std::span<const double> x, std::span<const RealBound> bounds,
                                        double p_mutation, double distribution_index, Rng& rng);

/// Uniform bitwise exchange of offset-binary encodings. `masks[i]` selects the
/// bits of gene i that are swapped.
std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> exchange_bits(
    std::span<const std::int64_t> a, std::span<const std::int64_t> b,
    std::span<const IntBound> bounds, std::span<const std::uint64_t> masks);

/// With probability `p_crossover` swaps a uniformly random bit mask per gene;
/// otherwise returns copies of the parents.
std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> binary_crossover(
    std::span<const std::int64_t> a, std::span<const std::int64_t> b,
    std::span<const IntBound> bounds, double p_crossover, Rng& rng);

/// XOR each gene's encoding with `masks[i]`, then decode and clamp.
std::vector<std::int64_t> flip_bits(std::span<const std::int64_t> x, std::span<const IntBound> bounds,
                                    std::span<const std::uint64_t> masks);

/// Each bit flips with probability p_mutation / bit_width.
std::vector<std::int64_t> binary_mutation(std::span<const std::int64_t> x,
                                          std::span<const IntBound> bounds, double p_mutation,
                                          Rng& rng);

/// Offspring from mu parents: parent k % mu is the index parent of child k.
/// Reals get PCX (with probability p_crossover) then polynomial mutation; ints
/// get binary crossover with the next parent then binary mutation. Children are
/// clamped to `shape`.
std::vector<Genome> make_offspring(std::span<const Genome* const> parents, const GenomeShape& shape,
                                   const EAParams& params, Rng& rng);

/// Neighbour proposal used by local search: polynomial mutation on real genes,
/// unit steps on integer genes.
Genome propose_neighbor(const Genome& x, const GenomeShape& shape, const EAParams& params, Rng& rng);

}  // namespace bilevel::evo
