#include "bilevel/evo/operators.hpp"

#include <algorithm>
#include <cmath>

#include "bilevel/errors.hpp"
#include "bilevel/evo/encoding.hpp"

namespace bilevel::evo {

namespace {

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// Each of the low `width` bits set with probability 1/2.
std::uint64_t random_mask(int width, Rng& rng) {
  if (width <= 0) return 0;
  const std::uint64_t bits = rng();
  return width >= 64 ? bits : bits & ((std::uint64_t{1} << width) - 1);
}

double mutate_gene(double y, const RealBound& bound, double distribution_index, Rng& rng) {
  const double lo = bound.lo;
  const double hi = bound.hi;
  if (!(hi > lo)) return lo;
  const double delta1 = (y - lo) / (hi - lo);
  const double delta2 = (hi - y) / (hi - lo);
  const double rnd = uniform01(rng);
  const double mut_pow = 1.0 / (distribution_index + 1.0);
  double deltaq;
  if (rnd <= 0.5) {
    const double xy = 1.0 - delta1;
    const double val = 2.0 * rnd + (1.0 - 2.0 * rnd) * std::pow(xy, distribution_index + 1.0);
    deltaq = std::pow(val, mut_pow) - 1.0;
  } else {
    const double xy = 1.0 - delta2;
    const double val =
        2.0 * (1.0 - rnd) + 2.0 * (rnd - 0.5) * std::pow(xy, distribution_index + 1.0);
    deltaq = 1.0 - std::pow(val, mut_pow);
  }
  return bound.clamp(y + deltaq * (hi - lo));
}

}  // namespace

double pcx_omega_eta(std::span<const double> index_parent, std::span<const double> centroid) {
  const auto m = static_cast<double>(index_parent.size());
  double omega = 0.0;
  for (std::size_t i = 0; i < index_parent.size(); ++i) {
    omega += m / std::max(std::abs(index_parent[i] - centroid[i]), kPcxDenominatorFloor);
    if (omega >= kPcxOmegaEtaCap) return kPcxOmegaEtaCap;
  }
  return omega;
}

std::vector<double> pcx_crossover(std::span<const double> p1, std::span<const double> p2,
                                  std::span<const double> index_parent, const EAParams& params,
                                  Rng& rng) {
  const std::size_t m = index_parent.size();
  if (m == 0 || p1.size() != m || p2.size() != m)
    throw ContractViolation("pcx_crossover: parents must be non-empty and of equal length");

  std::vector<double> centroid(m);
  std::vector<double> d(m);
  for (std::size_t i = 0; i < m; ++i) {
    centroid[i] = (index_parent[i] + p1[i] + p2[i]) / 3.0;
    d[i] = index_parent[i] - centroid[i];
  }

  double w_xi = params.omega_xi;
  double w_eta;
  if (params.pcx_mode == PcxMode::literal) {
    w_eta = pcx_omega_eta(index_parent, centroid);
  } else {
    std::normal_distribution<double> normal(0.0, 1.0);
    w_xi *= normal(rng);
    w_eta = params.sigma_eta * normal(rng);
  }

  std::vector<double> child(m);
  for (std::size_t i = 0; i < m; ++i)
    child[i] = index_parent[i] + w_xi * d[i] + w_eta * (p2[i] - p1[i]) / 2.0;
  return child;
}

std::vector<double> polynomial_mutation(std::span<const double> x, std::span<const RealBound> bounds,
                                        double p_mutation, double distribution_index, Rng& rng) {
  if (x.size() != bounds.size()) throw ContractViolation("polynomial_mutation: bounds mismatch");
  std::vector<double> out(x.begin(), x.end());
  if (p_mutation <= 0.0) return out;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (uniform01(rng) < p_mutation) out[i] = mutate_gene(out[i], bounds[i], distribution_index, rng);
  return out;
}

std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> exchange_bits(
    std::span<const std::int64_t> a, std::span<const std::int64_t> b,
    std::span<const IntBound> bounds, std::span<const std::uint64_t> masks) {
  if (a.size() != b.size() || a.size() != bounds.size() || a.size() != masks.size())
    throw ContractViolation("binary crossover: length mismatch");
  std::vector<std::int64_t> c1(a.size());
  std::vector<std::int64_t> c2(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::uint64_t ea = encode(a[i], bounds[i]);
    const std::uint64_t eb = encode(b[i], bounds[i]);
    const std::uint64_t m = masks[i];
    c1[i] = decode((ea & ~m) | (eb & m), bounds[i]);
    c2[i] = decode((eb & ~m) | (ea & m), bounds[i]);
  }
  return {std::move(c1), std::move(c2)};
}

std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> binary_crossover(
    std::span<const std::int64_t> a, std::span<const std::int64_t> b,
    std::span<const IntBound> bounds, double p_crossover, Rng& rng) {
  std::vector<std::uint64_t> masks(a.size(), 0);
  if (uniform01(rng) < p_crossover)
    for (std::size_t i = 0; i < masks.size() && i < bounds.size(); ++i)
      masks[i] = random_mask(bit_width(bounds[i]), rng);
  return exchange_bits(a, b, bounds, masks);
}

std::vector<std::int64_t> flip_bits(std::span<const std::int64_t> x, std::span<const IntBound> bounds,
                                    std::span<const std::uint64_t> masks) {
  if (x.size() != bounds.size() || x.size() != masks.size())
    throw ContractViolation("binary mutation: length mismatch");
  std::vector<std::int64_t> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = decode(encode(x[i], bounds[i]) ^ masks[i], bounds[i]);
  return out;
}

std::vector<std::int64_t> binary_mutation(std::span<const std::int64_t> x,
                                          std::span<const IntBound> bounds, double p_mutation,
                                          Rng& rng) {
  if (x.size() != bounds.size()) throw ContractViolation("binary mutation: length mismatch");
  std::vector<std::uint64_t> masks(x.size(), 0);
  if (p_mutation > 0.0) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const int width = bit_width(bounds[i]);
      if (width == 0) continue;
      const double p_bit = p_mutation / width;
      if (p_bit >= 1.0) {
        masks[i] = (width >= 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
        continue;
      }
      // Gaps between flipped bits are geometric, so one draw usually covers a gene.
      std::geometric_distribution<int> gap(p_bit);
      for (int b = gap(rng); b < width; b += 1 + gap(rng)) masks[i] |= std::uint64_t{1} << b;
    }
  }
  auto out = flip_bits(x, bounds, masks);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = bounds[i].clamp(out[i]);
  return out;
}

std::vector<Genome> make_offspring(std::span<const Genome* const> parents, const GenomeShape& shape,
                                   const EAParams& params, Rng& rng) {
  const std::size_t mu = parents.size();
  if (mu < 3) throw ContractViolation("make_offspring: need at least three parents");
  std::vector<Genome> children;
  children.reserve(params.lambda);
  for (std::size_t k = 0; k < params.lambda; ++k) {
    const Genome& xp = *parents[k % mu];
    const Genome& p1 = *parents[(k + 1) % mu];
    const Genome& p2 = *parents[(k + 2) % mu];
    Genome child;

    if (!shape.reals.empty()) {
      if (uniform01(rng) < params.p_crossover)
        child.reals = pcx_crossover(p1.reals, p2.reals, xp.reals, params, rng);
      else
        child.reals = xp.reals;
      for (std::size_t i = 0; i < child.reals.size(); ++i)
        child.reals[i] = shape.reals[i].clamp(child.reals[i]);
      child.reals = polynomial_mutation(child.reals, shape.reals, params.p_mutation,
                                        params.mutation_distribution_index, rng);
    }

    if (!shape.ints.empty()) {
      child.ints = binary_crossover(xp.ints, p1.ints, shape.ints, params.p_crossover, rng).first;
      child.ints = binary_mutation(child.ints, shape.ints, params.p_mutation, rng);
    }
    children.push_back(std::move(child));
  }
  return children;
}

Genome propose_neighbor(const Genome& x, const GenomeShape& shape, const EAParams& params, Rng& rng) {
  Genome y = x;
  const std::size_t n = shape.size();
  if (n == 0) return y;
  // Multi-scale: the distribution index is drawn from base * 5^k, k in 0..4,
  // so proposals range from coarse jumps to fine polishing steps.
  const double eta_m = params.mutation_distribution_index *
                       std::pow(5.0, std::uniform_int_distribution<int>(0, 4)(rng));
  std::uniform_int_distribution<int> step(-1, 1);

  if (std::bernoulli_distribution(0.5)(rng)) {
    // Single-gene move.
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    if (k < shape.reals.size()) {
      y.reals[k] = mutate_gene(y.reals[k], shape.reals[k], eta_m, rng);
    } else {
      const std::size_t j = k - shape.reals.size();
      const std::int64_t delta = std::bernoulli_distribution(0.5)(rng) ? 1 : -1;
      y.ints[j] = shape.ints[j].clamp(y.ints[j] + delta);
    }
    return y;
  }

  const double p_real = shape.reals.empty() ? 0.0 : 1.0 / static_cast<double>(shape.reals.size());
  for (std::size_t i = 0; i < shape.reals.size(); ++i)
    if (uniform01(rng) < p_real) y.reals[i] = mutate_gene(y.reals[i], shape.reals[i], eta_m, rng);
  for (std::size_t j = 0; j < shape.ints.size(); ++j)
    y.ints[j] = shape.ints[j].clamp(y.ints[j] + step(rng));
  return y;
}

}  // namespace bilevel::evo
