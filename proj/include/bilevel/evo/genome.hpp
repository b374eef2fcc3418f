#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace bilevel::evo {

using Rng = std::mt19937_64;

struct RealBound {
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
  double clamp(double v) const { return v < lo ? lo : (v > hi ? hi : v); }
  bool contains(double v) const { return v >= lo && v <= hi; }
};

struct IntBound {
  std::int64_t lo = 0;
  std::int64_t hi = 1;
  std::int64_t width() const { return hi - lo; }
  std::int64_t clamp(std::int64_t v) const { return v < lo ? lo : (v > hi ? hi : v); }
  bool contains(std::int64_t v) const { return v >= lo && v <= hi; }
};

/// Mixed decision vector: a real part and an integer part.
struct Genome {
  std::vector<double> reals;
  std::vector<std::int64_t> ints;

  std::size_t size() const { return reals.size() + ints.size(); }
  friend bool operator==(const Genome&, const Genome&) = default;
};

/// Per-gene bounds for both parts of a genome.
struct GenomeShape {
  std::vector<RealBound> reals;
  std::vector<IntBound> ints;

  std::size_t size() const { return reals.size() + ints.size(); }

  bool contains(const Genome& g) const;
  bool matches(const Genome& g) const {
    return g.reals.size() == reals.size() && g.ints.size() == ints.size();
  }
  Genome clamp(Genome g) const;
  void validate() const;
};

/// Uniform sample inside the shape's bounds.
Genome random_genome(const GenomeShape& shape, Rng& rng);

/// Genes as reals, real part first. Used for variances and distances.
std::vector<double> flatten(const Genome& g);

/// Euclidean distance after scaling each gene by its bound width.
double normalized_distance(const Genome& a, const Genome& b, const GenomeShape& shape);

}  // namespace bilevel::evo
