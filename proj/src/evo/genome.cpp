#include "bilevel/evo/genome.hpp"

#include <cmath>

#include "bilevel/errors.hpp"

namespace bilevel::evo {

bool GenomeShape::contains(const Genome& g) const {
  if (!matches(g)) return false;
  for (std::size_t i = 0; i < reals.size(); ++i)
    if (!reals[i].contains(g.reals[i])) return false;
  for (std::size_t i = 0; i < ints.size(); ++i)
    if (!ints[i].contains(g.ints[i])) return false;
  return true;
}

Genome GenomeShape::clamp(Genome g) const {
  if (!matches(g)) throw ContractViolation("genome does not match shape");
  for (std::size_t i = 0; i < reals.size(); ++i) g.reals[i] = reals[i].clamp(g.reals[i]);
  for (std::size_t i = 0; i < ints.size(); ++i) g.ints[i] = ints[i].clamp(g.ints[i]);
  return g;
}

void GenomeShape::validate() const {
  for (const auto& b : reals)
    if (!(b.lo <= b.hi) || !std::isfinite(b.lo) || !std::isfinite(b.hi))
      throw ConfigError("invalid real bound");
  for (const auto& b : ints)
    if (b.lo > b.hi) throw ConfigError("invalid integer bound");
}

Genome random_genome(const GenomeShape& shape, Rng& rng) {
  Genome g;
  g.reals.reserve(shape.reals.size());
  g.ints.reserve(shape.ints.size());
  for (const auto& b : shape.reals) {
    std::uniform_real_distribution<double> dist(b.lo, b.hi);
    g.reals.push_back(dist(rng));
  }
  for (const auto& b : shape.ints) {
    std::uniform_int_distribution<std::int64_t> dist(b.lo, b.hi);
    g.ints.push_back(dist(rng));
  }
  return g;
}

std::vector<double> flatten(const Genome& g) {
  std::vector<double> out(g.reals.begin(), g.reals.end());
  for (auto v : g.ints) out.push_back(static_cast<double>(v));
  return out;
}

double normalized_distance(const Genome& a, const Genome& b, const GenomeShape& shape) {
  double sum = 0.0;
  for (std::size_t i = 0; i < shape.reals.size(); ++i) {
    const double w = shape.reals[i].width();
    const double d = w > 0 ? (a.reals[i] - b.reals[i]) / w : 0.0;
    sum += d * d;
  }
  for (std::size_t i = 0; i < shape.ints.size(); ++i) {
    const double w = static_cast<double>(shape.ints[i].width());
    const double d = w > 0 ? static_cast<double>(a.ints[i] - b.ints[i]) / w : 0.0;
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace bilevel::evo
