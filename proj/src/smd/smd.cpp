#include "bilevel/smd/smd.hpp"

#include <cmath>
#include <numbers>
#include <span>

#include "bilevel/errors.hpp"

namespace bilevel::smd {

namespace {

using std::span;
constexpr double kPi = std::numbers::pi;
// Open interval ends (tan poles, log of zero) are kept out of the box.
constexpr double kOpenMargin = 1e-6;

double sum_sq(span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

struct Blocks {
  span<const double> u1, u2, l1, l2;
};

Blocks split(const evo::Genome& upper, const evo::Genome& lower, const SmdDims& d) {
  span<const double> u(upper.reals);
  span<const double> l(lower.reals);
  return {u.subspan(0, d.p), u.subspan(d.p, d.r), l.subspan(0, d.q + d.s), l.subspan(d.q + d.s, d.r)};
}

double rastrigin_part(span<const double> l1) {
  double s = static_cast<double>(l1.size());
  for (double x : l1) s += x * x - std::cos(2.0 * kPi * x);
  return s;
}

double rosenbrock_part(span<const double> l1) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < l1.size(); ++i) {
    const double a = l1[i + 1] - l1[i] * l1[i];
    const double b = l1[i] - 1.0;
    s += a * a + b * b;
  }
  return s;
}

struct Pair {
  double upper;
  double lower;
};

Pair evaluate(int id, const Blocks& b, const SmdDims& d) {
  const double f1 = sum_sq(b.u1);
  const double F1 = f1;
  double F2 = 0.0, F3 = 0.0, f2 = 0.0, f3 = 0.0;
  const double u2sq = sum_sq(b.u2);
  switch (id) {
    case 1: {
      F2 = sum_sq(b.l1);
      f2 = F2;
      for (std::size_t i = 0; i < d.r; ++i) {
        const double t = b.u2[i] - std::tan(b.l2[i]);
        f3 += t * t;
      }
      F3 = u2sq + f3;
      break;
    }
    case 2: {
      f2 = sum_sq(b.l1);
      F2 = -f2;
      for (std::size_t i = 0; i < d.r; ++i) {
        const double t = b.u2[i] - std::log(b.l2[i]);
        f3 += t * t;
      }
      F3 = u2sq - f3;
      break;
    }
    case 3: {
      F2 = sum_sq(b.l1);
      f2 = rastrigin_part(b.l1);
      for (std::size_t i = 0; i < d.r; ++i) {
        const double t = b.u2[i] * b.u2[i] - std::tan(b.l2[i]);
        f3 += t * t;
      }
      F3 = u2sq + f3;
      break;
    }
    case 4: {
      F2 = -sum_sq(b.l1);
      f2 = rastrigin_part(b.l1);
      for (std::size_t i = 0; i < d.r; ++i) {
        const double t = std::abs(b.u2[i]) - std::log1p(b.l2[i]);
        f3 += t * t;
      }
      F3 = u2sq - f3;
      break;
    }
    case 5: {
      f2 = rosenbrock_part(b.l1);
      F2 = -f2;
      for (std::size_t i = 0; i < d.r; ++i) {
        const double t = std::abs(b.u2[i]) - b.l2[i] * b.l2[i];
        f3 += t * t;
      }
      F3 = u2sq - f3;
      break;
    }
    case 6: {
      const auto head = b.l1.subspan(0, d.q);
      const auto tail = b.l1.subspan(d.q, d.s);
      F2 = -sum_sq(head) + sum_sq(tail);
      f2 = sum_sq(head);
      for (std::size_t i = 0; i + 1 < tail.size(); i += 2) {
        const double t = tail[i + 1] - tail[i];
        f2 += t * t;
      }
      for (std::size_t i = 0; i < d.r; ++i) {
        const double t = b.u2[i] - b.l2[i];
        f3 += t * t;
      }
      F3 = u2sq - f3;
      break;
    }
    default:
      throw ConfigError("unknown SMD problem id");
  }
  return {F1 + F2 + F3, f1 + f2 + f3};
}

void bounds(int id, const SmdDims& d, evo::GenomeShape& upper, evo::GenomeShape& lower) {
  const evo::RealBound wide{-5.0, 10.0};
  upper.reals.assign(d.p, wide);
  lower.reals.assign(d.q + d.s, wide);
  evo::RealBound u2 = wide;
  evo::RealBound l2 = wide;
  switch (id) {
    case 1:
    case 3:
      l2 = {-kPi / 2 + kOpenMargin, kPi / 2 - kOpenMargin};
      break;
    case 2:
      u2 = {-5.0, 1.0};
      l2 = {kOpenMargin, std::numbers::e};
      break;
    case 4:
      u2 = {-1.0, 1.0};
      l2 = {0.0, std::numbers::e};
      break;
    default:
      break;
  }
  upper.reals.insert(upper.reals.end(), d.r, u2);
  lower.reals.insert(lower.reals.end(), d.r, l2);
}

}  // namespace

SmdDims smd_dims(int id, std::size_t total_vars) {
  if (id < 1 || id > 6) throw ConfigError("SMD id must be in 1..6");
  if (total_vars != 10 && total_vars != 20 && total_vars != 30 && total_vars != 40)
    throw ConfigError("SMD instances come in 10, 20, 30 or 40 variables");
  const std::size_t half = total_vars / 2;
  SmdDims d;
  d.r = total_vars / 4;
  d.p = half - d.r;
  const std::size_t lower_head = half - d.r;
  if (id == 6) {
    d.s = 2 * ((lower_head - 1) / 2);
    d.q = lower_head - d.s;
  } else {
    d.q = lower_head;
  }
  return d;
}

SmdInstance make_smd(int id, std::size_t total_vars) {
  SmdInstance inst;
  inst.id = id;
  inst.total_vars = total_vars;
  inst.dims = smd_dims(id, total_vars);
  const SmdDims d = inst.dims;

  auto& p = inst.problem;
  p.name = "smd" + std::to_string(id) + "-" + std::to_string(total_vars);
  p.upper_sense = evo::Sense::minimize;
  p.lower_sense = evo::Sense::minimize;
  bounds(id, d, p.upper_shape, p.lower_shape);
  p.upper_eval = [id, d](const evo::Genome& u, const evo::Genome& l) {
    return nested::LevelEvaluation{evaluate(id, split(u, l, d), d).upper, {}};
  };
  p.lower_eval = [id, d](const evo::Genome& u, const evo::Genome& l) {
    return nested::LevelEvaluation{evaluate(id, split(u, l, d), d).lower, {}};
  };

  inst.upper_optimum.reals.assign(d.upper(), 0.0);
  inst.lower_optimum.reals.assign(d.lower(), 0.0);
  if (id == 2) {
    for (std::size_t i = 0; i < d.r; ++i) inst.lower_optimum.reals[d.q + i] = 1.0;
  } else if (id == 5) {
    for (std::size_t i = 0; i < d.q; ++i) inst.lower_optimum.reals[i] = 1.0;
  }
  inst.upper_optimal_value = 0.0;
  inst.lower_optimal_value = 0.0;
  return inst;
}

Accuracy accuracy(const nested::RunRecord& record, const SmdInstance& instance) {
  return {std::abs(record.best.upper_obj - instance.upper_optimal_value),
          std::abs(record.best.lower_obj - instance.lower_optimal_value)};
}

}  // namespace bilevel::smd
