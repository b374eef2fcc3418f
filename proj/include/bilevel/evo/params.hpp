#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace bilevel::evo {

enum class Sense { maximize, minimize };

/// `literal` evaluates the child formula with deterministic weights;
/// `gaussian` scales zero-mean normal draws along both directions.
enum class PcxMode { literal, gaussian };

/// Steady-state EA parameters, shared by both levels of the nested solver.
struct EAParams {
  std::size_t mu = 3;
  std::size_t lambda = 3;
  std::size_t r = 2;
  std::size_t pop_size = 100;
  double p_crossover = 0.9;
  double p_mutation = 0.1;
  double omega_xi = 0.1;
  // Standard deviation of the weight along (p2 - p1) / 2 in gaussian mode.
  double sigma_eta = 0.1;
  double eta_stop = 1e-5;
  Sense sense = Sense::maximize;
  PcxMode pcx_mode = PcxMode::gaussian;
  double mutation_distribution_index = 20.0;
  std::size_t max_generations = 2000;

  void validate() const;
};

std::string_view to_string(Sense s);
std::string_view to_string(PcxMode m);
Sense parse_sense(std::string_view s);
PcxMode parse_pcx_mode(std::string_view s);

}  // namespace bilevel::evo
