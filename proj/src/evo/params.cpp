#include "bilevel/evo/params.hpp"

#include "bilevel/errors.hpp"

namespace bilevel::evo {

void EAParams::validate() const {
  if (mu < 3) throw ConfigError("mu must be at least 3 (PCX needs three parents)");
  if (lambda < 1) throw ConfigError("lambda must be positive");
  if (r < 1 || r > pop_size) throw ConfigError("r must lie in [1, pop_size]");
  if (pop_size < 2 * mu) throw ConfigError("pop_size must be at least 2*mu");
  if (!(p_crossover >= 0.0 && p_crossover <= 1.0)) throw ConfigError("p_crossover outside [0,1]");
  if (!(p_mutation >= 0.0 && p_mutation <= 1.0)) throw ConfigError("p_mutation outside [0,1]");
  if (!(eta_stop > 0.0)) throw ConfigError("eta_stop must be positive");
  if (!(mutation_distribution_index >= 0.0)) throw ConfigError("negative distribution index");
  if (!(sigma_eta >= 0.0) || !(omega_xi >= 0.0)) throw ConfigError("negative PCX scale");
  if (max_generations < 1) throw ConfigError("max_generations must be positive");
}

std::string_view to_string(Sense s) { return s == Sense::maximize ? "maximize" : "minimize"; }

std::string_view to_string(PcxMode m) { return m == PcxMode::literal ? "literal" : "gaussian"; }

Sense parse_sense(std::string_view s) {
  if (s == "maximize" || s == "max") return Sense::maximize;
  if (s == "minimize" || s == "min") return Sense::minimize;
  throw ConfigError("unknown sense '" + std::string(s) + "'");
}

PcxMode parse_pcx_mode(std::string_view s) {
  if (s == "literal") return PcxMode::literal;
  if (s == "gaussian") return PcxMode::gaussian;
  throw ConfigError("unknown pcx mode '" + std::string(s) + "'");
}

}  // namespace bilevel::evo
