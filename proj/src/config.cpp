#include "traindyn/config.hpp"

#include <cmath>

#include "traindyn/errors.hpp"

namespace traindyn {

std::string_view to_string(PhaseMode m) {
  return m == PhaseMode::causal ? "causal" : "retrospective";
}

std::string_view to_string(DfaMode m) {
  return m == DfaMode::causal ? "causal" : "retrospective";
}

std::string_view to_string(IntegrationField f) {
  return f == IntegrationField::heff ? "heff" : "hraw";
}

PhaseMode parse_phase_mode(std::string_view s) {
  if (s == "causal") return PhaseMode::causal;
  if (s == "retrospective") return PhaseMode::retrospective;
  throw DomainError("unknown phase mode '" + std::string(s) + "'");
}

DfaMode parse_dfa_mode(std::string_view s) {
  if (s == "causal") return DfaMode::causal;
  if (s == "retrospective") return DfaMode::retrospective;
  throw DomainError("unknown DFA mode '" + std::string(s) + "'");
}

IntegrationField parse_integration_field(std::string_view s) {
  if (s == "heff") return IntegrationField::heff;
  if (s == "hraw") return IntegrationField::hraw;
  throw DomainError("unknown integration field '" + std::string(s) + "'");
}

void AnalysisConfig::validate() const {
  if (!std::isfinite(h_opt)) throw DomainError("h_opt must be finite");
  if (!(sigma_h > 0.0) || !std::isfinite(sigma_h)) throw DomainError("sigma_h must be > 0");
  if (!(w_h >= 0.0 && w_h <= 1.0)) throw DomainError("w_h must lie in [0,1]");
  if (rolling_window < 2) throw DomainError("rolling_window must be >= 2");
  if (!(volatility_threshold > 0.0)) throw DomainError("volatility_threshold must be > 0");
  if (dfa_min_scale < 4) throw DomainError("dfa_min_scale must be >= 4");
  if (dfa_max_scales < 4) throw DomainError("dfa_max_scales must be >= 4");
  if (!(plateau_fraction > 0.0 && plateau_fraction <= 1.0))
    throw DomainError("plateau_fraction must lie in (0,1]");
  if (!(gates.late_fraction > 0.0 && gates.late_fraction <= 1.0))
    throw DomainError("late_fraction must lie in (0,1]");
}

}  // namespace traindyn
