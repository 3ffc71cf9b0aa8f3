#pragma once

#include <string>
#include <string_view>

namespace traindyn {

// Which samples an epoch's estimate may see. Causal: only x(1..t).
// Retrospective: the full recorded series.
enum class PhaseMode { retrospective, causal };
enum class DfaMode { causal, retrospective };

// Field used as the integration component of r(H_z, M_z).
enum class IntegrationField { heff, hraw };

std::string_view to_string(PhaseMode m);
std::string_view to_string(DfaMode m);
std::string_view to_string(IntegrationField f);
PhaseMode parse_phase_mode(std::string_view s);
DfaMode parse_dfa_mode(std::string_view s);
IntegrationField parse_integration_field(std::string_view s);

// Numeric gates of the state classifier and of the volatility-trend rule.
struct TaxonomyGates {
  double rapid_ratio = 0.6;         // S < rapid_ratio * F
  double slow_ratio = 0.85;         // S < slow_ratio * F
  double flat_band = 0.15;          // |S - F| <= flat_band * F
  double late_fraction = 0.25;      // trailing share of epochs for heff_late
  double heff_high = 0.85;
  double heff_low = 0.15;
  double heff_partial_max = 0.50;
  double rigid_sync_min = 0.80;
  double partial_sync_max = 0.50;
  bool use_full_mean_heff = false;  // epoch-mean instead of late-window mean
};

struct AnalysisConfig {
  double h_opt = 0.7;
  double sigma_h = 0.1;
  double w_h = 0.5;
  int rolling_window = 5;
  double volatility_threshold = 0.30;
  PhaseMode phase_mode = PhaseMode::retrospective;
  DfaMode dfa_mode = DfaMode::causal;
  int dfa_min_scale = 4;
  int dfa_max_scales = 12;
  double plateau_fraction = 0.99;
  IntegrationField hz_field = IntegrationField::heff;
  TaxonomyGates gates{};

  double w_m() const noexcept { return 1.0 - w_h; }

  // Throws DomainError naming the first violated constraint.
  void validate() const;
};

}  // namespace traindyn
