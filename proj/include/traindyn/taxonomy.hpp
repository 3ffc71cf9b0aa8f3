#pragma once

#include <optional>
#include <string_view>

#include "traindyn/config.hpp"
#include "traindyn/metric_series.hpp"

namespace traindyn::taxonomy {

enum class StateLabel {
  StableConvergent,
  MetastableHighIntegration,
  PartialIntegration,
  RigidlySynchronised,
  Unclassified,
};

enum class VolatilityTrend {
  rapidly_collapsing,
  slowly_collapsing,
  persistently_elevated,
  flat_nonconverging,
};

// Wire names: stable_convergent, metastable_high_integration, ...
std::string_view to_string(StateLabel s);
std::string_view to_string(VolatilityTrend t);
StateLabel parse_state(std::string_view s);
VolatilityTrend parse_trend(std::string_view s);

struct TaxonomySignature {
  double heff_late = 0.0;
  VolatilityTrend trend = VolatilityTrend::persistently_elevated;
  double r_hz_mz = 0.0;
  std::optional<double> r_psi_acc;
};

// Shape of the sigma_psi trajectory from its first-half mean F, second-half
// mean S and final value L. Needs >= 6 present values.
VolatilityTrend volatility_trend(const MetricSeries& sigma_psi, double threshold,
                                 const TaxonomyGates& gates = {});

// Total: every signature maps to exactly one label, checked in the order
// rigid, stable convergent, metastable, partial, unclassified.
StateLabel classify_state(const TaxonomySignature& sig, const TaxonomyGates& gates = {});

// Mean of the present H_eff values within the trailing late_fraction of
// epochs (or all epochs when use_full_mean_heff is set).
double late_heff(const MetricSeries& h_eff, const TaxonomyGates& gates = {});

}  // namespace traindyn::taxonomy
