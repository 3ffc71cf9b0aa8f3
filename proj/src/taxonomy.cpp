#include "traindyn/taxonomy.hpp"

#include <cmath>
#include <string>

#include "traindyn/errors.hpp"

namespace traindyn::taxonomy {

std::string_view to_string(StateLabel s) {
  switch (s) {
    case StateLabel::StableConvergent: return "stable_convergent";
    case StateLabel::MetastableHighIntegration: return "metastable_high_integration";
    case StateLabel::PartialIntegration: return "partial_integration";
    case StateLabel::RigidlySynchronised: return "rigidly_synchronised";
    case StateLabel::Unclassified: return "unclassified";
  }
  return "unclassified";
}

std::string_view to_string(VolatilityTrend t) {
  switch (t) {
    case VolatilityTrend::rapidly_collapsing: return "rapidly_collapsing";
    case VolatilityTrend::slowly_collapsing: return "slowly_collapsing";
    case VolatilityTrend::persistently_elevated: return "persistently_elevated";
    case VolatilityTrend::flat_nonconverging: return "flat_nonconverging";
  }
  return "persistently_elevated";
}

StateLabel parse_state(std::string_view s) {
  for (auto v : {StateLabel::StableConvergent, StateLabel::MetastableHighIntegration,
                 StateLabel::PartialIntegration, StateLabel::RigidlySynchronised,
                 StateLabel::Unclassified})
    if (to_string(v) == s) return v;
  throw DomainError("unknown state label '" + std::string(s) + "'");
}

VolatilityTrend parse_trend(std::string_view s) {
  for (auto v : {VolatilityTrend::rapidly_collapsing, VolatilityTrend::slowly_collapsing,
                 VolatilityTrend::persistently_elevated, VolatilityTrend::flat_nonconverging})
    if (to_string(v) == s) return v;
  throw DomainError("unknown volatility trend '" + std::string(s) + "'");
}

VolatilityTrend volatility_trend(const MetricSeries& sigma_psi, double threshold,
                                 const TaxonomyGates& gates) {
  const auto v = sigma_psi.present();
  if (v.size() < 6)
    throw InsufficientData("volatility trend needs at least 6 values, got " +
                           std::to_string(v.size()));
  const std::size_t half = v.size() / 2;
  double first = 0.0, second = 0.0;
  for (std::size_t i = 0; i < half; ++i) first += v[i];
  for (std::size_t i = half; i < v.size(); ++i) second += v[i];
  first /= half;
  second /= (v.size() - half);
  const double last = v.back();

  if (last < threshold && second < gates.rapid_ratio * first)
    return VolatilityTrend::rapidly_collapsing;
  if (second < gates.slow_ratio * first && last >= threshold)
    return VolatilityTrend::slowly_collapsing;
  if (std::abs(second - first) <= gates.flat_band * first && last >= threshold)
    return VolatilityTrend::flat_nonconverging;
  return VolatilityTrend::persistently_elevated;
}

StateLabel classify_state(const TaxonomySignature& sig, const TaxonomyGates& gates) {
  using T = VolatilityTrend;
  const auto trend = sig.trend;
  const double h = sig.heff_late;
  const double r = sig.r_hz_mz;

  if (h < gates.heff_low && r > gates.rigid_sync_min &&
      (trend == T::flat_nonconverging || trend == T::persistently_elevated))
    return StateLabel::RigidlySynchronised;
  if (h > gates.heff_high && trend == T::rapidly_collapsing && r < 0.0)
    return StateLabel::StableConvergent;
  if (h > gates.heff_high && (trend == T::persistently_elevated ||
                              trend == T::slowly_collapsing || trend == T::flat_nonconverging))
    return StateLabel::MetastableHighIntegration;
  if (h >= gates.heff_low && h <= gates.heff_partial_max &&
      (trend == T::slowly_collapsing || trend == T::rapidly_collapsing) &&
      std::abs(r) < gates.partial_sync_max)
    return StateLabel::PartialIntegration;
  return StateLabel::Unclassified;
}

double late_heff(const MetricSeries& h_eff, const TaxonomyGates& gates) {
  const std::size_t n = h_eff.size();
  std::size_t start = 0;
  if (!gates.use_full_mean_heff) {
    const auto late = static_cast<std::size_t>(std::ceil(gates.late_fraction * n));
    start = n - std::min(n, std::max<std::size_t>(late, 1));
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t t = start; t < n; ++t)
    if (h_eff[t]) {
      sum += *h_eff[t];
      ++count;
    }
  if (count == 0) throw InsufficientData("no H_eff value in the late window");
  return sum / count;
}

}  // namespace traindyn::taxonomy
