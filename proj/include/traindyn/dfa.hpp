#pragma once

#include <optional>
#include <span>
#include <vector>

#include "traindyn/config.hpp"
#include "traindyn/metric_series.hpp"
#include "traindyn/trace.hpp"

namespace traindyn::dfa {

// F(s) sampled on a strictly increasing set of window lengths.
struct FluctuationCurve {
  std::vector<int> scales;
  std::vector<double> fluctuations;
};

struct HurstEstimate {
  double hurst = 0.0;
  double fit_r_squared = 0.0;
  int n_scales = 0;
};

// Minimum number of log-log points for a Hurst fit.
inline constexpr int kMinFitScales = 4;

// Y(k) = sum_{j<=k} (x_j - mean(x)). Requires >= 2 finite samples.
std::vector<double> cumulative_profile(std::span<const double> signal);

// Integer window lengths for a series of n samples: log-spaced in
// [min_scale, n/4], deduplicated, at most max_scales entries. When n/4 leaves
// fewer than four scales the upper bound is widened toward n/2 (still >= 4
// windows per scale counting both traversal directions). Empty when no scale
// is admissible.
std::vector<int> scale_grid(std::size_t n, int min_scale, int max_scales = 12);

// Shortest prefix that receives a Hurst estimate under the scale policy.
inline constexpr std::size_t min_prefix_length(int min_scale) {
  return 4 * static_cast<std::size_t>(min_scale);
}

// RMS residual of per-window linear detrending, windows taken from both ends
// of the profile. Scales with no complete window are dropped.
FluctuationCurve fluctuation_function(std::span<const double> profile,
                                      std::span<const int> scales);

// Least-squares slope of log F(s) against log s.
HurstEstimate fit_hurst(const FluctuationCurve& curve);

// profile -> scale grid -> fluctuation -> fit, for one raw signal.
HurstEstimate estimate_hurst(std::span<const double> signal, int min_scale, int max_scales = 12);

// Eq. H_raw: arithmetic mean across layers; nullopt if any layer is missing.
double mean_hurst(std::span<const HurstEstimate> per_layer);
std::optional<double> mean_hurst(std::span<const std::optional<HurstEstimate>> per_layer);

// exp(-(h_raw - h_opt)^2 / (2 sigma_h^2)).
double gaussian_tuning(double h_raw, double h_opt, double sigma_h);

struct HeffSeries {
  MetricSeries h_eff;
  MetricSeries h_raw;
  // One estimate per layer from the complete recorded series.
  std::vector<std::optional<HurstEstimate>> full_series;
  DfaMode mode = DfaMode::causal;
};

// Per-epoch H_raw / H_eff by prefix evaluation: epoch t sees x_l(1..t).
// Epochs shorter than min_prefix_length, or where any layer cannot be
// estimated, are missing.
HeffSeries heff_series(const ActivationTrace& trace, const AnalysisConfig& config, DfaMode mode);

}  // namespace traindyn::dfa
