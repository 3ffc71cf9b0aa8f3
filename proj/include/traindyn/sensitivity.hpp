#pragma once

#include <optional>
#include <string>
#include <vector>

#include "traindyn/metric_series.hpp"

namespace traindyn::sensitivity {

inline const std::vector<double> kDefaultHOpt{0.5, 0.6, 0.7, 0.8};
inline const std::vector<double> kDefaultSigmaH{0.05, 0.10, 0.15, 0.20};
inline const std::vector<double> kDefaultWeights{0.3, 0.5, 0.7};
inline const std::vector<double> kDefaultThresholds{0.25, 0.30, 0.35};
inline constexpr double kDefaultSeparationGap = 0.30;

struct HeffCell {
  double h_opt = 0.0;
  double sigma_h = 0.0;
  double mean_heff = 0.0;
};

// Mean of gaussian_tuning(H_raw(t)) over present epochs for every
// (h_opt, sigma_h) pair, h_opt-major. Works on stored H_raw only.
std::vector<HeffCell> heff_grid(const MetricSeries& h_raw, const std::vector<double>& h_opt_values,
                                const std::vector<double>& sigma_h_values);

// group_a_mean - group_b_mean > gap.
bool separation_flag(double group_a_mean, double group_b_mean, double gap = kDefaultSeparationGap);

struct WeightCell {
  double w_h = 0.0;
  std::optional<double> r_psi_acc;  // missing when the correlation is undefined
};

struct WeightGrid {
  std::vector<WeightCell> cells;
  // Same nonzero sign in every cell; missing if any cell is missing.
  std::optional<bool> sign_stable;
};

// Recomputes psi for each w_h (w_m = 1 - w_h) and correlates with accuracy.
WeightGrid weight_grid(const MetricSeries& heff_norm, const MetricSeries& m_norm,
                       const MetricSeries& accuracy, const std::vector<double>& w_h_values);

struct ThresholdCell {
  double threshold = 0.0;
  std::optional<std::size_t> index;  // first index strictly below threshold
};

struct ThresholdGrid {
  std::vector<ThresholdCell> cells;
  std::optional<std::size_t> plateau_index;
};

ThresholdGrid threshold_grid(const MetricSeries& sigma_psi, const std::vector<double>& thresholds,
                             const std::optional<MetricSeries>& accuracy,
                             double plateau_fraction = 0.99);

}  // namespace traindyn::sensitivity
