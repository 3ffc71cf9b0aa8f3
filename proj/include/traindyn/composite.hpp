#pragma once

#include <cstddef>
#include <optional>

#include "traindyn/metric_series.hpp"

namespace traindyn::composite {

struct NormalizedSeries {
  MetricSeries series;
  // max == min over the present values; every present output is 0.
  bool degenerate = false;
};

// (v - min) / (max - min) over the present entries. InsufficientData with
// fewer than 2 present values.
NormalizedSeries minmax_normalize(const MetricSeries& series);

// w_h * H_norm + w_m * M_norm, missing where either input is. DomainError
// unless both weights lie in [0,1] and sum to 1.
MetricSeries psi_series(const MetricSeries& heff_norm, const MetricSeries& m_norm, double w_h,
                        double w_m);

// Sample std of the last `window` present values ending at t. Missing at
// missing epochs and until `window` present values have been seen.
MetricSeries rolling_volatility(const MetricSeries& series, int window);

// (v - mean) / std with population std over present entries.
MetricSeries zscore(const MetricSeries& series);

// Pearson r over epochs where both series are present.
double pearson(const MetricSeries& a, const MetricSeries& b);

// Index of the first present value strictly below the threshold.
std::optional<std::size_t> threshold_crossing(const MetricSeries& volatility, double threshold);

// Index of the first epoch with accuracy >= fraction * max(accuracy).
std::optional<std::size_t> plateau_epoch(const MetricSeries& accuracy, double fraction);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population
  std::size_t count = 0;
};

// Over present entries; count == 0 when none are present.
MeanStd mean_std(const MetricSeries& series);

}  // namespace traindyn::composite
