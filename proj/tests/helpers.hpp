#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "traindyn/trace.hpp"

namespace testutil {

// Trace from per-layer signals, epochs 1..T, optional accuracy.
inline traindyn::ActivationTrace make_trace(const std::vector<std::vector<double>>& layers,
                                            const std::vector<double>& accuracy = {},
                                            std::string run_id = "test") {
  const std::size_t n = layers.front().size();
  std::vector<std::string> names;
  for (std::size_t l = 0; l < layers.size(); ++l) names.push_back("layer" + std::to_string(l + 1));
  std::vector<traindyn::EpochRecord> records(n);
  for (std::size_t t = 0; t < n; ++t) {
    records[t].epoch = static_cast<int>(t + 1);
    for (const auto& layer : layers) records[t].signals.push_back(layer[t]);
    if (!accuracy.empty()) records[t].val_accuracy = accuracy[t];
  }
  return traindyn::ActivationTrace::make(std::move(run_id), names, records);
}

inline double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sample autocorrelation at lag 1, biased (1/n) normalisation.
inline double lag1_autocorrelation(const std::vector<double>& x) {
  const double m = mean(x);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    den += (x[i] - m) * (x[i] - m);
    if (i + 1 < x.size()) num += (x[i] - m) * (x[i + 1] - m);
  }
  return num / den;
}

// Textbook Pearson r on dense vectors.
inline double pearson_dense(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean(a), mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace testutil
