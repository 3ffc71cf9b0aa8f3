#include "traindyn/composite.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "traindyn/errors.hpp"

namespace traindyn::composite {

NormalizedSeries minmax_normalize(const MetricSeries& series) {
  if (series.count_present() < 2)
    throw InsufficientData("min-max normalisation needs at least 2 present values");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& v : series)
    if (v) {
      lo = std::min(lo, *v);
      hi = std::max(hi, *v);
    }
  NormalizedSeries out;
  out.series = MetricSeries(series.size());
  out.degenerate = !(hi > lo);
  for (std::size_t i = 0; i < series.size(); ++i)
    if (series[i]) out.series[i] = out.degenerate ? 0.0 : (*series[i] - lo) / (hi - lo);
  return out;
}

MetricSeries psi_series(const MetricSeries& heff_norm, const MetricSeries& m_norm, double w_h,
                        double w_m) {
  if (!(w_h >= 0.0 && w_h <= 1.0 && w_m >= 0.0 && w_m <= 1.0) ||
      std::abs(w_h + w_m - 1.0) > 1e-12)
    throw DomainError("composite weights must lie in [0,1] and sum to 1");
  if (heff_norm.size() != m_norm.size())
    throw DomainError("psi: input series are not epoch-aligned");
  MetricSeries psi(heff_norm.size());
  for (std::size_t t = 0; t < psi.size(); ++t)
    if (heff_norm[t] && m_norm[t]) psi[t] = w_h * *heff_norm[t] + w_m * *m_norm[t];
  return psi;
}

MetricSeries rolling_volatility(const MetricSeries& series, int window) {
  if (window < 2) throw DomainError("rolling window must be >= 2");
  const auto w = static_cast<std::size_t>(window);
  MetricSeries out(series.size());
  std::deque<double> recent;
  for (std::size_t t = 0; t < series.size(); ++t) {
    if (!series[t]) continue;
    recent.push_back(*series[t]);
    if (recent.size() > w) recent.pop_front();
    if (recent.size() < w) continue;
    double mean = 0.0;
    for (double v : recent) mean += v;
    mean /= w;
    double ss = 0.0;
    for (double v : recent) ss += (v - mean) * (v - mean);
    out[t] = std::sqrt(ss / (w - 1));
  }
  return out;
}

MeanStd mean_std(const MetricSeries& series) {
  MeanStd r;
  for (const auto& v : series)
    if (v) {
      r.mean += *v;
      ++r.count;
    }
  if (r.count == 0) return r;
  r.mean /= r.count;
  double ss = 0.0;
  for (const auto& v : series)
    if (v) ss += (*v - r.mean) * (*v - r.mean);
  r.std = std::sqrt(ss / r.count);
  return r;
}

MetricSeries zscore(const MetricSeries& series) {
  if (series.count_present() < 2) throw InsufficientData("z-score needs at least 2 values");
  const auto ms = mean_std(series);
  if (!(ms.std > 0.0)) throw DegenerateInput("z-score of a constant series");
  MetricSeries out(series.size());
  for (std::size_t t = 0; t < series.size(); ++t)
    if (series[t]) out[t] = (*series[t] - ms.mean) / ms.std;
  return out;
}

double pearson(const MetricSeries& a, const MetricSeries& b) {
  if (a.size() != b.size()) throw DomainError("pearson: series are not epoch-aligned");
  std::vector<double> xa, xb;
  for (std::size_t t = 0; t < a.size(); ++t)
    if (a[t] && b[t]) {
      xa.push_back(*a[t]);
      xb.push_back(*b[t]);
    }
  const std::size_t n = xa.size();
  if (n < 3)
    throw InsufficientData("pearson needs at least 3 paired epochs, got " + std::to_string(n));
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += xa[i];
    mb += xb[i];
  }
  ma /= n;
  mb /= n;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = xa[i] - ma, db = xb[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (!(saa > 0.0) || !(sbb > 0.0))
    throw DegenerateInput("pearson: a series is constant over the paired epochs");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::optional<std::size_t> threshold_crossing(const MetricSeries& volatility, double threshold) {
  for (std::size_t t = 0; t < volatility.size(); ++t)
    if (volatility[t] && *volatility[t] < threshold) return t;
  return std::nullopt;
}

std::optional<std::size_t> plateau_epoch(const MetricSeries& accuracy, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw DomainError("plateau fraction must lie in (0,1]");
  if (accuracy.count_present() == 0) throw InsufficientData("plateau: no accuracy recorded");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : accuracy)
    if (v) best = std::max(best, *v);
  const double target = fraction * best;
  for (std::size_t t = 0; t < accuracy.size(); ++t)
    if (accuracy[t] && *accuracy[t] >= target) return t;
  return std::nullopt;
}

}  // namespace traindyn::composite
