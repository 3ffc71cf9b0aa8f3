#include "traindyn/dfa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "traindyn/errors.hpp"

namespace traindyn::dfa {

namespace {

// Mean squared residual of the least-squares line through y[0..s).
double detrended_mse(const double* y, int s) {
  // x = 0..s-1
  const double n = s;
  const double sx = n * (n - 1) / 2.0;
  const double sxx = (n - 1) * n * (2 * n - 1) / 6.0;
  double sy = 0.0, sxy = 0.0;
  for (int i = 0; i < s; ++i) {
    sy += y[i];
    sxy += i * y[i];
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  double ss = 0.0;
  for (int i = 0; i < s; ++i) {
    const double r = y[i] - (intercept + slope * i);
    ss += r * r;
  }
  return ss / n;
}

}  // namespace

std::vector<double> cumulative_profile(std::span<const double> signal) {
  if (signal.size() < 2)
    throw DomainError("cumulative profile needs at least 2 samples, got " +
                      std::to_string(signal.size()));
  for (double v : signal)
    if (!std::isfinite(v)) throw DomainError("cumulative profile: non-finite sample");
  const double mean =
      std::accumulate(signal.begin(), signal.end(), 0.0) / static_cast<double>(signal.size());
  std::vector<double> y(signal.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < signal.size(); ++k) {
    acc += signal[k] - mean;
    y[k] = acc;
  }
  return y;
}

std::vector<int> scale_grid(std::size_t n, int min_scale, int max_scales) {
  if (min_scale < 2 || max_scales < 1) throw DomainError("scale_grid: invalid scale policy");
  int hi = static_cast<int>(n / 4);
  if (hi - min_scale + 1 < kMinFitScales)
    hi = std::min(static_cast<int>(n / 2), min_scale + kMinFitScales - 1);
  if (hi < min_scale) return {};
  const int count = hi - min_scale + 1;
  std::vector<int> grid;
  if (count <= max_scales) {
    grid.resize(count);
    std::iota(grid.begin(), grid.end(), min_scale);
    return grid;
  }
  const double ratio = std::log(static_cast<double>(hi) / min_scale);
  for (int i = 0; i < max_scales; ++i) {
    const double t = static_cast<double>(i) / (max_scales - 1);
    const int s = static_cast<int>(std::lround(min_scale * std::exp(ratio * t)));
    if (grid.empty() || s > grid.back()) grid.push_back(s);
  }
  return grid;
}

FluctuationCurve fluctuation_function(std::span<const double> profile,
                                      std::span<const int> scales) {
  const auto n = static_cast<int>(profile.size());
  FluctuationCurve curve;
  for (int s : scales) {
    if (s < 3) throw DomainError("fluctuation_function: scale " + std::to_string(s) + " < 3");
    if (!curve.scales.empty() && s <= curve.scales.back())
      throw DomainError("fluctuation_function: scales must be strictly increasing");
    const int windows = n / s;
    if (windows == 0) continue;
    double total = 0.0;
    for (int w = 0; w < windows; ++w) {
      total += detrended_mse(profile.data() + w * s, s);
      total += detrended_mse(profile.data() + (n - (w + 1) * s), s);
    }
    curve.scales.push_back(s);
    curve.fluctuations.push_back(std::sqrt(total / (2.0 * windows)));
  }
  if (curve.scales.empty())
    throw InsufficientData("no scale yields a complete window over " + std::to_string(n) +
                           " samples");
  double peak = 0.0;
  for (double v : profile) peak = std::max(peak, std::abs(v));
  const double floor = 1e-10 * peak;
  if (std::all_of(curve.fluctuations.begin(), curve.fluctuations.end(),
                  [&](double f) { return f <= floor; }))
    throw DegenerateInput("profile is exactly linear: fluctuation vanishes at every scale");
  return curve;
}

HurstEstimate fit_hurst(const FluctuationCurve& curve) {
  const std::size_t m = curve.scales.size();
  if (m != curve.fluctuations.size())
    throw DomainError("fit_hurst: scales and fluctuations differ in length");
  if (m < static_cast<std::size_t>(kMinFitScales))
    throw InsufficientData("Hurst fit needs at least " + std::to_string(kMinFitScales) +
                           " scales, got " + std::to_string(m));
  std::vector<double> lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(curve.fluctuations[i] > 0.0) || !std::isfinite(curve.fluctuations[i]))
      throw DegenerateInput("fit_hurst: F(s) must be positive and finite");
    lx[i] = std::log(static_cast<double>(curve.scales[i]));
    ly[i] = std::log(curve.fluctuations[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / m;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  HurstEstimate est;
  est.hurst = sxy / sxx;
  est.n_scales = static_cast<int>(m);
  const double ss_res = std::max(0.0, syy - est.hurst * sxy);
  est.fit_r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return est;
}

HurstEstimate estimate_hurst(std::span<const double> signal, int min_scale, int max_scales) {
  const auto profile = cumulative_profile(signal);
  const auto scales = scale_grid(signal.size(), min_scale, max_scales);
  if (scales.empty())
    throw InsufficientData("no admissible DFA scale for " + std::to_string(signal.size()) +
                           " samples");
  return fit_hurst(fluctuation_function(profile, scales));
}

double mean_hurst(std::span<const HurstEstimate> per_layer) {
  if (per_layer.empty()) throw InsufficientData("mean_hurst: no layers");
  double sum = 0.0;
  for (const auto& e : per_layer) sum += e.hurst;
  return sum / static_cast<double>(per_layer.size());
}

std::optional<double> mean_hurst(std::span<const std::optional<HurstEstimate>> per_layer) {
  if (per_layer.empty()) throw InsufficientData("mean_hurst: no layers");
  double sum = 0.0;
  for (const auto& e : per_layer) {
    if (!e) return std::nullopt;
    sum += e->hurst;
  }
  return sum / static_cast<double>(per_layer.size());
}

double gaussian_tuning(double h_raw, double h_opt, double sigma_h) {
  if (!(sigma_h > 0.0)) throw DomainError("gaussian_tuning: sigma_h must be > 0");
  const double d = h_raw - h_opt;
  return std::exp(-(d * d) / (2.0 * sigma_h * sigma_h));
}

HeffSeries heff_series(const ActivationTrace& trace, const AnalysisConfig& config,
                       DfaMode mode) {
  const std::size_t T = trace.n_epochs();
  const std::size_t L = trace.n_layers();
  const std::size_t min_prefix = min_prefix_length(config.dfa_min_scale);

  std::vector<std::vector<double>> signals(L);
  for (std::size_t l = 0; l < L; ++l) signals[l] = trace.layer_signal(l);

  auto try_estimate = [&](std::span<const double> x) -> std::optional<HurstEstimate> {
    try {
      return estimate_hurst(x, config.dfa_min_scale, config.dfa_max_scales);
    } catch (const InsufficientData&) {
      return std::nullopt;
    } catch (const DegenerateInput&) {
      return std::nullopt;
    }
  };

  HeffSeries out;
  out.mode = mode;
  out.h_eff = MetricSeries(T);
  out.h_raw = MetricSeries(T);
  out.full_series.resize(L);
  for (std::size_t l = 0; l < L; ++l)
    if (T >= min_prefix) out.full_series[l] = try_estimate(signals[l]);

  std::vector<std::optional<HurstEstimate>> per_layer(L);
  for (std::size_t t = min_prefix; t <= T; ++t) {
    for (std::size_t l = 0; l < L; ++l)
      per_layer[l] = try_estimate(std::span<const double>(signals[l]).first(t));
    if (auto h = mean_hurst(std::span<const std::optional<HurstEstimate>>(per_layer))) {
      out.h_raw[t - 1] = *h;
      out.h_eff[t - 1] = gaussian_tuning(*h, config.h_opt, config.sigma_h);
    }
  }
  return out;
}

}  // namespace traindyn::dfa
