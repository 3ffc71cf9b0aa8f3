#include "traindyn/synchrony.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "traindyn/errors.hpp"
#include "traindyn/fft.hpp"

namespace traindyn::synchrony {

namespace {

bool is_constant(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

}  // namespace

std::vector<double> analytic_phase(std::span<const double> signal) {
  const std::size_t n = signal.size();
  if (n < kMinPhaseSamples)
    throw DomainError("analytic phase needs at least 4 samples, got " + std::to_string(n));
  for (double v : signal)
    if (!std::isfinite(v)) throw DomainError("analytic phase: non-finite sample");
  if (is_constant(signal)) throw DegenerateInput("analytic phase of a constant signal");

  const double mean = std::accumulate(signal.begin(), signal.end(), 0.0) / n;
  std::vector<std::complex<double>> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = signal[k] - mean;

  auto spectrum = fft::forward(x);
  // h: 1 at DC (and Nyquist for even n), 2 on positive, 0 on negative bins.
  const std::size_t half = n / 2;
  for (std::size_t k = 1; k < n; ++k) {
    if (n % 2 == 0 && k == half) continue;
    spectrum[k] *= (k <= (n - 1) / 2) ? 2.0 : 0.0;
  }
  const auto analytic = fft::inverse(spectrum);

  std::vector<double> phase(n);
  for (std::size_t k = 0; k < n; ++k) {
    double p = std::arg(analytic[k]);
    if (p <= -std::numbers::pi) p = std::numbers::pi;
    phase[k] = p;
  }
  return phase;
}

double kuramoto_order(std::span<const double> phases) {
  if (phases.size() < 2)
    throw DomainError("Kuramoto order needs at least 2 phases, got " +
                      std::to_string(phases.size()));
  double re = 0.0, im = 0.0;
  for (double th : phases) {
    if (!std::isfinite(th)) throw DomainError("Kuramoto order: non-finite phase");
    re += std::cos(th);
    im += std::sin(th);
  }
  const double n = static_cast<double>(phases.size());
  return std::min(1.0, std::hypot(re / n, im / n));
}

MetricSeries metastability_series(const MetricSeries& r_series) {
  MetricSeries m(r_series.size());
  // Welford accumulation over present entries.
  double mean = 0.0, m2 = 0.0;
  std::size_t count = 0;
  for (std::size_t t = 0; t < r_series.size(); ++t) {
    if (const auto& r = r_series[t]) {
      ++count;
      const double delta = *r - mean;
      mean += delta / count;
      m2 += delta * (*r - mean);
    }
    if (count > 0) m[t] = std::sqrt(std::max(0.0, m2 / count));
  }
  return m;
}

MetricSeries metastability_series(std::span<const double> r_series) {
  return metastability_series(MetricSeries::from_dense({r_series.begin(), r_series.end()}));
}

SynchronySeries synchrony_pipeline(const ActivationTrace& trace, PhaseMode mode) {
  const std::size_t T = trace.n_epochs();
  const std::size_t L = trace.n_layers();
  std::vector<std::vector<double>> signals(L);
  for (std::size_t l = 0; l < L; ++l) {
    signals[l] = trace.layer_signal(l);
    if (is_constant(signals[l]))
      throw DegenerateInput("layer '" + trace.layer_names()[l] +
                            "' is constant; its phase is undefined");
  }

  SynchronySeries out;
  out.mode = mode;
  out.r = MetricSeries(T);
  std::vector<double> at_t(L);
  if (mode == PhaseMode::retrospective) {
    if (T < kMinPhaseSamples)
      throw InsufficientData("retrospective phases need at least 4 epochs, got " +
                             std::to_string(T));
    std::vector<std::vector<double>> phases(L);
    for (std::size_t l = 0; l < L; ++l) phases[l] = analytic_phase(signals[l]);
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t l = 0; l < L; ++l) at_t[l] = phases[l][t];
      out.r[t] = kuramoto_order(at_t);
    }
  } else {
    for (std::size_t t = kMinPhaseSamples; t <= T; ++t) {
      bool defined = true;
      for (std::size_t l = 0; l < L && defined; ++l) {
        const auto prefix = std::span<const double>(signals[l]).first(t);
        if (is_constant(prefix)) {
          defined = false;
          break;
        }
        at_t[l] = analytic_phase(prefix).back();
      }
      if (defined) out.r[t - 1] = kuramoto_order(at_t);
    }
  }
  out.m = metastability_series(out.r);
  return out;
}

}  // namespace traindyn::synchrony
