#pragma once

#include <span>
#include <vector>

#include "traindyn/config.hpp"
#include "traindyn/metric_series.hpp"
#include "traindyn/trace.hpp"

namespace traindyn::synchrony {

// Shortest series for which an analytic phase is computed.
inline constexpr std::size_t kMinPhaseSamples = 4;

// Instantaneous phase in (-pi, pi] of the discrete analytic signal of the
// mean-removed input (one-sided spectrum, DC and Nyquist kept unscaled).
std::vector<double> analytic_phase(std::span<const double> signal);

// |mean_l exp(i theta_l)|, in [0, 1].
double kuramoto_order(std::span<const double> phases);

// M(t): population std of R(1..t) over the present entries; missing until the
// first present R.
MetricSeries metastability_series(const MetricSeries& r_series);
MetricSeries metastability_series(std::span<const double> r_series);

struct SynchronySeries {
  MetricSeries r;
  MetricSeries m;
  PhaseMode mode = PhaseMode::retrospective;
};

// Retrospective: phases from each full layer signal. Causal: the phase of
// epoch t is the last sample of analytic_phase(x_l(1..t)); t < 4 is missing,
// as is any epoch whose prefix is still constant for some layer.
// Throws DegenerateInput if a layer signal is constant over the whole trace.
SynchronySeries synchrony_pipeline(const ActivationTrace& trace, PhaseMode mode);

}  // namespace traindyn::synchrony
