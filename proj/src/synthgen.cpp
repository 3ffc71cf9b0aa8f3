#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "traindyn/analysis.hpp"
#include "traindyn/errors.hpp"
#include "traindyn/synthgen.hpp"

namespace traindyn::synthgen {

namespace {

constexpr std::size_t kLayers = 16;
constexpr std::size_t kMaxAttempts = 256;
constexpr double kPeriod = 3.0;

// Schedules are functions of (epoch index t, length T).
using Schedule = std::function<double(std::size_t, std::size_t)>;

Schedule constant(double v) {
  return [v](std::size_t, std::size_t) { return v; };
}

Schedule ramp(double u0, double u1, double from, double to) {
  return [=](std::size_t t, std::size_t n) {
    const double u = static_cast<double>(t) / static_cast<double>(n);
    if (u <= u0) return from;
    if (u >= u1) return to;
    return from + (to - from) * (u - u0) / (u1 - u0);
  };
}

// Alternates between `on` and `off` every `period` epochs inside [u0, u1),
// `off` elsewhere.
Schedule toggle(double u0, double u1, double on, double off, std::size_t period) {
  return [=](std::size_t t, std::size_t n) {
    const double u = static_cast<double>(t) / static_cast<double>(n);
    if (u < u0 || u >= u1) return off;
    return ((t / period) % 2 == 1) ? on : off;
  };
}

// Independent fGn per layer plus a shared fast oscillation. Its amplitude
// sets how strongly phases align (and pulls the Hurst estimate down); at
// epochs where `aligned` is nonzero every layer oscillates in phase,
// elsewhere the layers carry independent phase offsets.
struct Design {
  double hurst;
  Schedule amplitude;
  Schedule aligned;
};

struct AccuracyShape {
  double ceiling;
  double midpoint;  // fraction of the run
  double width;     // epochs
  double noise;
};

std::vector<Design> designs(Scenario s) {
  std::vector<Design> out;
  switch (s) {
    case Scenario::convergent:
      for (double h : {0.65, 0.6, 0.7})
        out.push_back({h, ramp(0.0, 0.45, 2.0, 0.0), toggle(0.0, 0.35, 0.0, 1.0, 2)});
      break;
    case Scenario::rigid:
      for (double h : {0.3, 0.2, 0.4})
        out.push_back({h, ramp(0.5, 0.9, 2.0, 0.0), constant(1.0)});
      break;
    case Scenario::partial:
      for (double h : {0.5, 0.45, 0.55})
        out.push_back({h, constant(0.6), toggle(0.0, 0.35, 0.0, 1.0, 2)});
      break;
    case Scenario::metastable:
      for (double h : {0.62, 0.58, 0.66})
        out.push_back({h, toggle(0.7, 1.0, 1.5, 0.0, 2), constant(1.0)});
      for (double h : {0.8, 0.85, 0.9, 0.95})
        out.push_back({h, constant(1.0), toggle(0.6, 1.0, 0.0, 1.0, 2)});
      break;
  }
  return out;
}

AccuracyShape accuracy_shape(Scenario s) {
  switch (s) {
    case Scenario::convergent: return {0.93, 0.25, 4.0, 0.005};
    case Scenario::rigid: return {0.80, 0.20, 3.0, 0.005};
    case Scenario::partial: return {0.75, 0.35, 6.0, 0.01};
    case Scenario::metastable: return {0.88, 0.30, 5.0, 0.01};
  }
  return {0.9, 0.25, 4.0, 0.005};
}

taxonomy::StateLabel target_state(Scenario s) {
  switch (s) {
    case Scenario::convergent: return taxonomy::StateLabel::StableConvergent;
    case Scenario::rigid: return taxonomy::StateLabel::RigidlySynchronised;
    case Scenario::partial: return taxonomy::StateLabel::PartialIntegration;
    case Scenario::metastable: return taxonomy::StateLabel::MetastableHighIntegration;
  }
  return taxonomy::StateLabel::Unclassified;
}

std::size_t fgn_length(std::size_t n) {
  std::size_t p = 64;
  while (p < n) p *= 2;
  return p;
}

// splitmix64, used to derive independent sub-seeds from (seed, attempt, stream).
std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

ActivationTrace realize(Scenario s, const Design& d, std::size_t length, std::uint64_t seed) {
  Rng rng(mix(seed ^ 0xA5A5A5A5ULL));
  std::vector<std::string> names;
  std::vector<EpochRecord> records(length);
  for (std::size_t t = 0; t < length; ++t) records[t].epoch = static_cast<int>(t + 1);

  const auto in_phase = gen_coupled_phases(kLayers, length, 1.0, mix(seed + 101), kPeriod);
  const auto spread = gen_coupled_phases(kLayers, length, 0.0, mix(seed + 102), kPeriod);
  for (std::size_t l = 0; l < kLayers; ++l) {
    names.push_back("layer" + std::to_string(l + 1));
    const auto noise = gen_fgn(d.hurst, fgn_length(length), mix(seed + l + 1));
    for (std::size_t t = 0; t < length; ++t) {
      const double osc = d.aligned(t, length) != 0.0 ? in_phase[l][t] : spread[l][t];
      records[t].signals.push_back(noise[t] + d.amplitude(t, length) * osc);
    }
  }

  const AccuracyShape a = accuracy_shape(s);
  const double mid = a.midpoint * static_cast<double>(length);
  for (std::size_t t = 0; t < length; ++t) {
    const double x = (static_cast<double>(t) - mid) / a.width;
    const double acc = a.ceiling / (1.0 + std::exp(-x)) + a.noise * rng.normal();
    records[t].val_accuracy = std::clamp(acc, 0.0, 1.0);
  }
  return ActivationTrace::make("synth-" + std::string(to_string(s)), names, records);
}

}  // namespace

ActivationTrace gen_trace(Scenario scenario, std::size_t length, std::uint64_t seed) {
  if (length < 40)
    throw DomainError("synthetic traces need length >= 40, got " + std::to_string(length));
  const auto candidates = designs(scenario);
  const auto target = target_state(scenario);
  const AnalysisConfig config;
  for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const Design& d = candidates[attempt % candidates.size()];
    auto trace = realize(scenario, d, length, mix(seed * kMaxAttempts + attempt));
    if (analyze(trace, config).state == target) return trace;
  }
  throw GenerationError("no " + std::string(to_string(scenario)) + " realization of length " +
                        std::to_string(length) + " passed the self-check after " +
                        std::to_string(kMaxAttempts) + " attempts");
}

}  // namespace traindyn::synthgen
