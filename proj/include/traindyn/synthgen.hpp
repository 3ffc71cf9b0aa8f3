#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "traindyn/trace.hpp"

namespace traindyn::synthgen {

// Portable variates on top of std::mt19937_64, whose output sequence is fixed
// by the standard. The std:: distributions are implementation-defined, so
// uniform and normal draws are derived here explicitly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Standard normal (Box-Muller, both variates used).
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Fractional Gaussian noise with unit variance by circulant embedding of the
// exact autocovariance (Davies-Harte). length must be a power of two >= 64.
std::vector<double> gen_fgn(double h_target, std::size_t length, std::uint64_t seed);

// n_layers sinusoids sharing a period (in epochs), with per-layer phase
// offsets (1 - coupling) * U(-pi, pi). coupling = 1 gives identical phases.
std::vector<std::vector<double>> gen_coupled_phases(std::size_t n_layers, std::size_t length,
                                                    double coupling, std::uint64_t seed,
                                                    double period = 8.0);

enum class Scenario { convergent, rigid, partial, metastable };

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view s);

// Sixteen-layer trace with a logistic accuracy curve whose analysis under the
// default config lands in the scenario's state. Candidate realizations are
// drawn from seed-derived streams until one passes the check; GenerationError
// if none does. length must be >= 40.
ActivationTrace gen_trace(Scenario scenario, std::size_t length, std::uint64_t seed);

}  // namespace traindyn::synthgen
