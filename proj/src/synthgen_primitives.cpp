#include <cmath>
#include <complex>
#include <numbers>

#include "traindyn/errors.hpp"
#include "traindyn/fft.hpp"
#include "traindyn/synthgen.hpp"

namespace traindyn::synthgen {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::vector<double> gen_fgn(double h_target, std::size_t length, std::uint64_t seed) {
  if (!(h_target > 0.0 && h_target < 1.0))
    throw DomainError("fGn Hurst parameter must lie in (0,1)");
  if (length < 64 || (length & (length - 1)) != 0)
    throw DomainError("fGn length must be a power of two >= 64, got " + std::to_string(length));

  const std::size_t n = length;
  const std::size_t m = 2 * n;
  auto gamma = [h2 = 2.0 * h_target](double k) {
    return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) + std::pow(std::abs(k - 1.0), h2));
  };
  // First row of the circulant embedding: gamma(0..n), gamma(n-1..1).
  std::vector<std::complex<double>> row(m);
  for (std::size_t k = 0; k <= n; ++k) row[k] = gamma(static_cast<double>(k));
  for (std::size_t k = n + 1; k < m; ++k) row[k] = row[m - k];
  const auto eig = fft::forward(row);

  std::vector<double> lambda(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double v = eig[k].real();
    if (v < -1e-8 * std::abs(eig[0].real()))
      throw NumericalError("circulant embedding has a negative eigenvalue");
    lambda[k] = std::max(v, 0.0);
  }

  Rng rng(seed);
  std::vector<std::complex<double>> a(m);
  const double md = static_cast<double>(m);
  a[0] = std::sqrt(lambda[0] / md) * rng.normal();
  a[n] = std::sqrt(lambda[n] / md) * rng.normal();
  for (std::size_t k = 1; k < n; ++k) {
    const double s = std::sqrt(lambda[k] / (2.0 * md));
    const double re = rng.normal();
    const double im = rng.normal();
    a[k] = {s * re, s * im};
    a[m - k] = std::conj(a[k]);
  }
  const auto x = fft::forward(a);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = x[j].real();
  return out;
}

std::vector<std::vector<double>> gen_coupled_phases(std::size_t n_layers, std::size_t length,
                                                    double coupling, std::uint64_t seed,
                                                    double period) {
  if (n_layers < 2) throw DomainError("coupled phases need at least 2 layers");
  if (length < 16) throw DomainError("coupled phases need length >= 16");
  if (!(coupling >= 0.0 && coupling <= 1.0)) throw DomainError("coupling must lie in [0,1]");
  if (!(period >= 2.0)) throw DomainError("period must be at least 2 epochs");
  Rng rng(seed);
  const double omega = 2.0 * std::numbers::pi / period;
  std::vector<std::vector<double>> out(n_layers, std::vector<double>(length));
  for (std::size_t l = 0; l < n_layers; ++l) {
    const double offset = (1.0 - coupling) * std::numbers::pi * (2.0 * rng.uniform() - 1.0);
    for (std::size_t t = 0; t < length; ++t)
      out[l][t] = std::cos(omega * static_cast<double>(t) + offset);
  }
  return out;
}

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::convergent: return "convergent";
    case Scenario::rigid: return "rigid";
    case Scenario::partial: return "partial";
    case Scenario::metastable: return "metastable";
  }
  return "convergent";
}

Scenario parse_scenario(std::string_view s) {
  for (auto v : {Scenario::convergent, Scenario::rigid, Scenario::partial, Scenario::metastable})
    if (to_string(v) == s) return v;
  throw DomainError("unknown scenario '" + std::string(s) +
                    "' (expected convergent, rigid, partial or metastable)");
}

}  // namespace traindyn::synthgen
