#pragma once

#include <complex>
#include <span>
#include <vector>

namespace traindyn::fft {

// Unnormalized forward DFT: X_k = sum_j x_j exp(-2 pi i j k / n).
std::vector<std::complex<double>> forward(std::span<const std::complex<double>> x);
// Inverse DFT including the 1/n factor.
std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> x);

}  // namespace traindyn::fft
