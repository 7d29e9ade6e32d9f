#pragma once

#include <cstdint>
#include <span>
#include <vector>

// Oracles kept independent of the estimators they check: the reference Burg
// and the periodogram share no numeric code with lipcot::lpc.
namespace lipcot::testkit {

struct ArSpec {
  std::vector<double> coeffs;  // a_1..a_L, x_n = -sum a_k x_{n-k} + eta_n
  double noise_power = 1.0;
  std::uint64_t seed = 0;
};

struct BurgResult {
  std::vector<double> coeffs;
  double noise_power = 0.0;
};

/// Classical real-valued Burg (mean removed), with the denominator carried
/// by recursion rather than recomputed.
BurgResult reference_burg(std::span<const double> samples, int order);

/// Seeded AR realization; max(10 L, 500) warm-up samples are discarded.
std::vector<double> generate_ar(const ArSpec& spec, std::size_t n);

struct Periodogram {
  std::vector<double> freqs;  // k Fs / N, k = 0..N/2
  std::vector<double> power;  // |X_k|^2 / N
};

Periodogram periodogram(std::span<const double> samples, double sample_rate);

}  // namespace lipcot::testkit
