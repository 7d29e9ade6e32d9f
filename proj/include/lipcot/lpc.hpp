#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace lipcot::lpc {

using Complex = std::complex<double>;

/// A finite window of samples; the unit of tokenization.
struct Segment {
  std::vector<double> samples;
  double sample_rate = 1.0;  // Hz
};

/// Order-L warped all-pole model 1 / (1 + sum_k a_k D(z)^k) driven by white
/// noise of power noise_power, with D(z) = (z^-1 - lambda) / (1 - lambda z^-1).
struct LpcModel {
  std::vector<double> coeffs;  // a_1 .. a_L
  double noise_power = 0.0;
  double lambda = 0.0;
  double sample_rate = 1.0;

  std::size_t order() const noexcept { return coeffs.size(); }
};

/// Per-stage diagnostics of the Burg recursion.
struct BurgTrace {
  std::vector<double> reflection_magnitudes;  // |k_i|, i = 1..L
  std::vector<double> noise_powers;           // sigma^2 before stage 1, then after each stage
};

// Pole radii above this are clamped before synthesis and dominant-spectral
// feature extraction.
inline constexpr double kMaxPoleRadius = 1.0 - 1e-8;
// Poles beyond this modulus make a model unstable.
inline constexpr double kStabilityTolerance = 1e-9;
// Roots whose imaginary part is below this are snapped to the real axis.
inline constexpr double kRealSnap = 1e-9;

/// Frequency-warped Burg estimator. The segment mean is removed first.
LpcModel fit_burg_warped(std::span<const double> samples, double sample_rate, int order,
                         double lambda, BurgTrace* trace = nullptr);

inline LpcModel fit_burg_warped(const Segment& segment, int order, double lambda,
                                BurgTrace* trace = nullptr) {
  return fit_burg_warped(segment.samples, segment.sample_rate, order, lambda, trace);
}

/// Roots of 1 + sum_k a_k z^-k in the z-plane (of the warped-domain polynomial).
std::vector<Complex> poles(const LpcModel& model);

/// sigma^2 |H|^2 with H evaluated through the all-pass delay D(e^{j 2 pi f / Fs}).
std::vector<double> power_spectrum(const LpcModel& model, std::span<const double> freqs);

double warp_frequency(double freq, double lambda, double sample_rate);

struct TransferFunction {
  std::vector<double> numerator;    // powers of z^-1
  std::vector<double> denominator;  // powers of z^-1
};

/// Clears the all-pass sections out of the warped transfer function:
/// H(z) = (1 - lambda z^-1)^L / sum_k a_k (z^-1 - lambda)^k (1 - lambda z^-1)^(L-k).
TransferFunction to_conventional_tf(const LpcModel& model);

/// sigma^2 |N(e^{jw}) / D(e^{jw})|^2 of an expanded transfer function.
std::vector<double> rational_power_spectrum(const TransferFunction& tf, double noise_power,
                                            double sample_rate, std::span<const double> freqs);

/// Draws one realization of the model's stochastic process.
Segment synthesize(const LpcModel& model, std::size_t n_samples, std::uint64_t seed);

/// Coefficients whose poles are the model's poles pulled inside radius
/// kMaxPoleRadius. Returns the coefficients unchanged when no pole needs it.
std::vector<double> clamp_pole_radii(const LpcModel& model);

/// Filters `input` through numerator/denominator (direct form, zero state).
std::vector<double> filter(const TransferFunction& tf, std::span<const double> input);

}  // namespace lipcot::lpc
