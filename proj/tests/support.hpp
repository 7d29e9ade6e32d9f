#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "lipcot/lpc.hpp"
#include "lipcot/pipeline.hpp"
#include "lipcot/polynomial.hpp"
#include "lipcot/testkit.hpp"

namespace lipcot::test {

/// Random stable real model: conjugate pole pairs (plus one real pole for
/// odd orders) with radii in [min_radius, max_radius].
inline lpc::LpcModel random_stable_model(std::mt19937_64& rng, int order, double max_radius = 0.95,
                                         double min_radius = 0.1, double lambda = 0.0,
                                         double sample_rate = 500.0) {
  std::uniform_real_distribution<double> radius(min_radius, max_radius);
  std::uniform_real_distribution<double> angle(0.05, std::numbers::pi - 0.05);
  std::uniform_real_distribution<double> sign(-1.0, 1.0);
  std::vector<std::complex<double>> roots;
  for (int i = 0; i + 1 < order; i += 2) {
    const auto p = std::polar(radius(rng), angle(rng));
    roots.push_back(p);
    roots.push_back(std::conj(p));
  }
  if (order % 2 == 1) roots.emplace_back(std::copysign(radius(rng), sign(rng)), 0.0);
  const auto expanded = poly::expand_roots(roots);
  lpc::LpcModel model;
  for (std::size_t k = 1; k < expanded.size(); ++k) model.coeffs.push_back(expanded[k].real());
  model.noise_power = std::exp(std::uniform_real_distribution<double>(-2.0, 2.0)(rng));
  model.lambda = lambda;
  model.sample_rate = sample_rate;
  return model;
}

/// AR(2) with poles 0.9 e^{+-j 2 pi f0 / fs}.
inline std::vector<double> resonator(double f0, double fs, double radius = 0.9) {
  const double w = 2.0 * std::numbers::pi * f0 / fs;
  return {-2.0 * radius * std::cos(w), radius * radius};
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = a.size() == b.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

/// One channel per regime: `segments` back-to-back AR(2) resonator segments
/// of `window` samples each, every segment drawn with its own seed.
inline pipeline::MultichannelSeries regime_series(const std::vector<double>& freqs, double fs,
                                                  std::size_t segments, std::size_t window,
                                                  std::uint64_t seed, double radius = 0.9) {
  pipeline::MultichannelSeries series;
  series.sample_rate = fs;
  for (std::size_t r = 0; r < freqs.size(); ++r) {
    std::vector<double> channel;
    channel.reserve(segments * window);
    for (std::size_t s = 0; s < segments; ++s) {
      const auto x = testkit::generate_ar(
          {resonator(freqs[r], fs, radius), 1.0, seed + r * segments + s}, window);
      channel.insert(channel.end(), x.begin(), x.end());
    }
    series.channels.push_back(std::move(channel));
    series.channel_names.push_back("r" + std::to_string(r));
  }
  return series;
}

}  // namespace lipcot::test
