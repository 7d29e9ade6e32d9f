#include "lipcot/testkit.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <string>

#include "lipcot/error.hpp"
#include "lipcot/lpc.hpp"

namespace lipcot::testkit {

BurgResult reference_burg(std::span<const double> samples, int order) {
  const auto n = static_cast<long>(samples.size());
  if (order < 1 || n <= order)
    throw Error(ErrorCode::InvalidOrder, "reference_burg needs 1 <= order < N");
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  std::vector<double> x(samples.begin(), samples.end());
  for (double& v : x) v -= mean;
  const double energy = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
  if (std::all_of(samples.begin(), samples.end(), [&](double v) { return v == samples[0]; }) ||
      energy == 0.0)
    throw Error(ErrorCode::DegenerateInput, "constant signal");

  // e: forward error, b: backward error, both indexed by absolute time.
  std::vector<double> e = x, b = x;
  std::vector<double> a(order + 1, 0.0), prev(order + 1, 0.0);
  a[0] = 1.0;
  double err = energy / n;
  double den = 2.0 * energy - x[0] * x[0] - x[n - 1] * x[n - 1];

  for (int m = 1; m <= order; ++m) {
    double num = 0.0;
    for (long t = m; t < n; ++t) num += e[t] * b[t - 1];
    const double k = den > 0.0 ? -2.0 * num / den : 0.0;

    prev = a;
    for (int i = 1; i <= m; ++i) a[i] = prev[i] + k * prev[m - i];

    for (long t = n - 1; t >= m; --t) {
      const double et = e[t];
      e[t] = et + k * b[t - 1];
      b[t] = b[t - 1] + k * et;
    }
    err *= 1.0 - k * k;
    // Faber's denominator recursion.
    den = (1.0 - k * k) * den - e[m] * e[m] - b[n - 1] * b[n - 1];
  }

  BurgResult out;
  out.coeffs.assign(a.begin() + 1, a.end());
  out.noise_power = err;
  return out;
}

std::vector<double> generate_ar(const ArSpec& spec, std::size_t n) {
  if (spec.coeffs.empty()) throw Error(ErrorCode::InvalidOrder, "AR spec needs order >= 1");
  if (!(spec.noise_power >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "AR noise power must be >= 0");
  lpc::LpcModel check{spec.coeffs, spec.noise_power, 0.0, 1.0};
  for (const auto& p : lpc::poles(check))
    if (std::abs(p) >= 1.0) throw Error(ErrorCode::UnstableModel, "AR spec is not stable");

  const std::size_t order = spec.coeffs.size();
  const std::size_t warmup = std::max<std::size_t>(10 * order, 500);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double scale = std::sqrt(spec.noise_power);

  std::vector<double> x(n + warmup, 0.0);
  for (std::size_t t = 0; t < x.size(); ++t) {
    double v = scale * gauss(rng);
    for (std::size_t k = 1; k <= order && k <= t; ++k) v -= spec.coeffs[k - 1] * x[t - k];
    x[t] = v;
  }
  return {x.begin() + static_cast<std::ptrdiff_t>(warmup), x.end()};
}

Periodogram periodogram(std::span<const double> samples, double sample_rate) {
  const std::size_t n = samples.size();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "periodogram needs N >= 2");
  if (!(sample_rate > 0.0)) throw Error(ErrorCode::InvalidArgument, "sample rate must be > 0");

  const std::size_t bins = n / 2 + 1;
  std::vector<double> input(samples.begin(), samples.end());
  auto* spectrum = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins));
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> guard(spectrum, &fftw_free);
  fftw_plan plan;
#pragma omp critical(lipcot_fftw_plan)
  plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), input.data(), spectrum, FFTW_ESTIMATE);
  fftw_execute(plan);
#pragma omp critical(lipcot_fftw_plan)
  fftw_destroy_plan(plan);

  Periodogram out;
  out.freqs.resize(bins);
  out.power.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    out.freqs[k] = static_cast<double>(k) * sample_rate / static_cast<double>(n);
    const double re = spectrum[k][0];
    const double im = spectrum[k][1];
    out.power[k] = (re * re + im * im) / static_cast<double>(n);
  }
  return out;
}

}  // namespace lipcot::testkit
