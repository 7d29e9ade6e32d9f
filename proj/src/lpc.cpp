#include "lipcot/lpc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "lipcot/error.hpp"
#include "lipcot/polynomial.hpp"

namespace lipcot::lpc {
namespace {

void check_lambda(double lambda) {
  if (!(std::abs(lambda) < 1.0))
    throw Error(ErrorCode::InvalidLambda, "warping coefficient must satisfy |lambda| < 1, got " +
                                              std::to_string(lambda));
}

void check_sample_rate(double sample_rate) {
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
    throw Error(ErrorCode::InvalidArgument, "sample rate must be positive and finite");
}

void check_frequency(double freq, double sample_rate) {
  const double nyquist = 0.5 * sample_rate;
  if (!std::isfinite(freq) || std::abs(freq) > nyquist * (1.0 + 1e-12))
    throw Error(ErrorCode::FrequencyOutOfRange,
                std::to_string(freq) + " Hz outside [-" + std::to_string(nyquist) + ", " +
                    std::to_string(nyquist) + "]");
}

void validate(const LpcModel& model) {
  if (model.coeffs.empty()) throw Error(ErrorCode::InvalidOrder, "model order must be >= 1");
  for (double a : model.coeffs)
    if (!std::isfinite(a)) throw Error(ErrorCode::InvalidArgument, "non-finite LPC coefficient");
  if (!std::isfinite(model.noise_power) || model.noise_power < 0.0)
    throw Error(ErrorCode::InvalidArgument, "noise power must be finite and >= 0");
  check_lambda(model.lambda);
  check_sample_rate(model.sample_rate);
}

double angular(double freq, double sample_rate) {
  return 2.0 * std::numbers::pi * freq / sample_rate;
}

// (c0 + c1 x)^power in extended precision. The expanded warped denominator
// is badly conditioned, so its coefficients are accumulated before rounding.
std::vector<long double> pow_binomial(long double c0, long double c1, std::size_t power) {
  std::vector<long double> out{1.0L};
  for (std::size_t i = 0; i < power; ++i) {
    out.push_back(0.0L);
    for (std::size_t j = out.size() - 1; j > 0; --j) out[j] = c0 * out[j] + c1 * out[j - 1];
    out[0] *= c0;
  }
  return out;
}

std::vector<double> real_coeffs_from_poles(std::span<const Complex> roots) {
  const auto expanded = poly::expand_roots(roots);
  std::vector<double> coeffs(expanded.size() - 1);
  for (std::size_t k = 1; k < expanded.size(); ++k) coeffs[k - 1] = expanded[k].real();
  return coeffs;
}

std::vector<double> clamp_from_poles(const LpcModel& model, std::vector<Complex> roots) {
  bool clamped = false;
  for (Complex& p : roots) {
    const double r = std::abs(p);
    if (r > kMaxPoleRadius) {
      p *= kMaxPoleRadius / r;
      clamped = true;
    }
  }
  return clamped ? real_coeffs_from_poles(roots) : model.coeffs;
}

}  // namespace

LpcModel fit_burg_warped(std::span<const double> samples, double sample_rate, int order,
                         double lambda, BurgTrace* trace) {
  if (order < 1) throw Error(ErrorCode::InvalidOrder, "order must be >= 1");
  const std::size_t n = samples.size();
  const auto order_sz = static_cast<std::size_t>(order);
  if (n <= order_sz)
    throw Error(ErrorCode::InvalidOrder, "segment length " + std::to_string(n) +
                                             " must exceed order " + std::to_string(order));
  check_lambda(lambda);
  check_sample_rate(sample_rate);
  if (!std::all_of(samples.begin(), samples.end(), [](double x) { return std::isfinite(x); }))
    throw Error(ErrorCode::InvalidArgument, "segment contains non-finite samples");
  if (std::all_of(samples.begin(), samples.end(), [&](double x) { return x == samples[0]; }))
    throw Error(ErrorCode::DegenerateInput, "segment has zero power after mean removal");

  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
  std::vector<Complex> fwd(n);
  for (std::size_t i = 0; i < n; ++i) fwd[i] = samples[i] - mean;
  std::vector<Complex> bwd = fwd;

  double noise_power = 0.0;
  for (const Complex& x : fwd) noise_power += std::norm(x);
  noise_power /= static_cast<double>(n);
  if (noise_power == 0.0)
    throw Error(ErrorCode::DegenerateInput, "segment has zero power after mean removal");

  if (trace) {
    trace->reflection_magnitudes.clear();
    trace->noise_powers.assign(1, noise_power);
  }

  std::vector<Complex> a{Complex(1.0, 0.0)};
  a.reserve(order_sz + 1);
  std::vector<Complex> warped_bwd;
  std::vector<Complex> next(order_sz + 1);

  for (std::size_t stage = 1; stage <= order_sz; ++stage) {
    // fwd and bwd hold n - stage + 1 samples; both shrink by one per stage.
    const std::size_t len = n - stage;
    warped_bwd.assign(len, Complex(0.0, 0.0));
    warped_bwd[0] = bwd[0] - lambda * bwd[1];
    for (std::size_t j = 1; j < len; ++j)
      warped_bwd[j] = bwd[j] - lambda * (bwd[j + 1] - warped_bwd[j - 1]);

    Complex cross = 0.0;
    double energy = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
      const Complex& f = fwd[j + 1];
      cross += f * std::conj(warped_bwd[j]);
      energy += std::norm(f) + std::norm(warped_bwd[j]);
    }
    Complex k = energy > 0.0 ? -2.0 * cross / energy : Complex(0.0, 0.0);
    if (const double mag = std::abs(k); mag > 1.0) k /= mag;

    for (std::size_t j = 0; j < len; ++j) {
      const Complex f = fwd[j + 1];
      const Complex b = warped_bwd[j];
      fwd[j] = f + k * b;
      bwd[j] = b + std::conj(k) * f;
    }
    fwd.resize(len);
    bwd.resize(len);

    noise_power = std::max(0.0, (1.0 - std::norm(k)) * noise_power);

    // a <- [a; 0] + k J [conj(a); 0]
    a.push_back(Complex(0.0, 0.0));
    for (std::size_t m = 0; m <= stage; ++m) next[m] = a[m] + k * std::conj(a[stage - m]);
    std::copy_n(next.begin(), stage + 1, a.begin());

    if (trace) {
      trace->reflection_magnitudes.push_back(std::abs(k));
      trace->noise_powers.push_back(noise_power);
    }
  }

  LpcModel model;
  model.coeffs.resize(order_sz);
  for (std::size_t m = 1; m <= order_sz; ++m) model.coeffs[m - 1] = a[m].real();
  model.noise_power = noise_power;
  model.lambda = lambda;
  model.sample_rate = sample_rate;
  return model;
}

std::vector<Complex> poles(const LpcModel& model) {
  validate(model);
  auto roots = poly::durand_kerner(model.coeffs);
  for (Complex& p : roots)
    if (std::abs(p.imag()) < kRealSnap) p = Complex(p.real(), 0.0);
  return roots;
}

std::vector<double> power_spectrum(const LpcModel& model, std::span<const double> freqs) {
  validate(model);
  std::vector<double> out;
  out.reserve(freqs.size());
  for (double f : freqs) {
    check_frequency(f, model.sample_rate);
    const Complex delay = std::polar(1.0, -angular(f, model.sample_rate));
    const Complex d = (delay - model.lambda) / (1.0 - model.lambda * delay);
    Complex poly = 0.0;
    for (auto it = model.coeffs.rbegin(); it != model.coeffs.rend(); ++it) poly = (poly + *it) * d;
    poly += 1.0;
    out.push_back(model.noise_power / std::norm(poly));
  }
  return out;
}

double warp_frequency(double freq, double lambda, double sample_rate) {
  check_lambda(lambda);
  check_sample_rate(sample_rate);
  check_frequency(freq, sample_rate);
  const double w = angular(freq, sample_rate);
  const double lambda2 = lambda * lambda;
  const double warped =
      std::atan2((1.0 - lambda2) * std::sin(w), (1.0 + lambda2) * std::cos(w) - 2.0 * lambda);
  return sample_rate / (2.0 * std::numbers::pi) * warped;
}

TransferFunction to_conventional_tf(const LpcModel& model) {
  validate(model);
  const std::size_t order = model.order();
  const double lambda = model.lambda;
  TransferFunction tf;
  if (lambda == 0.0) {
    tf.numerator = {1.0};
    tf.denominator.reserve(order + 1);
    tf.denominator.push_back(1.0);
    tf.denominator.insert(tf.denominator.end(), model.coeffs.begin(), model.coeffs.end());
    return tf;
  }

  const long double lam = lambda;
  const auto numerator = pow_binomial(1.0L, -lam, order);
  tf.numerator.assign(numerator.begin(), numerator.end());
  std::vector<long double> denominator(order + 1, 0.0L);
  for (std::size_t k = 0; k <= order; ++k) {
    const long double ak = k == 0 ? 1.0L : model.coeffs[k - 1];
    const auto rising = pow_binomial(-lam, 1.0L, k);
    const auto falling = pow_binomial(1.0L, -lam, order - k);
    for (std::size_t i = 0; i < rising.size(); ++i)
      for (std::size_t j = 0; j < falling.size(); ++j)
        denominator[i + j] += ak * rising[i] * falling[j];
  }
  tf.denominator.assign(denominator.begin(), denominator.end());
  return tf;
}

std::vector<double> rational_power_spectrum(const TransferFunction& tf, double noise_power,
                                            double sample_rate, std::span<const double> freqs) {
  check_sample_rate(sample_rate);
  std::vector<double> out;
  out.reserve(freqs.size());
  for (double f : freqs) {
    check_frequency(f, sample_rate);
    // Extended-precision Horner: the expanded polynomials cancel heavily.
    const long double w = angular(f, sample_rate);
    const std::complex<long double> x(std::cos(w), -std::sin(w));
    auto horner = [&](const std::vector<double>& c) {
      std::complex<long double> acc = 0.0L;
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + static_cast<long double>(*it);
      return acc;
    };
    const auto h = horner(tf.numerator) / horner(tf.denominator);
    out.push_back(static_cast<double>(noise_power * std::norm(h)));
  }
  return out;
}

std::vector<double> filter(const TransferFunction& tf, std::span<const double> input) {
  const auto& num = tf.numerator;
  const auto& den = tf.denominator;
  if (den.empty() || den[0] == 0.0)
    throw Error(ErrorCode::InvalidArgument, "denominator must have a non-zero leading term");
  std::vector<double> out(input.size());
  for (std::size_t n = 0; n < input.size(); ++n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < num.size() && i <= n; ++i) acc += num[i] * input[n - i];
    for (std::size_t i = 1; i < den.size() && i <= n; ++i) acc -= den[i] * out[n - i];
    out[n] = acc / den[0];
  }
  return out;
}

std::vector<double> clamp_pole_radii(const LpcModel& model) {
  return clamp_from_poles(model, poles(model));
}

Segment synthesize(const LpcModel& model, std::size_t n_samples, std::uint64_t seed) {
  validate(model);
  if (n_samples < 1) throw Error(ErrorCode::InvalidArgument, "n_samples must be >= 1");
  auto roots = poles(model);
  for (const Complex& p : roots)
    if (std::abs(p) > 1.0 + kStabilityTolerance)
      throw Error(ErrorCode::UnstableModel,
                  "pole modulus " + std::to_string(std::abs(p)) + " outside the unit circle");

  LpcModel stable = model;
  stable.coeffs = clamp_from_poles(model, std::move(roots));
  const TransferFunction tf = to_conventional_tf(stable);

  const std::size_t warmup = std::max<std::size_t>(10 * model.order(), 500);
  std::mt19937_64 rng(seed);
  std::vector<double> noise(n_samples + warmup, 0.0);
  if (model.noise_power > 0.0) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(model.noise_power));
    for (double& x : noise) x = gauss(rng);
  }

  auto filtered = filter(tf, noise);
  Segment out;
  out.sample_rate = model.sample_rate;
  out.samples.assign(filtered.begin() + static_cast<std::ptrdiff_t>(warmup), filtered.end());
  return out;
}

}  // namespace lipcot::lpc
