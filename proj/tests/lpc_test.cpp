#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "lipcot/error.hpp"
#include "lipcot/lpc.hpp"
#include "lipcot/testkit.hpp"
#include "support.hpp"

using namespace lipcot;
using lpc::LpcModel;

namespace {

const std::vector<double> kFixture{-1.7858, 0.81};

template <typename Fn>
void expect_error(ErrorCode code, Fn&& fn) {
  try {
    fn();
    FAIL() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

std::vector<double> grid(double step, double stop) {
  std::vector<double> out;
  for (int i = 0; i * step <= stop + 1e-12; ++i) out.push_back(std::min(i * step, stop));
  return out;
}

}  // namespace

// ---- fit_burg_warped ---------------------------------------------------------

TEST(FitBurgWarped, ZeroSegmentIsDegenerate) {
  std::vector<double> zeros(100, 0.0);
  expect_error(ErrorCode::DegenerateInput, [&] { lpc::fit_burg_warped(zeros, 500.0, 16, 0.2); });
  std::vector<double> constant(100, 3.25);
  expect_error(ErrorCode::DegenerateInput, [&] { lpc::fit_burg_warped(constant, 500.0, 4, 0.0); });
}

TEST(FitBurgWarped, RejectsBadArguments) {
  std::vector<double> x{1.0, -1.0, 0.5, 0.25};
  expect_error(ErrorCode::InvalidOrder, [&] { lpc::fit_burg_warped(x, 1.0, 4, 0.0); });
  expect_error(ErrorCode::InvalidOrder, [&] { lpc::fit_burg_warped(x, 1.0, 0, 0.0); });
  expect_error(ErrorCode::InvalidLambda, [&] { lpc::fit_burg_warped(x, 1.0, 2, 1.0); });
  expect_error(ErrorCode::InvalidLambda, [&] { lpc::fit_burg_warped(x, 1.0, 2, -1.5); });
  x[1] = NAN;
  expect_error(ErrorCode::InvalidArgument, [&] { lpc::fit_burg_warped(x, 1.0, 2, 0.0); });
}

TEST(FitBurgWarped, RecoversAr2Fixture) {
  const auto x = testkit::generate_ar({kFixture, 1.0, 7}, 2500);
  const auto model = lpc::fit_burg_warped(x, 500.0, 2, 0.0);
  ASSERT_EQ(model.order(), 2u);
  EXPECT_NEAR(model.coeffs[0], -1.7858, 0.05);
  EXPECT_NEAR(model.coeffs[1], 0.81, 0.05);
  EXPECT_NEAR(model.noise_power, 1.0, 0.1);
  EXPECT_EQ(model.lambda, 0.0);
  EXPECT_EQ(model.sample_rate, 500.0);
}

TEST(FitBurgWarped, UnwarpedMatchesReferenceBurg) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 100; ++trial) {
    const int order = 1 + trial % 16;
    const std::size_t n = 40 + static_cast<std::size_t>(trial) * 7;
    std::vector<double> x;
    if (trial % 2 == 0) {
      x = testkit::generate_ar({test::random_stable_model(rng, 1 + trial % 6).coeffs, 1.0,
                                static_cast<std::uint64_t>(trial)},
                               n);
    } else {
      x.resize(n);
      for (double& v : x) v = 3.0 + gauss(rng);
    }
    const auto fit = lpc::fit_burg_warped(x, 1.0, order, 0.0);
    const auto ref = testkit::reference_burg(x, order);
    EXPECT_LE(test::max_abs_diff(fit.coeffs, ref.coeffs), 1e-8) << "trial " << trial;
    EXPECT_NEAR(fit.noise_power, ref.noise_power, 1e-8 * ref.noise_power);
  }
}

TEST(FitBurgWarped, StagesAreMonotoneAndBounded) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  for (double lambda : {-0.6, 0.0, 0.2, 0.8}) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> x(300);
      for (double& v : x) v = gauss(rng);
      if (trial % 3 == 0) x[trial] += 50.0;  // impulse-like
      lpc::BurgTrace trace;
      const auto model = lpc::fit_burg_warped(x, 250.0, 12, lambda, &trace);
      ASSERT_EQ(trace.noise_powers.size(), 13u);
      ASSERT_EQ(trace.reflection_magnitudes.size(), 12u);
      for (std::size_t i = 1; i < trace.noise_powers.size(); ++i)
        EXPECT_LE(trace.noise_powers[i], trace.noise_powers[i - 1]);
      for (double k : trace.reflection_magnitudes) EXPECT_LE(k, 1.0);
      EXPECT_EQ(trace.noise_powers.back(), model.noise_power);
      EXPECT_GT(model.noise_power, 0.0);
      for (const auto& p : lpc::poles(model)) EXPECT_LE(std::abs(p), 1.0 + 1e-9);
    }
  }
}

TEST(FitBurgWarped, InitialPowerIsMeanRemovedEnergy) {
  const std::vector<double> x{4.0, 6.0, 5.0, 7.0, 3.0};  // mean 5
  lpc::BurgTrace trace;
  lpc::fit_burg_warped(x, 1.0, 1, 0.3, &trace);
  EXPECT_DOUBLE_EQ(trace.noise_powers.front(), (1.0 + 1.0 + 0.0 + 4.0 + 4.0) / 5.0);
}

TEST(FitBurgWarped, WarpedFitMatchesHandComputedFirstStage) {
  // One stage by hand: b^_0 = b_0 - l b_1, b^_j = b_j - l (b_{j+1} - b^_{j-1}).
  const std::vector<double> x{1.0, -2.0, 0.5, 1.5, -1.0};  // mean 0
  const double lambda = 0.4;
  std::vector<double> bh(4);
  bh[0] = x[0] - lambda * x[1];
  for (int j = 1; j < 4; ++j) bh[j] = x[j] - lambda * (x[j + 1] - bh[j - 1]);
  double cross = 0.0, energy = 0.0;
  for (int j = 0; j < 4; ++j) {
    cross += x[j + 1] * bh[j];
    energy += x[j + 1] * x[j + 1] + bh[j] * bh[j];
  }
  const double k = -2.0 * cross / energy;
  const double power = (1.0 - k * k) * (1.0 + 4.0 + 0.25 + 2.25 + 1.0) / 5.0;

  const auto model = lpc::fit_burg_warped(x, 1.0, 1, lambda);
  EXPECT_NEAR(model.coeffs[0], k, 1e-15);
  EXPECT_NEAR(model.noise_power, power, 1e-15);
}

// ---- poles -------------------------------------------------------------------

TEST(Poles, FirstOrder) {
  const auto p = lpc::poles(LpcModel{{-0.5}, 1.0, 0.0, 1.0});
  ASSERT_EQ(p.size(), 1u);
  EXPECT_NEAR(p[0].real(), 0.5, 1e-15);
  EXPECT_EQ(p[0].imag(), 0.0);
}

TEST(Poles, Ar2FixtureResonance) {
  const auto p = lpc::poles(LpcModel{kFixture, 1.0, 0.0, 500.0});
  ASSERT_EQ(p.size(), 2u);
  const double angle = 2.0 * std::numbers::pi * 10.0 / 500.0;
  for (const auto& z : p) {
    EXPECT_NEAR(std::abs(z), 0.9, 1e-9);
    // a_1 = -1.7858 is 10 Hz rounded to four decimals.
    EXPECT_NEAR(std::abs(std::arg(z)), angle, 5e-4);
  }
  EXPECT_NEAR(p[0].imag(), -p[1].imag(), 1e-12);
}

TEST(Poles, ConjugateClosureAndReexpansion) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto model = test::random_stable_model(rng, 2 + trial % 15);
    const auto p = lpc::poles(model);
    for (const auto& z : p) {
      const auto partner = std::min_element(p.begin(), p.end(), [&](auto a, auto b) {
        return std::abs(a - std::conj(z)) < std::abs(b - std::conj(z));
      });
      EXPECT_LT(std::abs(*partner - std::conj(z)), 1e-6);
    }
    const auto back = poly::expand_roots(p);
    for (std::size_t k = 0; k < model.order(); ++k)
      EXPECT_NEAR(back[k + 1].real(), model.coeffs[k], 1e-6);
  }
}

// ---- power_spectrum ----------------------------------------------------------

TEST(PowerSpectrum, WhiteNoiseIsFlat) {
  const LpcModel model{std::vector<double>(6, 0.0), 2.0, 0.3, 500.0};
  for (double p : lpc::power_spectrum(model, grid(12.5, 250.0))) EXPECT_DOUBLE_EQ(p, 2.0);
}

TEST(PowerSpectrum, Ar2PeakMatchesClosedForm) {
  // For 1 + a1 z^-1 + a2 z^-2 the peak sits at cos w = -a1 (1 + a2) / (4 a2).
  // With radius 0.9 the conjugate pole pulls the peak well below 10 Hz.
  const LpcModel model{kFixture, 1.0, 0.0, 500.0};
  const auto freqs = grid(0.1, 250.0);
  const auto psd = lpc::power_spectrum(model, freqs);
  const double peak = freqs[std::max_element(psd.begin(), psd.end()) - psd.begin()];
  const double expected =
      std::acos(1.7858 * 1.81 / (4.0 * 0.81)) * 500.0 / (2.0 * std::numbers::pi);
  EXPECT_NEAR(peak, expected, 0.1);
  EXPECT_NEAR(expected, 5.48, 0.01);
}

TEST(PowerSpectrum, PoleContributionToLogPower) {
  // log P(f_oc) = log s2 - 2 log|1-A| - log|1 + A^2 - 2A cos(4 pi f_oc / Fs)|
  const double fs = 500.0, f_oc = 40.0, sigma2 = 1.7;
  for (double radius : {0.5, 0.9, 0.99, 0.999}) {
    const LpcModel model{test::resonator(f_oc, fs, radius), sigma2, 0.0, fs};
    const double f[] = {f_oc};
    const double log_p = std::log(lpc::power_spectrum(model, f)[0]);
    const double expected =
        std::log(sigma2) - 2.0 * std::log(1.0 - radius) -
        std::log(1.0 + radius * radius - 2.0 * radius * std::cos(4.0 * std::numbers::pi * f_oc / fs));
    EXPECT_NEAR(log_p, expected, 1e-9);
  }
}

TEST(PowerSpectrum, UnwarpedReducesToDirectFormula) {
  std::mt19937_64 rng(3);
  const auto model = test::random_stable_model(rng, 8);
  const auto freqs = grid(1.0, 250.0);
  const auto psd = lpc::power_spectrum(model, freqs);
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    std::complex<double> a = 1.0;
    for (std::size_t k = 0; k < model.order(); ++k)
      a += model.coeffs[k] * std::polar(1.0, -2.0 * std::numbers::pi * freqs[i] * (k + 1) / 500.0);
    EXPECT_NEAR(psd[i], model.noise_power / std::norm(a), 1e-10 * psd[i]);
  }
}

TEST(PowerSpectrum, RejectsOutOfRangeFrequency) {
  const LpcModel model{{-0.5}, 1.0, 0.0, 100.0};
  const double bad[] = {50.5};
  expect_error(ErrorCode::FrequencyOutOfRange, [&] { lpc::power_spectrum(model, bad); });
  const double ok[] = {-50.0, 50.0};
  EXPECT_EQ(lpc::power_spectrum(model, ok).size(), 2u);
}

// ---- warp_frequency -----------------------------------------------------------

TEST(WarpFrequency, Examples) {
  EXPECT_NEAR(lpc::warp_frequency(123.0, 0.0, 500.0), 123.0, 1e-12);
  for (double lambda : {-0.9, -0.3, 0.2, 0.7}) EXPECT_EQ(lpc::warp_frequency(0.0, lambda, 500.0), 0.0);
  EXPECT_NEAR(lpc::warp_frequency(250.0, 0.2, 500.0), 250.0, 1e-9);
}

TEST(WarpFrequency, StrictlyIncreasingAndAntisymmetric) {
  for (double lambda : {-0.95, -0.5, 0.0, 0.2, 0.7, 0.95}) {
    double prev = -1.0;
    for (int i = 0; i <= 2500; ++i) {
      const double f = 0.1 * i;
      const double w = lpc::warp_frequency(f, lambda, 500.0);
      EXPECT_GT(w, prev) << "lambda " << lambda << " f " << f;
      EXPECT_NEAR(lpc::warp_frequency(-f, lambda, 500.0), -w, 1e-9);
      prev = w;
    }
  }
}

TEST(WarpFrequency, PositiveLambdaStretchesLowFrequencies) {
  EXPECT_GT(lpc::warp_frequency(10.0, 0.2, 500.0), 10.0);
  EXPECT_LT(lpc::warp_frequency(10.0, -0.2, 500.0), 10.0);
  // Small-f slope is (1 + l) / (1 - l).
  EXPECT_NEAR(lpc::warp_frequency(0.01, 0.2, 500.0) / 0.01, 1.5, 1e-6);
}

TEST(WarpFrequency, Errors) {
  expect_error(ErrorCode::InvalidLambda, [] { lpc::warp_frequency(1.0, 1.0, 500.0); });
  expect_error(ErrorCode::FrequencyOutOfRange, [] { lpc::warp_frequency(251.0, 0.2, 500.0); });
}

// ---- to_conventional_tf -----------------------------------------------------------

TEST(ConventionalTf, UnwarpedIsIdentity) {
  const auto tf = lpc::to_conventional_tf(LpcModel{{-0.5}, 1.0, 0.0, 1.0});
  EXPECT_EQ(tf.numerator, std::vector<double>{1.0});
  EXPECT_EQ(tf.denominator, (std::vector<double>{1.0, -0.5}));
}

TEST(ConventionalTf, FirstOrderWarpedByHand) {
  const double a1 = 0.35;
  const auto tf = lpc::to_conventional_tf(LpcModel{{a1}, 1.0, 0.2, 1.0});
  ASSERT_EQ(tf.numerator.size(), 2u);
  EXPECT_DOUBLE_EQ(tf.numerator[0], 1.0);
  EXPECT_DOUBLE_EQ(tf.numerator[1], -0.2);
  ASSERT_EQ(tf.denominator.size(), 2u);
  EXPECT_DOUBLE_EQ(tf.denominator[0], 1.0 - 0.2 * a1);
  EXPECT_DOUBLE_EQ(tf.denominator[1], a1 - 0.2);
}

TEST(ConventionalTf, FrequencyResponseMatchesWarpedEvaluation) {
  std::mt19937_64 rng(17);
  // The expanded form loses about log10(((1 + |l|) / (1 - |l|))^L) digits, so
  // the 1e-9 match holds for moderate warping such as the default l = 0.2.
  std::uniform_real_distribution<double> lam(-0.3, 0.3);
  std::vector<double> freqs(512);
  for (int i = 0; i < 512; ++i) freqs[i] = 250.0 * i / 511.0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto model = test::random_stable_model(rng, 1 + trial % 16, 0.95, 0.1, lam(rng));
    const auto warped = lpc::power_spectrum(model, freqs);
    const auto tf = lpc::to_conventional_tf(model);
    const auto rational = lpc::rational_power_spectrum(tf, model.noise_power, 500.0, freqs);
    for (std::size_t i = 0; i < freqs.size(); ++i)
      EXPECT_NEAR(rational[i], warped[i], 1e-9 * warped[i]) << "trial " << trial;
  }
}

// ---- synthesize -------------------------------------------------------------------

TEST(Synthesize, DeterministicPerSeed) {
  const LpcModel model{kFixture, 1.0, 0.2, 500.0};
  const auto a = lpc::synthesize(model, 1000, 42);
  const auto b = lpc::synthesize(model, 1000, 42);
  const auto c = lpc::synthesize(model, 1000, 43);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_NE(a.samples, c.samples);
  EXPECT_EQ(a.samples.size(), 1000u);
  EXPECT_EQ(a.sample_rate, 500.0);
}

TEST(Synthesize, RefitRecoversSource) {
  const LpcModel model{kFixture, 1.0, 0.0, 500.0};
  const auto x = lpc::synthesize(model, 10000, 1);
  const auto fit = lpc::fit_burg_warped(x, 2, 0.0);
  EXPECT_NEAR(fit.coeffs[0], kFixture[0], 0.05);
  EXPECT_NEAR(fit.coeffs[1], kFixture[1], 0.05);
}

TEST(Synthesize, WhiteNoiseVariance) {
  const LpcModel model{std::vector<double>(3, 0.0), 4.0, 0.0, 100.0};
  const auto x = lpc::synthesize(model, 10000, 8).samples;
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= x.size();
  EXPECT_NEAR(var, 4.0, 0.15 * 4.0);
}

TEST(Synthesize, RandomStableModelsRefit) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const int order = 2 + trial % 5;
    const auto model = test::random_stable_model(rng, order, 0.95);
    const auto x = lpc::synthesize(model, 10000, 1000 + trial);
    const auto fit = lpc::fit_burg_warped(x, static_cast<int>(order), 0.0);
    EXPECT_LE(test::max_abs_diff(fit.coeffs, model.coeffs), 0.1) << "trial " << trial;
  }
}

TEST(Synthesize, WarpedRefitConvergesToWeightedFit) {
  // Warped prediction error is white only in the warped frequency nu, where
  // d omega = (1 - l^2) / |1 + l e^{-j nu}|^2 d nu. The refit therefore
  // converges to the Yule-Walker solution of the Jacobian-weighted spectrum,
  // not to the generating coefficients.
  for (double lambda : {0.2, -0.3}) {
    const LpcModel model{test::resonator(20.0, 500.0, 0.85), 1.0, lambda, 500.0};
    const int n_grid = 200000;
    double r[3] = {0.0, 0.0, 0.0};
    for (int i = 0; i < n_grid; ++i) {
      const double nu = -std::numbers::pi + 2.0 * std::numbers::pi * i / n_grid;
      const auto e = std::polar(1.0, -nu);
      const auto a = 1.0 + model.coeffs[0] * e + model.coeffs[1] * e * e;
      const double s = (1.0 - lambda * lambda) / std::norm(1.0 + lambda * e) / std::norm(a);
      for (int k = 0; k < 3; ++k) r[k] += s * std::cos(k * nu) / n_grid;
    }
    const double det = r[0] * r[0] - r[1] * r[1];
    const double expected[2] = {(-r[1] * r[0] + r[2] * r[1]) / det,
                                (-r[2] * r[0] + r[1] * r[1]) / det};

    const auto x = lpc::synthesize(model, 200000, 5);
    const auto fit = lpc::fit_burg_warped(x, 2, lambda);
    EXPECT_NEAR(fit.coeffs[0], expected[0], 0.01) << "lambda " << lambda;
    EXPECT_NEAR(fit.coeffs[1], expected[1], 0.01) << "lambda " << lambda;
    EXPECT_GT(std::abs(expected[0] - model.coeffs[0]), 0.05);
  }
}

TEST(Synthesize, UnstableModelRejected) {
  const LpcModel model{{-1.2}, 1.0, 0.0, 1.0};
  expect_error(ErrorCode::UnstableModel, [&] { lpc::synthesize(model, 10, 0); });
}

TEST(Synthesize, UnitCirclePolesAreClamped) {
  // (1 - z^-1)(1 + z^-1): both poles on the unit circle.
  const LpcModel model{{0.0, -1.0}, 1.0, 0.0, 1.0};
  const auto clamped = lpc::clamp_pole_radii(model);
  EXPECT_NEAR(clamped[1], -lpc::kMaxPoleRadius * lpc::kMaxPoleRadius, 1e-12);
  const auto x = lpc::synthesize(model, 2000, 3).samples;
  for (double v : x) ASSERT_TRUE(std::isfinite(v));
}
