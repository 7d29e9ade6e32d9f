#include <gtest/gtest.h>

#include <random>

#include "lipcot/codebook.hpp"
#include "lipcot/error.hpp"
#include "lipcot/io.hpp"
#include "support.hpp"

using namespace lipcot;
using codebook::TokenId;

namespace {

std::vector<latent::LatentVector> random_corpus(std::size_t n, int order,
                                                const latent::LatentMethod& method,
                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<latent::LatentVector> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(latent::features(test::random_stable_model(rng, order, 0.9), method));
  return out;
}

codebook::TrainConfig config(const latent::LatentMethod& method, int order, std::size_t k,
                             std::uint64_t seed = 0) {
  codebook::TrainConfig c;
  c.method = method;
  c.order = order;
  c.k = k;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(NormStats, RoundTripAndConstantDimensions) {
  const std::vector<double> data{1.0, 5.0, 3.0, 5.0, 8.0, 5.0};
  const auto stats = codebook::NormStats::fit(data, 2);
  EXPECT_DOUBLE_EQ(stats.mean[0], 4.0);
  EXPECT_DOUBLE_EQ(stats.std[0], std::sqrt(26.0 / 3.0));  // population std
  EXPECT_EQ(stats.mean[1], 5.0);
  EXPECT_EQ(stats.std[1], 1.0);
  const std::vector<double> v{2.5, -7.0};
  const auto back = stats.denormalize(stats.normalize(v));
  EXPECT_NEAR(back[0], v[0], 1e-12);
  EXPECT_NEAR(back[1], v[1], 1e-12);
}

TEST(TrainCodebook, SingleClusterIsNormalizedMean) {
  const auto vectors = random_corpus(40, 4, latent::lpc_coeff_method(), 1);
  const auto result = codebook::train_codebook(vectors, config(latent::lpc_coeff_method(), 4, 1));
  const auto& cb = result.codebook;
  ASSERT_EQ(cb.centroids.size(), 5u);
  for (double c : cb.centroids) EXPECT_NEAR(c, 0.0, 1e-12);
  for (const auto& v : vectors) EXPECT_EQ(codebook::encode_vector(cb, v).value, 0u);
}

TEST(TrainCodebook, SeparatedBlobsArePure) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<latent::LatentVector> vectors;
  for (int i = 0; i < 100; ++i) {
    const double shift = i % 2 == 0 ? 0.0 : 1.0;  // 10 std apart
    vectors.push_back({latent::lpc_coeff_method(), {shift + noise(rng), noise(rng), noise(rng)}});
  }
  const auto cb = codebook::train_codebook(vectors, config(latent::lpc_coeff_method(), 2, 2, 5)).codebook;
  const auto even = codebook::encode_vector(cb, vectors[0]);
  const auto odd = codebook::encode_vector(cb, vectors[1]);
  EXPECT_NE(even, odd);
  for (int i = 0; i < 100; ++i)
    EXPECT_EQ(codebook::encode_vector(cb, vectors[i]), i % 2 == 0 ? even : odd);
}

TEST(EncodeVector, CentroidMapsToItsToken) {
  const auto method = latent::lpc_coeff_method();
  const auto cb = codebook::train_codebook(random_corpus(200, 3, method, 3), config(method, 3, 10)).codebook;
  for (std::uint32_t t = 0; t < 10; ++t) {
    const latent::LatentVector v{cb.method, cb.norm_stats.denormalize(cb.centroid({t}))};
    EXPECT_EQ(codebook::encode_vector(cb, v).value, t);
  }
}

TEST(EncodeVector, TieGoesToLowestToken) {
  codebook::Codebook cb;
  cb.method = latent::resolve(latent::lpc_coeff_method(), 1);
  cb.order = 1;
  cb.k = 6;
  cb.dim = 2;
  cb.norm_stats = {{0.0, 0.0}, {1.0, 1.0}};
  cb.centroids = {9, 9, 9, 9, -1, 0, 9, 9, 9, 9, 1, 0};  // tokens 2 and 5 equidistant from origin
  EXPECT_EQ(codebook::encode_vector(cb, {cb.method, {0.0, 0.0}}).value, 2u);
  EXPECT_THROW(codebook::encode_vector(cb, {cb.method, {0.0}}), Error);
}

TEST(DecodeToken, SingleVectorCodebookReproducesModel) {
  const lpc::LpcModel model{{-1.2, 0.5, -0.1}, 2.0, 0.2, 500.0};
  for (const auto& method : {latent::lpc_coeff_method(), latent::cepstrum_method(),
                             latent::dsc_method()}) {
    std::vector<latent::LatentVector> copies(5, latent::features(model, method));
    auto c = config(method, 3, 1);
    c.lambda = 0.2;
    const auto cb = codebook::train_codebook(copies, c).codebook;
    const auto back = codebook::decode_token(cb, {0}, 500.0);
    EXPECT_LE(test::max_abs_diff(back.coeffs, model.coeffs), 1e-6) << latent::to_string(method.tag);
    EXPECT_NEAR(back.noise_power, 2.0, 1e-9);
    EXPECT_EQ(back.lambda, 0.2);
  }
}

TEST(DecodeToken, ReencodeIsIdentity) {
  for (const auto& method : {latent::lpc_coeff_method(), latent::cepstrum_method(4)}) {
    const auto cb = codebook::train_codebook(random_corpus(300, 4, method, 4), config(method, 4, 16)).codebook;
    for (std::uint32_t t = 0; t < 16; ++t) {
      const auto model = codebook::decode_token(cb, {t}, 500.0);
      EXPECT_EQ(codebook::encode_vector(cb, latent::features(model, cb.method)).value, t);
    }
  }
}

TEST(Vocabulary, SizesAndOrder) {
  codebook::Codebook cb;
  cb.k = 64;
  const auto words = codebook::export_vocabulary(cb);
  ASSERT_EQ(words.size(), 69u);
  EXPECT_EQ(words[0], "[PAD]");
  EXPECT_EQ(words[4], "[MASK]");
  EXPECT_EQ(words[5], "t0");
  EXPECT_EQ(words[68], "t63");
  cb.k = 1;
  const auto one = codebook::export_vocabulary(cb);
  ASSERT_EQ(one.size(), 6u);
  EXPECT_EQ(one.back(), "t0");
}

TEST(Vocabulary, TokenWords) {
  codebook::Codebook cb;
  cb.k = 12;
  EXPECT_EQ(codebook::token_word({11}), "t11");
  EXPECT_EQ(codebook::parse_token_word(cb, "t11").value, 11u);
  for (const char* bad : {"t12", "t01", "t", "x3", "t-1", "[CLS]", "t3a"}) {
    try {
      codebook::parse_token_word(cb, bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidToken);
      EXPECT_NE(std::string(e.what()).find(bad), std::string::npos);
    }
  }
}

TEST(TrainCodebook, DeterministicBytes) {
  const auto method = latent::cepstrum_method();
  const auto vectors = random_corpus(150, 6, method, 5);
  auto c = config(method, 6, 8, 42);
  const auto a = io::to_json(codebook::train_codebook(vectors, c).codebook).dump();
  c.parallel = false;
  const auto b = io::to_json(codebook::train_codebook(vectors, c).codebook).dump();
  EXPECT_EQ(a, b);
  c.seed = 43;
  EXPECT_NE(a, io::to_json(codebook::train_codebook(vectors, c).codebook).dump());
}

TEST(TrainCodebook, ReportIsConsistent) {
  const auto method = latent::lpc_coeff_method();
  const auto result = codebook::train_codebook(random_corpus(120, 2, method, 6), config(method, 2, 5));
  std::size_t total = 0;
  for (auto n : result.report.counts) {
    EXPECT_GE(n, 1u);
    total += n;
  }
  EXPECT_EQ(total, 120u);
  EXPECT_GE(result.report.inertia_history.size(), static_cast<std::size_t>(result.report.iterations) + 1);
}

TEST(TrainCodebook, Errors) {
  const auto method = latent::lpc_coeff_method();
  const auto vectors = random_corpus(3, 2, method, 7);
  try {
    codebook::train_codebook(vectors, config(method, 2, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewVectors);
  }
  try {
    codebook::train_codebook(vectors, config(method, 3, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}
