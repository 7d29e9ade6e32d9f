#include "lipcot/codebook.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "lipcot/error.hpp"
#include "lipcot/kmeans.hpp"

namespace lipcot::codebook {
namespace {

constexpr std::array<const char*, kSpecialTokenCount> kSpecialTokens = {
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"};

void check_vector(const Codebook& codebook, const latent::LatentVector& vec) {
  if (vec.method.tag != codebook.method.tag || vec.values.size() != codebook.dim)
    throw Error(ErrorCode::DimensionMismatch,
                "latent vector (" + std::string(latent::to_string(vec.method.tag)) + ", dim " +
                    std::to_string(vec.values.size()) + ") does not match codebook (" +
                    std::string(latent::to_string(codebook.method.tag)) + ", dim " +
                    std::to_string(codebook.dim) + ")");
}

}  // namespace

NormStats NormStats::fit(std::span<const double> data, std::size_t dim) {
  const std::size_t n = data.size() / dim;
  NormStats stats;
  stats.mean.assign(dim, 0.0);
  stats.std.assign(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < dim; ++d) stats.mean[d] += data[i * dim + d];
  for (double& m : stats.mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < dim; ++d) {
      const double dev = data[i * dim + d] - stats.mean[d];
      stats.std[d] += dev * dev;
    }
  for (std::size_t d = 0; d < dim; ++d) {
    const double s = std::sqrt(stats.std[d] / static_cast<double>(n));
    // Constant dimensions (up to rounding in the mean) keep unit scale.
    stats.std[d] = s > 1e-12 * std::max(1.0, std::abs(stats.mean[d])) ? s : 1.0;
  }
  return stats;
}

std::vector<double> NormStats::normalize(std::span<const double> values) const {
  if (values.size() != mean.size())
    throw Error(ErrorCode::DimensionMismatch, "normalization dimension mismatch");
  std::vector<double> out(values.size());
  for (std::size_t d = 0; d < values.size(); ++d) out[d] = (values[d] - mean[d]) / std[d];
  return out;
}

std::vector<double> NormStats::denormalize(std::span<const double> values) const {
  if (values.size() != mean.size())
    throw Error(ErrorCode::DimensionMismatch, "normalization dimension mismatch");
  std::vector<double> out(values.size());
  for (std::size_t d = 0; d < values.size(); ++d) out[d] = values[d] * std[d] + mean[d];
  return out;
}

std::span<const double> Codebook::centroid(TokenId token) const {
  if (token.value >= k)
    throw Error(ErrorCode::InvalidToken, "token " + std::to_string(token.value) +
                                             " outside vocabulary of " + std::to_string(k));
  return std::span<const double>(centroids).subspan(token.value * dim, dim);
}

TrainResult train_codebook(std::span<const latent::LatentVector> vectors,
                           const TrainConfig& config) {
  if (config.k < 1) throw Error(ErrorCode::InvalidArgument, "K must be >= 1");
  if (vectors.size() < config.k)
    throw Error(ErrorCode::TooFewVectors, std::to_string(vectors.size()) +
                                              " latent vectors for K = " +
                                              std::to_string(config.k));
  const latent::LatentMethod method = latent::resolve(config.method, config.order);
  const std::size_t dim = latent::dimension(method, config.order);

  std::vector<double> data;
  data.reserve(vectors.size() * dim);
  for (const auto& v : vectors) {
    if (v.method.tag != method.tag || v.values.size() != dim)
      throw Error(ErrorCode::DimensionMismatch, "training vectors disagree on latent space");
    data.insert(data.end(), v.values.begin(), v.values.end());
  }

  TrainResult out;
  Codebook& cb = out.codebook;
  cb.method = method;
  cb.order = config.order;
  cb.lambda = config.lambda;
  cb.k = config.k;
  cb.dim = dim;
  cb.seed = config.seed;
  cb.norm_stats = NormStats::fit(data, dim);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto z = cb.norm_stats.normalize(std::span<const double>(data).subspan(i * dim, dim));
    std::copy(z.begin(), z.end(), data.begin() + static_cast<std::ptrdiff_t>(i * dim));
  }

  kmeans::Options options;
  options.parallel = config.parallel;
  auto fit = kmeans::fit(data, dim, config.k, config.seed, options);
  cb.centroids = std::move(fit.centroids);
  out.report.inertia_history = std::move(fit.inertia_history);
  out.report.counts = std::move(fit.counts);
  out.report.iterations = fit.iterations;
  return out;
}

TokenId encode_vector(const Codebook& codebook, const latent::LatentVector& vec) {
  check_vector(codebook, vec);
  const auto z = codebook.norm_stats.normalize(vec.values);
  return TokenId{kmeans::nearest(z, codebook.centroids, codebook.dim)};
}

lpc::LpcModel decode_token(const Codebook& codebook, TokenId token, double sample_rate) {
  latent::LatentVector vec{codebook.method,
                           codebook.norm_stats.denormalize(codebook.centroid(token))};
  return latent::latent_to_model(vec, codebook.order, codebook.lambda, sample_rate);
}

std::string token_word(TokenId token) { return "t" + std::to_string(token.value); }

std::vector<std::string> export_vocabulary(const Codebook& codebook) {
  std::vector<std::string> words(kSpecialTokens.begin(), kSpecialTokens.end());
  words.reserve(kSpecialTokenCount + codebook.k);
  for (std::size_t t = 0; t < codebook.k; ++t)
    words.push_back(token_word(TokenId{static_cast<std::uint32_t>(t)}));
  return words;
}

TokenId parse_token_word(const Codebook& codebook, const std::string& word) {
  std::uint32_t value = 0;
  if (word.size() >= 2 && word[0] == 't') {
    const char* begin = word.data() + 1;
    const char* end = word.data() + word.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    const bool canonical = word.size() == 2 || word[1] != '0';
    if (ec == std::errc() && ptr == end && canonical && value < codebook.k) return {value};
  }
  throw Error(ErrorCode::InvalidToken, "unknown token word '" + word + "'");
}

}  // namespace lipcot::codebook
