#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lipcot/latent.hpp"
#include "lipcot/lpc.hpp"

namespace lipcot::codebook {

inline constexpr const char* kFormatVersion = "lipcot-codebook/1";

/// Per-dimension z-score statistics fit on the training vectors.
struct NormStats {
  std::vector<double> mean;
  std::vector<double> std;

  static NormStats fit(std::span<const double> data, std::size_t dim);

  std::vector<double> normalize(std::span<const double> values) const;
  std::vector<double> denormalize(std::span<const double> values) const;
};

struct TokenId {
  std::uint32_t value = 0;
  auto operator<=>(const TokenId&) const = default;
};

struct Codebook {
  std::string version = kFormatVersion;
  latent::LatentMethod method;
  int order = 0;
  double lambda = 0.0;
  std::size_t k = 0;
  std::size_t dim = 0;
  std::vector<double> centroids;  // k x dim, normalized space
  NormStats norm_stats;
  std::uint64_t seed = 0;
  // Segmentation the codebook was trained with; 0 when unknown.
  double sample_rate = 0.0;
  double window_sec = 0.0;
  double hop_sec = 0.0;

  std::span<const double> centroid(TokenId token) const;
};

struct TrainConfig {
  latent::LatentMethod method;
  int order = 16;
  double lambda = 0.2;
  std::size_t k = 64;
  std::uint64_t seed = 0;
  bool parallel = true;
};

struct TrainingReport {
  std::vector<double> inertia_history;
  std::vector<std::size_t> counts;  // training vectors per token
  int iterations = 0;
};

struct TrainResult {
  Codebook codebook;
  TrainingReport report;
};

TrainResult train_codebook(std::span<const latent::LatentVector> vectors,
                           const TrainConfig& config);

/// Nearest centroid in normalized space; lowest token id wins ties.
TokenId encode_vector(const Codebook& codebook, const latent::LatentVector& vec);

lpc::LpcModel decode_token(const Codebook& codebook, TokenId token, double sample_rate);

/// [PAD] [UNK] [CLS] [SEP] [MASK] followed by t0 .. t{K-1}.
std::vector<std::string> export_vocabulary(const Codebook& codebook);

inline constexpr std::size_t kSpecialTokenCount = 5;

std::string token_word(TokenId token);

/// Inverse of token_word; throws InvalidToken naming the word otherwise.
TokenId parse_token_word(const Codebook& codebook, const std::string& word);

}  // namespace lipcot::codebook
