#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lipcot/codebook.hpp"
#include "lipcot/latent.hpp"
#include "lipcot/lpc.hpp"

namespace lipcot::pipeline {

struct MultichannelSeries {
  std::vector<std::vector<double>> channels;  // C x N
  double sample_rate = 1.0;
  std::vector<std::string> channel_names;

  std::size_t channel_count() const noexcept { return channels.size(); }
  std::size_t length() const noexcept { return channels.empty() ? 0 : channels.front().size(); }
};

/// Throws InvalidArgument on ragged channels, non-finite samples, or a name
/// count that differs from the channel count.
void validate(const MultichannelSeries& series);

/// floor((n - window) / hop) + 1 when n >= window, else 0.
std::size_t window_count(std::size_t n, std::size_t window, std::size_t hop);

std::vector<lpc::Segment> segment_series(std::span<const double> samples, double sample_rate,
                                         std::size_t window, std::size_t hop);

struct CorpusConfig {
  int order = 16;
  double lambda = 0.2;
  std::size_t window = 0;  // samples
  std::size_t hop = 0;     // samples
  latent::LatentMethod method;
  bool parallel = true;
};

struct LatentOrigin {
  std::size_t series = 0;
  std::size_t channel = 0;
  std::size_t window = 0;
  bool operator==(const LatentOrigin&) const = default;
};

struct Corpus {
  std::vector<latent::LatentVector> vectors;
  std::vector<LatentOrigin> origins;
  std::size_t skipped_degenerate = 0;
};

/// One latent vector per (series, channel, window) in that order. Constant
/// segments are skipped and counted.
Corpus fit_corpus(std::span<const MultichannelSeries> series_set, const CorpusConfig& config);

enum class Layout { PerChannelWindow, ChannelsAsPositions };

std::string_view to_string(Layout layout) noexcept;
/// Accepts "temporal" and "positions".
Layout parse_layout(std::string_view name);

struct TokenOrigin {
  std::size_t channel = 0;
  std::size_t window = 0;
};

struct TokenSequence {
  std::vector<codebook::TokenId> tokens;
  Layout layout = Layout::PerChannelWindow;
  std::vector<TokenOrigin> origins;
};

struct EncodeConfig {
  std::size_t window = 0;
  std::size_t hop = 0;
  Layout layout = Layout::ChannelsAsPositions;
  // When set, each must equal the codebook's value or encoding fails with
  // ConfigMismatch.
  std::optional<int> order;
  std::optional<double> lambda;
  std::optional<latent::MethodTag> method;
  bool parallel = true;
};

/// Noise floor used when a constant segment has to be tokenized.
inline constexpr double kDegenerateNoiseFloor = 1e-12;

std::vector<TokenSequence> encode_series(const MultichannelSeries& series,
                                         const codebook::Codebook& codebook,
                                         const EncodeConfig& config);

/// Concatenates one realization per token; token i uses seed + i.
std::vector<double> decode_sequence(const TokenSequence& sequence,
                                    const codebook::Codebook& codebook, std::size_t window,
                                    std::uint64_t seed, double sample_rate);

}  // namespace lipcot::pipeline
