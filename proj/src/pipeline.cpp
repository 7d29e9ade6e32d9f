#include "lipcot/pipeline.hpp"

#include <cmath>
#include <exception>
#include <optional>

#include "lipcot/error.hpp"

namespace lipcot::pipeline {
namespace {

void check_window(std::size_t window, std::size_t hop) {
  if (window < 1) throw Error(ErrorCode::InvalidWindow, "window must be >= 1 sample");
  if (hop < 1 || hop > window)
    throw Error(ErrorCode::InvalidWindow, "hop must lie in [1, window], got " +
                                              std::to_string(hop) + " for window " +
                                              std::to_string(window));
}

std::span<const double> window_view(const std::vector<double>& channel, std::size_t index,
                                    std::size_t window, std::size_t hop) {
  return std::span<const double>(channel).subspan(index * hop, window);
}

// Runs body(i) for i in [0, count), serially or under OpenMP. The first
// exception by index is rethrown so failures do not depend on scheduling.
template <typename Body>
void for_each_job(std::size_t count, bool parallel, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

void validate(const MultichannelSeries& series) {
  if (!(series.sample_rate > 0.0) || !std::isfinite(series.sample_rate))
    throw Error(ErrorCode::InvalidArgument, "sample rate must be positive");
  if (!series.channel_names.empty() && series.channel_names.size() != series.channels.size())
    throw Error(ErrorCode::InvalidArgument, "channel name count differs from channel count");
  const std::size_t n = series.length();
  for (const auto& ch : series.channels) {
    if (ch.size() != n) throw Error(ErrorCode::InvalidArgument, "channels differ in length");
    for (double x : ch)
      if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "non-finite sample");
  }
}

std::size_t window_count(std::size_t n, std::size_t window, std::size_t hop) {
  check_window(window, hop);
  return n < window ? 0 : (n - window) / hop + 1;
}

std::vector<lpc::Segment> segment_series(std::span<const double> samples, double sample_rate,
                                         std::size_t window, std::size_t hop) {
  const std::size_t count = window_count(samples.size(), window, hop);
  std::vector<lpc::Segment> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto view = samples.subspan(i * hop, window);
    out[i].samples.assign(view.begin(), view.end());
    out[i].sample_rate = sample_rate;
  }
  return out;
}

Corpus fit_corpus(std::span<const MultichannelSeries> series_set, const CorpusConfig& config) {
  check_window(config.window, config.hop);
  const latent::LatentMethod method = latent::resolve(config.method, config.order);

  std::vector<LatentOrigin> jobs;
  for (std::size_t s = 0; s < series_set.size(); ++s) {
    validate(series_set[s]);
    const std::size_t windows = window_count(series_set[s].length(), config.window, config.hop);
    for (std::size_t c = 0; c < series_set[s].channel_count(); ++c)
      for (std::size_t w = 0; w < windows; ++w) jobs.push_back({s, c, w});
  }

  std::vector<std::optional<latent::LatentVector>> slots(jobs.size());
  for_each_job(jobs.size(), config.parallel, [&](std::size_t i) {
    const auto& job = jobs[i];
    const auto& series = series_set[job.series];
    const auto view = window_view(series.channels[job.channel], job.window, config.window,
                                  config.hop);
    try {
      const auto model =
          lpc::fit_burg_warped(view, series.sample_rate, config.order, config.lambda);
      slots[i] = latent::features(model, method);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateInput) throw;
    }
  });

  Corpus corpus;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!slots[i]) {
      ++corpus.skipped_degenerate;
      continue;
    }
    corpus.vectors.push_back(std::move(*slots[i]));
    corpus.origins.push_back(jobs[i]);
  }
  if (corpus.vectors.empty())
    throw Error(ErrorCode::EmptyCorpus, "no segment produced a latent vector");
  return corpus;
}

std::string_view to_string(Layout layout) noexcept {
  return layout == Layout::ChannelsAsPositions ? "positions" : "temporal";
}

Layout parse_layout(std::string_view name) {
  if (name == "positions") return Layout::ChannelsAsPositions;
  if (name == "temporal") return Layout::PerChannelWindow;
  throw Error(ErrorCode::InvalidArgument, "unknown layout '" + std::string(name) + "'");
}

std::vector<TokenSequence> encode_series(const MultichannelSeries& series,
                                         const codebook::Codebook& codebook,
                                         const EncodeConfig& config) {
  if (config.order && *config.order != codebook.order)
    throw Error(ErrorCode::ConfigMismatch, "order " + std::to_string(*config.order) +
                                               " differs from codebook order " +
                                               std::to_string(codebook.order));
  if (config.lambda && *config.lambda != codebook.lambda)
    throw Error(ErrorCode::ConfigMismatch, "lambda " + std::to_string(*config.lambda) +
                                               " differs from codebook lambda " +
                                               std::to_string(codebook.lambda));
  if (config.method && *config.method != codebook.method.tag)
    throw Error(ErrorCode::ConfigMismatch,
                "method " + std::string(latent::to_string(*config.method)) +
                    " differs from codebook method " +
                    std::string(latent::to_string(codebook.method.tag)));
  validate(series);

  const std::size_t channels = series.channel_count();
  const std::size_t windows = window_count(series.length(), config.window, config.hop);
  std::vector<codebook::TokenId> grid(channels * windows);

  lpc::LpcModel floor_model;
  floor_model.coeffs.assign(static_cast<std::size_t>(codebook.order), 0.0);
  floor_model.noise_power = kDegenerateNoiseFloor;
  floor_model.lambda = codebook.lambda;
  floor_model.sample_rate = series.sample_rate;

  for_each_job(grid.size(), config.parallel, [&](std::size_t i) {
    const std::size_t c = i / windows;
    const std::size_t w = i % windows;
    const auto view = window_view(series.channels[c], w, config.window, config.hop);
    lpc::LpcModel model;
    try {
      model = lpc::fit_burg_warped(view, series.sample_rate, codebook.order, codebook.lambda);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateInput) throw;
      model = floor_model;
    }
    grid[i] = codebook::encode_vector(codebook, latent::features(model, codebook.method));
  });

  std::vector<TokenSequence> out;
  if (config.layout == Layout::ChannelsAsPositions) {
    out.resize(windows);
    for (std::size_t w = 0; w < windows; ++w) {
      out[w].layout = Layout::ChannelsAsPositions;
      for (std::size_t c = 0; c < channels; ++c) {
        out[w].tokens.push_back(grid[c * windows + w]);
        out[w].origins.push_back({c, w});
      }
    }
  } else {
    if (windows == 0) return out;
    out.resize(channels);
    for (std::size_t c = 0; c < channels; ++c) {
      out[c].layout = Layout::PerChannelWindow;
      for (std::size_t w = 0; w < windows; ++w) {
        out[c].tokens.push_back(grid[c * windows + w]);
        out[c].origins.push_back({c, w});
      }
    }
  }
  return out;
}

std::vector<double> decode_sequence(const TokenSequence& sequence,
                                    const codebook::Codebook& codebook, std::size_t window,
                                    std::uint64_t seed, double sample_rate) {
  if (sequence.layout != Layout::PerChannelWindow)
    throw Error(ErrorCode::LayoutUnsupported,
                "only per-channel-window sequences decode to a time series");
  if (window < 1) throw Error(ErrorCode::InvalidWindow, "window must be >= 1 sample");
  std::vector<double> out;
  out.reserve(window * sequence.tokens.size());
  for (std::size_t i = 0; i < sequence.tokens.size(); ++i) {
    const auto model = codebook::decode_token(codebook, sequence.tokens[i], sample_rate);
    const auto segment = lpc::synthesize(model, window, seed + i);
    out.insert(out.end(), segment.samples.begin(), segment.samples.end());
  }
  return out;
}

}  // namespace lipcot::pipeline
