#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lipcot/latent.hpp"
#include "lipcot/pipeline.hpp"

namespace lipcot::cli {

struct RunConfig {
  int order = 16;
  double lambda = 0.2;
  double window_sec = 5.0;
  std::optional<double> hop_sec;  // defaults to window_sec
  latent::MethodTag method = latent::MethodTag::LpcCoeff;
  int cepstrum_terms = 0;
  bool reduced = false;
  std::size_t k = 64;
  std::uint64_t seed = 0;
  std::optional<double> sample_rate;
};

struct TrainArgs {
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path out;
  std::optional<std::filesystem::path> vocab;  // default: <out stem>.vocab next to out
  RunConfig config;
};

struct EncodeArgs {
  std::filesystem::path input;
  std::filesystem::path codebook;
  std::filesystem::path out;
  std::optional<std::filesystem::path> json_out;
  pipeline::Layout layout = pipeline::Layout::ChannelsAsPositions;
  std::optional<int> order;
  std::optional<double> lambda;
  std::optional<latent::MethodTag> method;
  std::optional<double> window_sec;
  std::optional<double> hop_sec;
  std::optional<double> sample_rate;
};

struct DecodeArgs {
  std::filesystem::path tokens;
  std::filesystem::path codebook;
  std::filesystem::path out;
  std::uint64_t seed = 0;
  std::optional<double> window_sec;
  std::optional<double> sample_rate;
};

struct SpectrumArgs {
  std::filesystem::path input;
  std::optional<std::filesystem::path> out;
  std::string channel;  // name or index; empty means the first channel
  int order = 16;
  double lambda = 0.2;
  double step_hz = 0.1;
  std::optional<double> sample_rate;
};

struct SynthArgs {
  std::filesystem::path out;
  std::vector<double> coeffs;
  double noise_power = 1.0;
  double lambda = 0.0;
  double sample_rate = 500.0;
  std::optional<std::filesystem::path> codebook;
  std::optional<std::string> token;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Converts seconds to samples, flooring fractional counts.
std::size_t seconds_to_samples(double seconds, double sample_rate);

/// Default vocabulary path: codebook.json -> codebook.vocab
std::filesystem::path default_vocab_path(const std::filesystem::path& codebook_path);

// Each command throws lipcot::Error on failure and reports progress on `log`.
void cmd_train(const TrainArgs& args, std::ostream& log);
void cmd_encode(const EncodeArgs& args, std::ostream& log);
void cmd_decode(const DecodeArgs& args, std::ostream& log);
void cmd_spectrum(const SpectrumArgs& args, std::ostream& out, std::ostream& log);
void cmd_synth(const SynthArgs& args, std::ostream& log);

/// Parses argv and dispatches; returns the process exit status (0 iff no
/// error was reported).
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace lipcot::cli
