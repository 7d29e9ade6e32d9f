#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lipcot/codebook.hpp"
#include "lipcot/pipeline.hpp"

namespace lipcot::io {

/// Writes to a sibling temp file and renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string read_text(const std::filesystem::path& path);

/// Header row of channel names, then one row per sample. The sample rate
/// comes from `sample_rate` when given, otherwise from a sidecar
/// `<path>.json` holding {"sample_rate": Hz}.
pipeline::MultichannelSeries read_csv(const std::filesystem::path& path,
                                      std::optional<double> sample_rate = std::nullopt);

pipeline::MultichannelSeries parse_csv(const std::string& text, double sample_rate);

std::string format_csv(std::span<const std::string> names,
                       std::span<const std::vector<double>> columns);

nlohmann::json to_json(const codebook::Codebook& codebook);
codebook::Codebook codebook_from_json(const nlohmann::json& doc);

void save_codebook(const std::filesystem::path& path, const codebook::Codebook& codebook);
codebook::Codebook load_codebook(const std::filesystem::path& path);

/// One sequence per line, words separated by single spaces.
std::string format_tokens(std::span<const pipeline::TokenSequence> sequences);

/// Per-token (channel, window, token id) records.
nlohmann::json tokens_to_json(std::span<const pipeline::TokenSequence> sequences);

/// Parses a token file into per-channel-window sequences, one per non-empty
/// line. Unknown words fail with InvalidToken naming the word.
std::vector<pipeline::TokenSequence> parse_tokens(const std::string& text,
                                                  const codebook::Codebook& codebook);

std::string format_vocabulary(std::span<const std::string> words);

}  // namespace lipcot::io
