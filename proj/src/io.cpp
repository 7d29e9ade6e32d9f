#include "lipcot/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "lipcot/error.hpp"

namespace lipcot::io {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = field.data() + field.size();
  if (!field.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || field.empty())
    throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": '" +
                                      std::string(field) + "' is not a number");
  return value;
}

void append_number(std::string& out, double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

template <typename T>
T require(const json& doc, const char* key) {
  if (!doc.contains(key))
    throw Error(ErrorCode::Parse, std::string("codebook is missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("codebook field '") + key + "': " + e.what());
  }
}

}  // namespace

void atomic_write(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::Io, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

pipeline::MultichannelSeries parse_csv(const std::string& text, double sample_rate) {
  pipeline::MultichannelSeries series;
  series.sample_rate = sample_rate;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (!have_header) {
      for (auto f : fields) series.channel_names.emplace_back(f);
      series.channels.resize(fields.size());
      have_header = true;
      continue;
    }
    if (fields.size() != series.channels.size())
      throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + " has " +
                                        std::to_string(fields.size()) + " fields, expected " +
                                        std::to_string(series.channels.size()));
    for (std::size_t c = 0; c < fields.size(); ++c)
      series.channels[c].push_back(parse_number(fields[c], line_no));
  }
  if (!have_header) throw Error(ErrorCode::Parse, "CSV has no header row");
  pipeline::validate(series);
  return series;
}

pipeline::MultichannelSeries read_csv(const fs::path& path, std::optional<double> sample_rate) {
  if (!sample_rate) {
    fs::path sidecar = path;
    sidecar += ".json";
    if (!fs::exists(sidecar))
      throw Error(ErrorCode::InvalidArgument,
                  "no sample rate for " + path.string() + " (pass --sample-rate or provide " +
                      sidecar.string() + ")");
    try {
      sample_rate = json::parse(read_text(sidecar)).at("sample_rate").get<double>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Parse, sidecar.string() + ": " + e.what());
    }
  }
  return parse_csv(read_text(path), *sample_rate);
}

std::string format_csv(std::span<const std::string> names,
                       std::span<const std::vector<double>> columns) {
  if (names.size() != columns.size())
    throw Error(ErrorCode::InvalidArgument, "one name per column required");
  std::string out;
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (c) out += ',';
    out += names[c];
  }
  out += '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& col : columns)
    if (col.size() != rows) throw Error(ErrorCode::InvalidArgument, "columns differ in length");
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      append_number(out, columns[c][r]);
    }
    out += '\n';
  }
  return out;
}

json to_json(const codebook::Codebook& cb) {
  json method = {{"tag", std::string(latent::to_string(cb.method.tag))}};
  switch (cb.method.tag) {
    case latent::MethodTag::LpcCoeff: method["weights"] = cb.method.weights; break;
    case latent::MethodTag::Cepstrum: method["M"] = cb.method.cepstrum_terms; break;
    case latent::MethodTag::DominantSpectral: method["reduced"] = cb.method.reduced; break;
  }
  return json{
      {"version", cb.version},
      {"method", method},
      {"order", cb.order},
      {"lambda", cb.lambda},
      {"K", cb.k},
      {"dim", cb.dim},
      {"norm_stats", {{"mean", cb.norm_stats.mean}, {"std", cb.norm_stats.std}}},
      {"centroids", cb.centroids},
      {"seed", cb.seed},
      {"sample_rate", cb.sample_rate},
      {"window_sec", cb.window_sec},
      {"hop_sec", cb.hop_sec},
  };
}

codebook::Codebook codebook_from_json(const json& doc) {
  codebook::Codebook cb;
  cb.version = require<std::string>(doc, "version");
  if (cb.version != codebook::kFormatVersion)
    throw Error(ErrorCode::Parse, "unsupported codebook version '" + cb.version + "'");
  const json& method = doc.contains("method") ? doc.at("method") : json();
  cb.method.tag = latent::parse_method(require<std::string>(method, "tag"));
  if (method.contains("weights")) cb.method.weights = require<std::vector<double>>(method, "weights");
  if (method.contains("M")) cb.method.cepstrum_terms = require<int>(method, "M");
  if (method.contains("reduced")) cb.method.reduced = require<bool>(method, "reduced");
  cb.order = require<int>(doc, "order");
  cb.lambda = require<double>(doc, "lambda");
  cb.k = require<std::size_t>(doc, "K");
  const json& stats = doc.contains("norm_stats") ? doc.at("norm_stats") : json();
  cb.norm_stats.mean = require<std::vector<double>>(stats, "mean");
  cb.norm_stats.std = require<std::vector<double>>(stats, "std");
  cb.centroids = require<std::vector<double>>(doc, "centroids");
  cb.seed = require<std::uint64_t>(doc, "seed");
  if (doc.contains("sample_rate")) cb.sample_rate = require<double>(doc, "sample_rate");
  if (doc.contains("window_sec")) cb.window_sec = require<double>(doc, "window_sec");
  if (doc.contains("hop_sec")) cb.hop_sec = require<double>(doc, "hop_sec");

  cb.method = latent::resolve(cb.method, cb.order);
  cb.dim = latent::dimension(cb.method, cb.order);
  if (doc.contains("dim") && require<std::size_t>(doc, "dim") != cb.dim)
    throw Error(ErrorCode::DimensionMismatch, "codebook dim disagrees with its method");
  if (cb.k < 1) throw Error(ErrorCode::Parse, "codebook K must be >= 1");
  if (cb.centroids.size() != cb.k * cb.dim || cb.norm_stats.mean.size() != cb.dim ||
      cb.norm_stats.std.size() != cb.dim)
    throw Error(ErrorCode::DimensionMismatch, "codebook arrays do not match K x dim");
  for (double s : cb.norm_stats.std)
    if (!(s > 0.0)) throw Error(ErrorCode::Parse, "normalization std must be positive");
  return cb;
}

void save_codebook(const fs::path& path, const codebook::Codebook& codebook) {
  atomic_write(path, to_json(codebook).dump(2) + "\n");
}

codebook::Codebook load_codebook(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
  return codebook_from_json(doc);
}

std::string format_tokens(std::span<const pipeline::TokenSequence> sequences) {
  std::string out;
  for (const auto& seq : sequences) {
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
      if (i) out += ' ';
      out += codebook::token_word(seq.tokens[i]);
    }
    out += '\n';
  }
  return out;
}

json tokens_to_json(std::span<const pipeline::TokenSequence> sequences) {
  json out = json::array();
  for (std::size_t s = 0; s < sequences.size(); ++s) {
    const auto& seq = sequences[s];
    json tokens = json::array();
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
      json entry = {{"token", seq.tokens[i].value}};
      if (i < seq.origins.size()) {
        entry["channel"] = seq.origins[i].channel;
        entry["window"] = seq.origins[i].window;
      }
      tokens.push_back(std::move(entry));
    }
    out.push_back({{"sequence", s},
                   {"layout", std::string(pipeline::to_string(seq.layout))},
                   {"tokens", std::move(tokens)}});
  }
  return out;
}

std::vector<pipeline::TokenSequence> parse_tokens(const std::string& text,
                                                  const codebook::Codebook& codebook) {
  std::vector<pipeline::TokenSequence> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    pipeline::TokenSequence seq;
    seq.layout = pipeline::Layout::PerChannelWindow;
    std::string word;
    while (words >> word) {
      seq.origins.push_back({out.size(), seq.tokens.size()});
      seq.tokens.push_back(codebook::parse_token_word(codebook, word));
    }
    if (!seq.tokens.empty()) out.push_back(std::move(seq));
  }
  return out;
}

std::string format_vocabulary(std::span<const std::string> words) {
  std::string out;
  for (const auto& w : words) {
    out += w;
    out += '\n';
  }
  return out;
}

}  // namespace lipcot::io
