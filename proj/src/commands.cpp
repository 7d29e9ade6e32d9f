#include "lipcot/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "lipcot/codebook.hpp"
#include "lipcot/error.hpp"
#include "lipcot/io.hpp"
#include "lipcot/lpc.hpp"
#include "lipcot/parallel.hpp"
#include "lipcot/testkit.hpp"

namespace lipcot::cli {
namespace fs = std::filesystem;

namespace {

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::size_t resolve_channel(const pipeline::MultichannelSeries& series,
                            const std::string& channel) {
  if (series.channel_count() == 0) throw Error(ErrorCode::InvalidArgument, "CSV has no channels");
  if (channel.empty()) return 0;
  for (std::size_t c = 0; c < series.channel_names.size(); ++c)
    if (series.channel_names[c] == channel) return c;
  try {
    std::size_t used = 0;
    const unsigned long idx = std::stoul(channel, &used);
    if (used == channel.size() && idx < series.channel_count()) return idx;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, "no channel '" + channel + "'");
}

double require_rate(std::optional<double> flag, double stored, const char* what) {
  if (flag) return *flag;
  if (stored > 0.0) return stored;
  throw Error(ErrorCode::InvalidArgument, std::string("no ") + what +
                                              " given and none stored in the codebook");
}

}  // namespace

std::size_t seconds_to_samples(double seconds, double sample_rate) {
  if (!(seconds > 0.0) || !(sample_rate > 0.0))
    throw Error(ErrorCode::InvalidWindow, "window and hop must be positive durations");
  const double exact = seconds * sample_rate;
  // Absorb representation error (0.7 s * 10 Hz = 7.000000000000001) before flooring.
  return static_cast<std::size_t>(std::floor(exact + 1e-9 * std::max(1.0, exact)));
}

fs::path default_vocab_path(const fs::path& codebook_path) {
  fs::path out = codebook_path;
  out.replace_extension(".vocab");
  return out;
}

void cmd_train(const TrainArgs& args, std::ostream& log) {
  if (args.inputs.empty()) throw Error(ErrorCode::InvalidArgument, "no input CSV files");
  const RunConfig& cfg = args.config;
  latent::LatentMethod method{cfg.method, {}, cfg.cepstrum_terms, cfg.reduced};
  method = latent::resolve(method, cfg.order);
  const double hop_sec = cfg.hop_sec.value_or(cfg.window_sec);

  std::vector<latent::LatentVector> vectors;
  std::size_t skipped = 0;
  double common_rate = 0.0;
  for (std::size_t i = 0; i < args.inputs.size(); ++i) {
    const auto series = io::read_csv(args.inputs[i], cfg.sample_rate);
    if (i == 0) common_rate = series.sample_rate;
    else if (common_rate != series.sample_rate) common_rate = 0.0;

    pipeline::CorpusConfig corpus_cfg;
    corpus_cfg.order = cfg.order;
    corpus_cfg.lambda = cfg.lambda;
    corpus_cfg.window = seconds_to_samples(cfg.window_sec, series.sample_rate);
    corpus_cfg.hop = seconds_to_samples(hop_sec, series.sample_rate);
    corpus_cfg.method = method;
    const std::size_t windows =
        pipeline::window_count(series.length(), corpus_cfg.window, corpus_cfg.hop);
    if (windows == 0 || series.channel_count() == 0) {
      log << "warning: " << args.inputs[i].string() << " is shorter than one window\n";
      continue;
    }
    try {
      const auto series_set = std::span<const pipeline::MultichannelSeries>(&series, 1);
      auto corpus = pipeline::fit_corpus(series_set, corpus_cfg);
      skipped += corpus.skipped_degenerate;
      std::move(corpus.vectors.begin(), corpus.vectors.end(), std::back_inserter(vectors));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyCorpus) throw;
      skipped += windows * series.channel_count();
    }
  }
  if (vectors.empty()) throw Error(ErrorCode::EmptyCorpus, "no segment produced a latent vector");

  codebook::TrainConfig train_cfg;
  train_cfg.method = method;
  train_cfg.order = cfg.order;
  train_cfg.lambda = cfg.lambda;
  train_cfg.k = cfg.k;
  train_cfg.seed = cfg.seed;
  auto trained = codebook::train_codebook(vectors, train_cfg);
  trained.codebook.sample_rate = common_rate;
  trained.codebook.window_sec = cfg.window_sec;
  trained.codebook.hop_sec = hop_sec;

  io::save_codebook(args.out, trained.codebook);
  const fs::path vocab = args.vocab.value_or(default_vocab_path(args.out));
  io::atomic_write(vocab, io::format_vocabulary(codebook::export_vocabulary(trained.codebook)));

  const auto& report = trained.report;
  log << "vectors: " << vectors.size() << " (skipped degenerate: " << skipped << ")\n";
  log << "K: " << trained.codebook.k << "\n";
  log << "iterations: " << report.iterations << "\n";
  log << "inertia: " << report.inertia_history.back() << "\n";
  log << "counts:";
  for (std::size_t t = 0; t < report.counts.size(); ++t) log << " t" << t << "=" << report.counts[t];
  log << "\n";
}

void cmd_encode(const EncodeArgs& args, std::ostream& log) {
  const auto cb = io::load_codebook(args.codebook);
  const auto series = io::read_csv(args.input, args.sample_rate);

  pipeline::EncodeConfig cfg;
  const double window_sec = args.window_sec ? *args.window_sec
                                            : require_rate(std::nullopt, cb.window_sec,
                                                           "--window-sec");
  const double hop_sec = args.hop_sec ? *args.hop_sec
                                      : (cb.hop_sec > 0.0 ? cb.hop_sec : window_sec);
  cfg.window = seconds_to_samples(window_sec, series.sample_rate);
  cfg.hop = seconds_to_samples(hop_sec, series.sample_rate);
  cfg.layout = args.layout;
  cfg.order = args.order;
  cfg.lambda = args.lambda;
  cfg.method = args.method;

  const auto sequences = pipeline::encode_series(series, cb, cfg);
  io::atomic_write(args.out, io::format_tokens(sequences));
  if (args.json_out) io::atomic_write(*args.json_out, io::tokens_to_json(sequences).dump(2) + "\n");
  log << "sequences: " << sequences.size() << " (layout "
      << pipeline::to_string(args.layout) << ")\n";
}

void cmd_decode(const DecodeArgs& args, std::ostream& log) {
  const auto cb = io::load_codebook(args.codebook);
  const double rate = require_rate(args.sample_rate, cb.sample_rate, "--sample-rate");
  const double window_sec = args.window_sec ? *args.window_sec
                                            : require_rate(std::nullopt, cb.window_sec,
                                                           "--window-sec");
  const std::size_t window = seconds_to_samples(window_sec, rate);
  const auto sequences = io::parse_tokens(io::read_text(args.tokens), cb);

  std::vector<std::vector<double>> columns;
  std::vector<std::string> names;
  for (std::size_t s = 0; s < sequences.size(); ++s) {
    // Each line gets its own seed block so lines never share noise.
    const std::uint64_t seed = args.seed + s * (1ull << 32);
    columns.push_back(pipeline::decode_sequence(sequences[s], cb, window, seed, rate));
    names.push_back("seq" + std::to_string(s));
    if (columns.back().size() != columns.front().size())
      throw Error(ErrorCode::InvalidArgument, "token lines differ in length; cannot form a CSV");
  }
  io::atomic_write(args.out, io::format_csv(names, columns));
  fs::path sidecar = args.out;
  sidecar += ".json";
  io::atomic_write(sidecar, nlohmann::json{{"sample_rate", rate}}.dump() + "\n");
  log << "decoded " << sequences.size() << " sequence(s) of "
      << (columns.empty() ? 0 : columns.front().size()) << " samples\n";
}

void cmd_spectrum(const SpectrumArgs& args, std::ostream& out, std::ostream& log) {
  const auto series = io::read_csv(args.input, args.sample_rate);
  const auto& samples = series.channels[resolve_channel(series, args.channel)];
  if (!(args.step_hz > 0.0)) throw Error(ErrorCode::InvalidArgument, "--step must be > 0");

  const auto model = lpc::fit_burg_warped(samples, series.sample_rate, args.order, args.lambda);
  const double nyquist = 0.5 * series.sample_rate;
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double f = static_cast<double>(i) * args.step_hz;
    if (f > nyquist) break;
    grid.push_back(f);
  }
  const auto lpc_psd = lpc::power_spectrum(model, grid);
  const auto pgram = testkit::periodogram(samples, series.sample_rate);

  // Periodogram values are reported at the bin nearest each grid frequency.
  std::vector<double> pgram_on_grid(grid.size());
  const double bin_width = series.sample_rate / static_cast<double>(samples.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto bin = std::min(pgram.power.size() - 1,
                              static_cast<std::size_t>(std::llround(grid[i] / bin_width)));
    pgram_on_grid[i] = pgram.power[bin];
  }

  const std::vector<std::string> names{"frequency_hz", "lpc_psd", "periodogram_psd"};
  const std::vector<std::vector<double>> columns{grid, lpc_psd, pgram_on_grid};
  const std::string table = io::format_csv(names, columns);
  if (args.out) io::atomic_write(*args.out, table);
  else out << table;

  log << "lpc_peak_hz: " << grid[argmax(lpc_psd)] << "\n";
  log << "periodogram_peak_hz: " << pgram.freqs[argmax(pgram.power)] << "\n";
}

void cmd_synth(const SynthArgs& args, std::ostream& log) {
  if (args.samples < 1) throw Error(ErrorCode::InvalidArgument, "--samples must be >= 1");
  lpc::LpcModel model;
  if (args.codebook) {
    if (!args.token) throw Error(ErrorCode::InvalidArgument, "--codebook needs --token");
    const auto cb = io::load_codebook(*args.codebook);
    model = codebook::decode_token(cb, codebook::parse_token_word(cb, *args.token),
                                   args.sample_rate);
  } else {
    model.coeffs = args.coeffs;
    model.noise_power = args.noise_power;
    model.lambda = args.lambda;
    model.sample_rate = args.sample_rate;
  }
  const auto segment = lpc::synthesize(model, args.samples, args.seed);
  const std::vector<std::string> names{"x"};
  const std::vector<std::vector<double>> columns{segment.samples};
  io::atomic_write(args.out, io::format_csv(names, columns));
  fs::path sidecar = args.out;
  sidecar += ".json";
  io::atomic_write(sidecar, nlohmann::json{{"sample_rate", args.sample_rate}}.dump() + "\n");
  log << "wrote " << segment.samples.size() << " samples\n";
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"LPC-based time-series tokenizer"};
  app.require_subcommand(1);

  const std::vector<std::string> methods{"lpc", "cepstrum", "dsc"};
  const std::vector<std::string> layouts{"positions", "temporal"};

  TrainArgs train;
  std::string train_vocab;
  double train_hop = 0.0;
  double train_rate = 0.0;
  auto* train_cmd = app.add_subcommand("train", "Fit LPC models and train a token codebook");
  train_cmd->add_option("--inputs", train.inputs, "Input CSV files")->required()->expected(1, -1);
  train_cmd->add_option("--out", train.out, "Codebook JSON path")->required();
  train_cmd->add_option("--vocab", train_vocab, "Vocabulary path (default: <out>.vocab)");
  train_cmd->add_option("--order", train.config.order)->check(CLI::PositiveNumber);
  train_cmd->add_option("--lambda", train.config.lambda)->check(CLI::Range(-0.999999, 0.999999));
  train_cmd->add_option("--window-sec", train.config.window_sec);
  train_cmd->add_option("--hop-sec", train_hop);
  std::string train_method = "lpc";
  train_cmd->add_option("--method", train_method)->check(CLI::IsMember(methods));
  train_cmd->add_option("--cepstrum-terms", train.config.cepstrum_terms, "M (default 2L)");
  train_cmd->add_flag("--reduced", train.config.reduced, "Reduced dominant-spectral space");
  train_cmd->add_option("--k", train.config.k)->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", train.config.seed);
  train_cmd->add_option("--sample-rate", train_rate)->check(CLI::PositiveNumber);

  EncodeArgs encode;
  std::string encode_json;
  int encode_order = 0;
  double encode_lambda = 0.0, encode_window = 0.0, encode_hop = 0.0, encode_rate = 0.0;
  std::string encode_method, encode_layout = "positions";
  auto* encode_cmd = app.add_subcommand("encode", "Tokenize a CSV with a trained codebook");
  encode_cmd->add_option("--input", encode.input)->required();
  encode_cmd->add_option("--codebook", encode.codebook)->required();
  encode_cmd->add_option("--out", encode.out, "Token text file")->required();
  encode_cmd->add_option("--json", encode_json, "Optional per-token JSON");
  encode_cmd->add_option("--layout", encode_layout)->check(CLI::IsMember(layouts));
  auto* enc_order_opt = encode_cmd->add_option("--order", encode_order);
  auto* enc_lambda_opt = encode_cmd->add_option("--lambda", encode_lambda);
  auto* enc_method_opt =
      encode_cmd->add_option("--method", encode_method)->check(CLI::IsMember(methods));
  auto* enc_window_opt = encode_cmd->add_option("--window-sec", encode_window);
  auto* enc_hop_opt = encode_cmd->add_option("--hop-sec", encode_hop);
  auto* enc_rate_opt = encode_cmd->add_option("--sample-rate", encode_rate);

  DecodeArgs decode;
  double decode_window = 0.0, decode_rate = 0.0;
  auto* decode_cmd = app.add_subcommand("decode", "Synthesize a CSV from a token file");
  decode_cmd->add_option("--tokens", decode.tokens)->required();
  decode_cmd->add_option("--codebook", decode.codebook)->required();
  decode_cmd->add_option("--out", decode.out)->required();
  decode_cmd->add_option("--seed", decode.seed);
  auto* dec_window_opt = decode_cmd->add_option("--window-sec", decode_window);
  auto* dec_rate_opt = decode_cmd->add_option("--sample-rate", decode_rate);

  SpectrumArgs spectrum;
  std::string spectrum_out;
  double spectrum_rate = 0.0;
  auto* spectrum_cmd =
      app.add_subcommand("spectrum", "Tabulate LPC and periodogram power spectra");
  spectrum_cmd->add_option("--input", spectrum.input)->required();
  spectrum_cmd->add_option("--out", spectrum_out, "CSV table (default: stdout)");
  spectrum_cmd->add_option("--channel", spectrum.channel, "Channel name or index");
  spectrum_cmd->add_option("--order", spectrum.order)->check(CLI::PositiveNumber);
  spectrum_cmd->add_option("--lambda", spectrum.lambda);
  spectrum_cmd->add_option("--step", spectrum.step_hz, "Grid step in Hz");
  auto* spec_rate_opt = spectrum_cmd->add_option("--sample-rate", spectrum_rate);

  SynthArgs synth;
  std::string synth_codebook, synth_token;
  auto* synth_cmd = app.add_subcommand("synth", "Draw a realization of an LPC model");
  synth_cmd->add_option("--out", synth.out)->required();
  synth_cmd->add_option("--coeffs", synth.coeffs, "a_1,...,a_L")->delimiter(',');
  synth_cmd->add_option("--noise-power", synth.noise_power);
  synth_cmd->add_option("--lambda", synth.lambda);
  synth_cmd->add_option("--sample-rate", synth.sample_rate)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--codebook", synth_codebook);
  synth_cmd->add_option("--token", synth_token, "Token word, e.g. t3");
  synth_cmd->add_option("--samples", synth.samples)->required();
  synth_cmd->add_option("--seed", synth.seed);

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  parallel::configure_from_env();
  try {
    if (*train_cmd) {
      if (!train_vocab.empty()) train.vocab = train_vocab;
      if (train_hop > 0.0) train.config.hop_sec = train_hop;
      if (train_rate > 0.0) train.config.sample_rate = train_rate;
      train.config.method = latent::parse_method(train_method);
      cmd_train(train, out);
    } else if (*encode_cmd) {
      if (!encode_json.empty()) encode.json_out = encode_json;
      if (*enc_order_opt) encode.order = encode_order;
      if (*enc_lambda_opt) encode.lambda = encode_lambda;
      if (*enc_method_opt) encode.method = latent::parse_method(encode_method);
      encode.layout = pipeline::parse_layout(encode_layout);
      if (*enc_window_opt) encode.window_sec = encode_window;
      if (*enc_hop_opt) encode.hop_sec = encode_hop;
      if (*enc_rate_opt) encode.sample_rate = encode_rate;
      cmd_encode(encode, out);
    } else if (*decode_cmd) {
      if (*dec_window_opt) decode.window_sec = decode_window;
      if (*dec_rate_opt) decode.sample_rate = decode_rate;
      cmd_decode(decode, out);
    } else if (*spectrum_cmd) {
      if (!spectrum_out.empty()) spectrum.out = spectrum_out;
      if (*spec_rate_opt) spectrum.sample_rate = spectrum_rate;
      cmd_spectrum(spectrum, out, err);
    } else if (*synth_cmd) {
      if (!synth_codebook.empty()) synth.codebook = synth_codebook;
      if (!synth_token.empty()) synth.token = synth_token;
      cmd_synth(synth, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace lipcot::cli
