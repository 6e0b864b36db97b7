// lexvis: file-based pipeline driving ingest -> train -> build -> eval,
// plus a grid sweep and a synthetic-data oracle generator. Every command is
// deterministic under --seed and writes a run manifest next to its outputs.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "lexvis/benchmark.hpp"
#include "lexvis/error.hpp"
#include "lexvis/evaluate.hpp"
#include "lexvis/features.hpp"
#include "lexvis/format.hpp"
#include "lexvis/grid.hpp"
#include "lexvis/manifest.hpp"
#include "lexvis/model.hpp"
#include "lexvis/multimodal.hpp"
#include "lexvis/synthetic.hpp"
#include "lexvis/table.hpp"
#include "lexvis/train.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommonOpts {
  std::string out;
  std::string config_path;
  std::uint64_t seed = 0;
  bool quiet = false;
};

// Shared flags every subcommand accepts. Required paths are checked after the
// config file is applied, so they may come from either source.
void add_common(CLI::App* sub, CommonOpts& common) {
  sub->add_option("--out", common.out, "output directory (created if missing)");
  sub->add_option("--seed", common.seed, "master seed, recorded in the manifest");
  sub->add_flag("--quiet", common.quiet, "suppress progress output");
  sub->add_option("--config", common.config_path,
                  "read `key = value` defaults from a file")
      ->check(CLI::ExistingFile);
}

void require_set(const std::string& value, const std::string& flag) {
  if (value.empty()) throw lexvis::ConfigError("missing required option " + flag);
}

void require_set(const std::vector<std::string>& values, const std::string& flag) {
  if (values.empty()) throw lexvis::ConfigError("missing required option " + flag);
}

std::string trim(std::string_view s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return std::string(s.substr(begin, end - begin));
}

// Line-oriented `key = value` config. Keys are long option names without the
// leading dashes; `#` starts a comment line. Values fill only options absent
// from the command line, which yields the CLI > config > preset > default
// precedence once presets are applied to still-unset options afterwards.
void apply_config_file(CLI::App* sub, const std::string& config_path) {
  if (config_path.empty()) return;
  std::ifstream in(config_path);
  if (!in) throw lexvis::ConfigError("cannot open config file: " + config_path);
  std::set<const CLI::Option*> filled;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(lexvis::detail::strip_cr(raw));
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    const std::string where = config_path + ":" + std::to_string(line_no);
    if (eq == std::string::npos) {
      throw lexvis::ConfigError(where + ": expected `key = value`");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw lexvis::ConfigError(where + ": expected `key = value`");
    }
    CLI::Option* op = sub->get_option_no_throw("--" + key);
    if (op == nullptr) {
      throw lexvis::ConfigError(where + ": unknown key '" + key + "' for subcommand " +
                                sub->get_name());
    }
    if (op->count() > 0 && filled.count(op) == 0) continue;  // command line wins
    op->add_result(value);
    op->run_callback();
    filled.insert(op);
  }
}

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw lexvis::ConfigError("cannot create output directory: " + dir.string());
  }
  return dir;
}

void note(const CommonOpts& common, const std::string& message) {
  if (!common.quiet) std::cout << message << '\n';
}

void write_json_file(const ordered_json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw lexvis::DataError("cannot open report for writing: " + path.string());
  out << j.dump(2) << '\n';
  if (!out.good()) throw lexvis::DataError("failed writing report: " + path.string());
}

// Words for region splitting: the first whitespace-separated token of every
// non-blank, non-# line, lowercased. Accepts both a plain word list and an
// embedding table (whose extra columns are ignored).
std::set<std::string> load_vocab(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw lexvis::DataError("cannot open vocab file: " + path.string());
  std::set<std::string> vocab;
  std::string raw;
  while (std::getline(in, raw)) {
    std::string_view line = lexvis::detail::strip_cr(raw);
    auto fields = lexvis::detail::split_ws(line);
    if (fields.empty() || fields[0].front() == '#') continue;
    vocab.insert(lexvis::to_lower(fields[0]));
  }
  if (vocab.empty()) throw lexvis::DataError(path.string() + ": empty vocab file");
  return vocab;
}

ordered_json train_config_json(lexvis::ModelKind kind, const lexvis::TrainConfig& cfg,
                               const std::string& preset) {
  ordered_json j;
  j["kind"] = lexvis::model_kind_name(kind);
  if (!preset.empty()) j["preset"] = preset;
  j["learning_rate"] = cfg.learning_rate;
  j["dropout_rate"] = cfg.dropout_rate;
  j["epochs"] = cfg.epochs;
  j["batch_size"] = cfg.batch_size;
  j["seed"] = cfg.seed;
  j["shuffle"] = cfg.shuffle;
  j["d_h"] = cfg.d_h;
  j["normalize_text"] = cfg.normalize_text;
  return j;
}

// ---------------------------------------------------------------- synth ----

struct SynthArgs {
  CommonOpts common;
  lexvis::SyntheticSpec spec;
};

void run_synth(const SynthArgs& args) {
  require_set(args.common.out, "--out");
  lexvis::SyntheticSpec spec = args.spec;
  spec.seed = args.common.seed;
  lexvis::SyntheticData data = lexvis::generate_synthetic(spec);
  const fs::path dir = prepare_out_dir(args.common.out);

  lexvis::write_text_embeddings(data.text, dir / "text.txt");
  lexvis::write_feature_records(data.records, dir / "features.tsv");
  lexvis::write_benchmark(data.benchmark, dir / "benchmark.tsv");
  lexvis::save_model(data.true_model, dir / "true_model.json");

  lexvis::Manifest m;
  m.command = "synth";
  m.config["seed"] = spec.seed;
  m.config["n_words"] = spec.n_words;
  m.config["d_l"] = spec.d_l;
  m.config["d_v"] = spec.d_v;
  m.config["noise_sigma"] = spec.noise_sigma;
  m.config["benchmark_size"] = spec.benchmark_size;
  m.config["alpha"] = spec.alpha;
  m.config["images_per_concept"] = spec.images_per_concept;
  m.config["visual_coverage"] = spec.visual_coverage;
  m.config["visual_scale"] = spec.visual_scale;
  m.add_output("text_embeddings", dir / "text.txt");
  m.add_output("feature_records", dir / "features.tsv");
  m.add_output("benchmark", dir / "benchmark.tsv");
  m.add_output("true_model", dir / "true_model.json");
  lexvis::write_manifest(m, dir / "synth.manifest.json");

  note(args.common, "synth: " + std::to_string(data.text.size()) + " words, " +
                        std::to_string(data.records.size()) + " feature records, " +
                        std::to_string(data.benchmark.pairs.size()) +
                        " rated pairs -> " + dir.string());
}

// --------------------------------------------------------------- ingest ----

struct IngestArgs {
  CommonOpts common;
  std::string features;
  lexvis::AggregationPolicy policy;
  bool paper_floor = false;
  CLI::Option* min_opt = nullptr;
};

void run_ingest(const IngestArgs& args) {
  require_set(args.common.out, "--out");
  require_set(args.features, "--features");
  lexvis::AggregationPolicy policy = args.policy;
  if (args.paper_floor && args.min_opt->count() == 0) {
    policy.min_images = lexvis::kReplicationMinImages;
  }
  auto records = lexvis::load_feature_records(args.features);
  auto [table, report] = lexvis::aggregate_mean(records, policy);
  const fs::path dir = prepare_out_dir(args.common.out);

  lexvis::write_text_embeddings(table, dir / "visual.txt");
  write_json_file(lexvis::aggregation_report_json(report), dir / "ingest_report.json");

  lexvis::Manifest m;
  m.command = "ingest";
  m.config["seed"] = args.common.seed;
  m.config["min_images"] = policy.min_images;
  m.config["max_images"] = policy.max_images;
  m.add_input("feature_records", args.features);
  m.add_output("visual_embeddings", dir / "visual.txt");
  m.add_output("report", dir / "ingest_report.json");
  lexvis::write_manifest(m, dir / "ingest.manifest.json");

  note(args.common, "ingest: kept " + std::to_string(report.concepts_kept) +
                        " concepts, dropped " + std::to_string(report.dropped.size()) +
                        " below floor -> " + dir.string());
}

// ---------------------------------------------------------------- train ----

struct TrainArgs {
  CommonOpts common;
  std::string text;
  std::string visual;
  std::string kind = "linear";
  std::string preset;
  lexvis::TrainConfig cfg;
  CLI::Option* kind_opt = nullptr;
  CLI::Option* lr_opt = nullptr;
  CLI::Option* dropout_opt = nullptr;
  CLI::Option* dh_opt = nullptr;
};

// Presets fill only options the user (command line or config file) left
// unset; an explicit --kind that contradicts the preset is a usage error.
void apply_preset(TrainArgs& args) {
  if (args.preset.empty()) return;
  const bool mlp = args.preset == "paper-mlp";
  const std::string preset_kind = mlp ? "mlp" : "linear";
  if (args.kind_opt->count() > 0 && args.kind != preset_kind) {
    throw lexvis::ConfigError("preset " + args.preset + " trains a " + preset_kind +
                      " model, but --kind " + args.kind + " was given");
  }
  args.kind = preset_kind;
  if (args.lr_opt->count() == 0) args.cfg.learning_rate = 0.1;
  if (args.dropout_opt->count() == 0) args.cfg.dropout_rate = mlp ? 0.25 : 0.1;
  if (mlp && args.dh_opt->count() == 0) args.cfg.d_h = 300;
}

void run_train(TrainArgs& args) {
  require_set(args.common.out, "--out");
  require_set(args.text, "--text");
  require_set(args.visual, "--visual");
  apply_preset(args);
  lexvis::TrainConfig cfg = args.cfg;
  cfg.seed = args.common.seed;
  const lexvis::ModelKind kind = lexvis::parse_model_kind(args.kind);
  auto text = lexvis::load_text_embeddings(args.text, 0, "text");
  auto visual = lexvis::load_text_embeddings(args.visual, 0, "visual");
  auto [model, report] = lexvis::train(text, visual, kind, cfg);
  const fs::path dir = prepare_out_dir(args.common.out);

  lexvis::save_model(model, dir / "model.json");
  ordered_json rep;
  rep["config"] = train_config_json(kind, cfg, args.preset);
  rep["examples_seen"] = report.examples_seen;
  rep["epochs_run"] = report.epoch_losses.size();
  rep["final_loss"] = report.final_loss;
  rep["epoch_losses"] = report.epoch_losses;
  write_json_file(rep, dir / "train_report.json");

  lexvis::Manifest m;
  m.command = "train";
  m.config = train_config_json(kind, cfg, args.preset);
  m.add_input("text_embeddings", args.text);
  m.add_input("visual_embeddings", args.visual);
  m.add_output("model", dir / "model.json");
  m.add_output("report", dir / "train_report.json");
  lexvis::write_manifest(m, dir / "train.manifest.json");

  note(args.common, "train: " + args.kind + " on " +
                        std::to_string(report.examples_seen) + " pairs, final loss " +
                        lexvis::format_double(report.final_loss) + " -> " +
                        dir.string());
}

// ---------------------------------------------------------------- build ----

struct BuildArgs {
  CommonOpts common;
  std::string model;
  std::string text;
  bool normalize_text = false;
  bool normalize_text_half = false;
};

void run_build(const BuildArgs& args) {
  require_set(args.common.out, "--out");
  require_set(args.model, "--model");
  require_set(args.text, "--text");
  lexvis::MapModel model = lexvis::load_model(args.model);
  auto text = lexvis::load_text_embeddings(args.text, 0, "text");
  lexvis::VectorTable map = lexvis::build_map_table(model, text, args.normalize_text);
  lexvis::MapcResult mapc = lexvis::build_mapc_table(model, text, args.normalize_text,
                                                     args.normalize_text_half);
  const fs::path dir = prepare_out_dir(args.common.out);

  lexvis::write_text_embeddings(map, dir / "map.txt");
  lexvis::write_text_embeddings(mapc.table, dir / "mapc.txt");
  ordered_json rep;
  rep["map"] = {{"name", map.name}, {"dim", map.dim}, {"words", map.size()}};
  rep["mapc"] = {{"name", mapc.table.name},
                 {"dim", mapc.table.dim},
                 {"words", mapc.table.size()},
                 {"degenerate_words", mapc.degenerate_words}};
  write_json_file(rep, dir / "build_report.json");

  lexvis::Manifest m;
  m.command = "build";
  m.config["seed"] = args.common.seed;
  m.config["normalize_text"] = args.normalize_text;
  m.config["normalize_text_half"] = args.normalize_text_half;
  m.add_input("model", args.model);
  m.add_input("text_embeddings", args.text);
  m.add_output("map", dir / "map.txt");
  m.add_output("mapc", dir / "mapc.txt");
  m.add_output("report", dir / "build_report.json");
  lexvis::write_manifest(m, dir / "build.manifest.json");

  note(args.common, "build: map dim " + std::to_string(map.dim) + ", mapc dim " +
                        std::to_string(mapc.table.dim) + " over " +
                        std::to_string(map.size()) + " words -> " + dir.string());
}

// ----------------------------------------------------------------- eval ----

struct EvalArgs {
  CommonOpts common;
  std::vector<std::string> tables;
  std::vector<std::string> benchmarks;
  std::string vocab;
};

void run_eval(const EvalArgs& args) {
  require_set(args.common.out, "--out");
  require_set(args.tables, "--table");
  require_set(args.benchmarks, "--benchmark");
  require_set(args.vocab, "--vocab");
  const std::set<std::string> vocab = load_vocab(args.vocab);
  std::vector<lexvis::VectorTable> tables;
  for (const std::string& path : args.tables) {
    tables.push_back(lexvis::load_text_embeddings(path));
  }
  std::vector<lexvis::SimilarityBenchmark> benchmarks;
  for (const std::string& path : args.benchmarks) {
    benchmarks.push_back(lexvis::load_benchmark(path));
  }

  std::vector<lexvis::EvalRow> rows;
  for (const lexvis::VectorTable& table : tables) {
    for (const lexvis::SimilarityBenchmark& bench : benchmarks) {
      lexvis::EvalResult result = lexvis::evaluate(table, bench, vocab);
      for (lexvis::EvalRow& row : lexvis::eval_rows(table.name, bench.name, result)) {
        rows.push_back(std::move(row));
      }
    }
  }
  const fs::path dir = prepare_out_dir(args.common.out);
  lexvis::write_eval_rows_tsv(rows, dir / "eval.tsv");
  write_json_file(lexvis::eval_rows_json(rows), dir / "eval.json");

  lexvis::Manifest m;
  m.command = "eval";
  m.config["seed"] = args.common.seed;
  for (std::size_t i = 0; i < args.tables.size(); ++i) {
    m.add_input("table_" + std::to_string(i), args.tables[i]);
  }
  for (std::size_t i = 0; i < args.benchmarks.size(); ++i) {
    m.add_input("benchmark_" + std::to_string(i), args.benchmarks[i]);
  }
  m.add_input("vocab", args.vocab);
  m.add_output("eval_tsv", dir / "eval.tsv");
  m.add_output("eval_json", dir / "eval.json");
  lexvis::write_manifest(m, dir / "eval.manifest.json");

  note(args.common, "eval: " + std::to_string(tables.size()) + " tables x " +
                        std::to_string(benchmarks.size()) + " benchmarks -> " +
                        dir.string());
}

// ----------------------------------------------------------------- grid ----

struct GridArgs {
  CommonOpts common;
  std::string text;
  std::string visual;
  std::vector<std::string> benchmarks;
  std::string kind = "linear";
  lexvis::TrainConfig cfg;
};

void run_grid(const GridArgs& args) {
  require_set(args.common.out, "--out");
  require_set(args.text, "--text");
  require_set(args.visual, "--visual");
  require_set(args.benchmarks, "--benchmark");
  lexvis::TrainConfig base = args.cfg;
  base.seed = args.common.seed;
  const lexvis::ModelKind kind = lexvis::parse_model_kind(args.kind);
  auto text = lexvis::load_text_embeddings(args.text, 0, "text");
  auto visual = lexvis::load_text_embeddings(args.visual, 0, "visual");
  std::vector<lexvis::SimilarityBenchmark> benchmarks;
  for (const std::string& path : args.benchmarks) {
    benchmarks.push_back(lexvis::load_benchmark(path));
  }
  std::vector<lexvis::GridCellOutcome> outcomes =
      lexvis::grid_search(text, visual, kind, benchmarks, base);
  const fs::path dir = prepare_out_dir(args.common.out);

  lexvis::write_grid_tsv(outcomes, dir / "grid.tsv");
  write_json_file(lexvis::grid_json(outcomes), dir / "grid.json");

  lexvis::Manifest m;
  m.command = "grid";
  m.config["kind"] = args.kind;
  m.config["epochs"] = base.epochs;
  m.config["batch_size"] = base.batch_size;
  m.config["seed"] = base.seed;
  m.config["shuffle"] = base.shuffle;
  m.config["d_h"] = base.d_h;
  m.config["normalize_text"] = base.normalize_text;
  m.add_input("text_embeddings", args.text);
  m.add_input("visual_embeddings", args.visual);
  for (std::size_t i = 0; i < args.benchmarks.size(); ++i) {
    m.add_input("benchmark_" + std::to_string(i), args.benchmarks[i]);
  }
  m.add_output("grid_tsv", dir / "grid.tsv");
  m.add_output("grid_json", dir / "grid.json");
  lexvis::write_manifest(m, dir / "grid.manifest.json");

  std::size_t diverged = 0;
  for (const auto& cell : outcomes) diverged += cell.ok ? 0 : 1;
  note(args.common, "grid: " + std::to_string(outcomes.size()) + " cells, " +
                        std::to_string(diverged) + " diverged -> " + dir.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"language-to-vision mapping pipeline"};
  app.require_subcommand(1);

  SynthArgs synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "generate a seeded synthetic world with ground truth");
  add_common(synth_cmd, synth.common);
  synth_cmd->add_option("--n-words", synth.spec.n_words, "vocabulary size");
  synth_cmd->add_option("--d-l", synth.spec.d_l, "text dimensionality");
  synth_cmd->add_option("--d-v", synth.spec.d_v, "visual dimensionality");
  synth_cmd->add_option("--noise-sigma", synth.spec.noise_sigma,
                        "per-component image noise std");
  synth_cmd->add_option("--benchmark-size", synth.spec.benchmark_size,
                        "number of rated pairs");
  synth_cmd->add_option("--alpha", synth.spec.alpha,
                        "text-vs-visual mix in synthetic ratings");
  synth_cmd->add_option("--images-per-concept", synth.spec.images_per_concept,
                        "feature records per covered word");
  synth_cmd->add_option("--visual-coverage", synth.spec.visual_coverage,
                        "leading fraction of words that get images");
  synth_cmd->add_option("--visual-scale", synth.spec.visual_scale,
                        "per-component std of the true visual signal");

  IngestArgs ingest;
  CLI::App* ingest_cmd =
      app.add_subcommand("ingest", "aggregate per-image features into a visual table");
  add_common(ingest_cmd, ingest.common);
  ingest_cmd->add_option("--features", ingest.features, "feature records TSV")
      ->check(CLI::ExistingFile);
  ingest.min_opt = ingest_cmd->add_option("--min-images", ingest.policy.min_images,
                                          "drop concepts with fewer images");
  ingest_cmd->add_option("--max-images", ingest.policy.max_images,
                         "cap images per concept");
  ingest_cmd->add_flag("--paper-floor", ingest.paper_floor,
                       "use the strict 51-image floor of the paper-* presets");

  TrainArgs train;
  CLI::App* train_cmd =
      app.add_subcommand("train", "fit the language-to-vision mapping");
  add_common(train_cmd, train.common);
  train_cmd->add_option("--text", train.text, "text embeddings file")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--visual", train.visual, "visual embeddings file")
      ->check(CLI::ExistingFile);
  train.kind_opt = train_cmd->add_option("--kind", train.kind, "model kind")
                       ->check(CLI::IsMember({"linear", "mlp"}));
  train_cmd->add_option("--preset", train.preset, "named configuration")
      ->check(CLI::IsMember({"paper-linear", "paper-mlp"}));
  train.lr_opt =
      train_cmd->add_option("--learning-rate", train.cfg.learning_rate, "SGD step size");
  train.dropout_opt =
      train_cmd->add_option("--dropout", train.cfg.dropout_rate, "input dropout rate");
  train_cmd->add_option("--epochs", train.cfg.epochs, "training epochs");
  train_cmd->add_option("--batch-size", train.cfg.batch_size, "mini-batch size");
  train.dh_opt = train_cmd->add_option("--d-h", train.cfg.d_h, "mlp hidden width");
  train_cmd->add_flag("--shuffle,!--no-shuffle", train.cfg.shuffle,
                      "shuffle pairs every epoch (--no-shuffle disables)");
  train_cmd->add_flag("--normalize-text", train.cfg.normalize_text,
                      "l2-normalize text vectors before mapping");

  BuildArgs build;
  CLI::App* build_cmd =
      app.add_subcommand("build", "emit MAP and MAP-C tables from a trained model");
  add_common(build_cmd, build.common);
  build_cmd->add_option("--model", build.model, "model JSON file")
      ->check(CLI::ExistingFile);
  build_cmd->add_option("--text", build.text, "text embeddings file")
      ->check(CLI::ExistingFile);
  build_cmd->add_flag("--normalize-text", build.normalize_text,
                      "l2-normalize text vectors before mapping");
  build_cmd->add_flag("--normalize-text-half", build.normalize_text_half,
                      "also l2-normalize the text half of MAP-C");

  EvalArgs eval;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "score tables against similarity benchmarks");
  add_common(eval_cmd, eval.common);
  eval_cmd->add_option("--table", eval.tables, "embedding table file (repeatable)")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--benchmark", eval.benchmarks, "benchmark file (repeatable)")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--vocab", eval.vocab, "visual vocabulary (word list or table)")
      ->check(CLI::ExistingFile);

  GridArgs grid;
  CLI::App* grid_cmd =
      app.add_subcommand("grid", "sweep learning rate x dropout plus the presets");
  add_common(grid_cmd, grid.common);
  grid_cmd->add_option("--text", grid.text, "text embeddings file")
      ->check(CLI::ExistingFile);
  grid_cmd->add_option("--visual", grid.visual, "visual embeddings file")
      ->check(CLI::ExistingFile);
  grid_cmd->add_option("--benchmark", grid.benchmarks, "benchmark file (repeatable)")
      ->check(CLI::ExistingFile);
  grid_cmd->add_option("--kind", grid.kind, "model kind for the 9 grid cells")
      ->check(CLI::IsMember({"linear", "mlp"}));
  grid_cmd->add_option("--epochs", grid.cfg.epochs, "training epochs per cell");
  grid_cmd->add_option("--batch-size", grid.cfg.batch_size, "mini-batch size");
  grid_cmd->add_option("--d-h", grid.cfg.d_h, "mlp hidden width for grid cells");
  grid_cmd->add_flag("--shuffle,!--no-shuffle", grid.cfg.shuffle,
                     "shuffle pairs every epoch (--no-shuffle disables)");
  grid_cmd->add_flag("--normalize-text", grid.cfg.normalize_text,
                     "l2-normalize text vectors before mapping");

  try {
    app.parse(argc, argv);
    if (*synth_cmd) apply_config_file(synth_cmd, synth.common.config_path);
    if (*ingest_cmd) apply_config_file(ingest_cmd, ingest.common.config_path);
    if (*train_cmd) apply_config_file(train_cmd, train.common.config_path);
    if (*build_cmd) apply_config_file(build_cmd, build.common.config_path);
    if (*eval_cmd) apply_config_file(eval_cmd, eval.common.config_path);
    if (*grid_cmd) apply_config_file(grid_cmd, grid.common.config_path);
    if (*synth_cmd) run_synth(synth);
    if (*ingest_cmd) run_ingest(ingest);
    if (*train_cmd) run_train(train);
    if (*build_cmd) run_build(build);
    if (*eval_cmd) run_eval(eval);
    if (*grid_cmd) run_grid(grid);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const lexvis::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const lexvis::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const lexvis::DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
