#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lexvis/error.hpp"
#include "lexvis/evaluate.hpp"
#include "lexvis/format.hpp"
#include "lexvis/multimodal.hpp"
#include "lexvis/train.hpp"

#include <json.hpp>

namespace lexvis {

inline constexpr double kGridLearningRates[] = {0.1, 0.01, 0.005};
inline constexpr double kGridDropoutRates[] = {0.5, 0.25, 0.1};

struct GridCellSpec {
  std::string label;  // "grid-0".."grid-8", "preset-linear", "preset-mlp"
  ModelKind kind = ModelKind::linear;
  double learning_rate = 0.1;
  double dropout_rate = 0.0;
  std::size_t d_h = 0;  // 0 for linear cells
  std::uint64_t seed = 0;
  bool preset = false;
};

struct GridCellOutcome {
  GridCellSpec spec;
  bool ok = false;
  std::string error;  // set when training diverged
  double final_loss = 0.0;
  // benchmark name -> result, for the MAP and MAP-C tables respectively
  std::map<std::string, EvalResult> map_results;
  std::map<std::string, EvalResult> mapc_results;
};

// The replication sweep: 3 learning rates x 3 dropout rates, row-major over
// (learning_rate, dropout_rate), then the two named presets as marked rows.
// Cell seeds derive from the master seed by cell index, so any cell can be
// reproduced on its own.
inline std::vector<GridCellSpec> grid_cell_specs(ModelKind kind, const TrainConfig& base) {
  std::vector<GridCellSpec> specs;
  std::size_t index = 0;
  for (double lr : kGridLearningRates) {
    for (double dropout : kGridDropoutRates) {
      GridCellSpec spec;
      spec.label = "grid-" + std::to_string(index);
      spec.kind = kind;
      spec.learning_rate = lr;
      spec.dropout_rate = dropout;
      spec.d_h = kind == ModelKind::mlp ? base.d_h : 0;
      spec.seed = derive_seed(base.seed, index);
      specs.push_back(spec);
      ++index;
    }
  }
  GridCellSpec lin;
  lin.label = "preset-linear";
  lin.kind = ModelKind::linear;
  lin.learning_rate = 0.1;
  lin.dropout_rate = 0.1;
  lin.d_h = 0;
  lin.seed = derive_seed(base.seed, index++);
  lin.preset = true;
  specs.push_back(lin);
  GridCellSpec mlp;
  mlp.label = "preset-mlp";
  mlp.kind = ModelKind::mlp;
  mlp.learning_rate = 0.1;
  mlp.dropout_rate = 0.25;
  mlp.d_h = 300;
  mlp.seed = derive_seed(base.seed, index++);
  mlp.preset = true;
  specs.push_back(mlp);
  return specs;
}

// Trains one cell and evaluates its MAP and MAP-C tables on every benchmark.
// Training divergence is recorded in the outcome instead of propagating, so
// aggressive corners cannot abort the sweep.
inline GridCellOutcome run_grid_cell(const GridCellSpec& spec, const VectorTable& text,
                                     const VectorTable& visual,
                                     const std::vector<SimilarityBenchmark>& benchmarks,
                                     const TrainConfig& base) {
  GridCellOutcome outcome;
  outcome.spec = spec;
  TrainConfig config = base;
  config.learning_rate = spec.learning_rate;
  config.dropout_rate = spec.dropout_rate;
  config.seed = spec.seed;
  if (spec.kind == ModelKind::mlp) config.d_h = spec.d_h;
  std::set<std::string> visual_vocab;
  for (const auto& [word, vec] : visual.entries) visual_vocab.insert(word);
  try {
    auto [model, report] = train(text, visual, spec.kind, config);
    outcome.final_loss = report.final_loss;
    VectorTable map = build_map_table(model, text, config.normalize_text);
    MapcResult mapc = build_mapc_table(model, text, config.normalize_text);
    for (const SimilarityBenchmark& bench : benchmarks) {
      outcome.map_results.emplace(bench.name, evaluate(map, bench, visual_vocab));
      outcome.mapc_results.emplace(bench.name, evaluate(mapc.table, bench, visual_vocab));
    }
    outcome.ok = true;
  } catch (const DivergenceError& e) {
    outcome.error = e.what();
  }
  return outcome;
}

inline std::vector<GridCellOutcome> grid_search(
    const VectorTable& text, const VectorTable& visual, ModelKind kind,
    const std::vector<SimilarityBenchmark>& benchmarks, const TrainConfig& base) {
  std::vector<GridCellOutcome> outcomes;
  for (const GridCellSpec& spec : grid_cell_specs(kind, base)) {
    outcomes.push_back(run_grid_cell(spec, text, visual, benchmarks, base));
  }
  return outcomes;
}

namespace detail {

inline void grid_row(std::ostream& out, const GridCellOutcome& cell,
                     const std::string& table, const std::string& benchmark,
                     const EvalRow& row) {
  out << cell.spec.label << '\t' << model_kind_name(cell.spec.kind) << '\t'
      << format_double(cell.spec.learning_rate) << '\t'
      << format_double(cell.spec.dropout_rate) << '\t' << cell.spec.d_h << '\t'
      << cell.spec.seed << '\t' << (cell.spec.preset ? "preset" : "grid") << '\t'
      << (cell.ok ? "ok" : "diverged") << '\t' << table << '\t' << benchmark << '\t'
      << row.region << '\t'
      << (row.score.rho ? format_double(*row.score.rho) : "NA") << '\t'
      << row.score.n_pairs << '\t' << row.score.n_skipped_oov << '\t'
      << region_note(row) << '\n';
}

}  // namespace detail

inline void write_grid_tsv(const std::vector<GridCellOutcome>& outcomes,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open grid report for writing: " + path.string());
  out << "cell\tkind\tlearning_rate\tdropout_rate\td_h\tseed\trow_type\tstatus\t"
         "table\tbenchmark\tregion\trho\tn_pairs\tn_skipped_oov\tnote\n";
  for (const GridCellOutcome& cell : outcomes) {
    if (!cell.ok) {
      out << cell.spec.label << '\t' << model_kind_name(cell.spec.kind) << '\t'
          << format_double(cell.spec.learning_rate) << '\t'
          << format_double(cell.spec.dropout_rate) << '\t' << cell.spec.d_h << '\t'
          << cell.spec.seed << '\t' << (cell.spec.preset ? "preset" : "grid") << '\t'
          << "diverged\t\t\t\tNA\t0\t0\t" << cell.error << '\n';
      continue;
    }
    for (const auto& [bench, result] : cell.map_results) {
      for (const EvalRow& row : eval_rows("map", bench, result)) {
        detail::grid_row(out, cell, "map", bench, row);
      }
    }
    for (const auto& [bench, result] : cell.mapc_results) {
      for (const EvalRow& row : eval_rows("mapc", bench, result)) {
        detail::grid_row(out, cell, "mapc", bench, row);
      }
    }
  }
  if (!out.good()) throw DataError("failed writing grid report: " + path.string());
}

inline nlohmann::ordered_json grid_json(const std::vector<GridCellOutcome>& outcomes) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const GridCellOutcome& cell : outcomes) {
    nlohmann::ordered_json j;
    j["cell"] = cell.spec.label;
    j["kind"] = model_kind_name(cell.spec.kind);
    j["learning_rate"] = cell.spec.learning_rate;
    j["dropout_rate"] = cell.spec.dropout_rate;
    j["d_h"] = cell.spec.d_h;
    j["seed"] = cell.spec.seed;
    j["row_type"] = cell.spec.preset ? "preset" : "grid";
    j["status"] = cell.ok ? "ok" : "diverged";
    if (!cell.ok) {
      j["error"] = cell.error;
    } else {
      j["final_loss"] = cell.final_loss;
      j["map"] = nlohmann::ordered_json::object();
      j["mapc"] = nlohmann::ordered_json::object();
      for (const auto& [bench, result] : cell.map_results) {
        j["map"][bench] = eval_rows_json(eval_rows("map", bench, result));
      }
      for (const auto& [bench, result] : cell.mapc_results) {
        j["mapc"][bench] = eval_rows_json(eval_rows("mapc", bench, result));
      }
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace lexvis
