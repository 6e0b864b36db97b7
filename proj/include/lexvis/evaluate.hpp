#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lexvis/benchmark.hpp"
#include "lexvis/error.hpp"
#include "lexvis/format.hpp"
#include "lexvis/spearman.hpp"
#include "lexvis/table.hpp"
#include "lexvis/vec.hpp"

#include <json.hpp>

namespace lexvis {

struct RegionScore {
  std::optional<double> rho;  // empty when undefined; see diagnostic
  std::size_t n_pairs = 0;    // usable (non-OOV) pairs in the region
  std::size_t n_skipped_oov = 0;
  std::string diagnostic;
};

struct EvalResult {
  RegionScore all;
  RegionScore vis;  // both words have a visual training vector
  RegionScore zs;   // complement: at least one word is zero-shot
};

// VIS pairs have both words in visual_vocab; everything else is ZS.
// The two regions partition the benchmark.
inline std::pair<std::vector<RatedPair>, std::vector<RatedPair>> split_regions(
    const SimilarityBenchmark& benchmark, const std::set<std::string>& visual_vocab) {
  std::vector<RatedPair> vis, zs;
  for (const RatedPair& pair : benchmark.pairs) {
    const bool covered = visual_vocab.count(pair.word1) > 0 &&
                         visual_vocab.count(pair.word2) > 0;
    (covered ? vis : zs).push_back(pair);
  }
  return {std::move(vis), std::move(zs)};
}

namespace detail {

inline void score_region(std::vector<double>& predictions, std::vector<double>& ratings,
                         RegionScore& score) {
  score.n_pairs = predictions.size();
  if (predictions.size() < 2) {
    score.diagnostic = "fewer than 2 usable pairs";
    return;
  }
  try {
    score.rho = spearman(predictions, ratings);
  } catch (const DegenerateStatsError& e) {
    score.diagnostic = e.what();
  }
}

}  // namespace detail

// Spearman rho between cosine predictions and human ratings, per region.
// Pairs with either word missing from the table are skipped and counted as
// OOV in their region; regions with fewer than 2 usable pairs (or constant
// inputs) report an empty rho with a diagnostic instead of failing.
inline EvalResult evaluate(const VectorTable& table, const SimilarityBenchmark& benchmark,
                           const std::set<std::string>& visual_vocab) {
  std::vector<double> pred_all, rate_all, pred_vis, rate_vis, pred_zs, rate_zs;
  EvalResult result;
  for (const RatedPair& pair : benchmark.pairs) {
    const bool covered = visual_vocab.count(pair.word1) > 0 &&
                         visual_vocab.count(pair.word2) > 0;
    auto it1 = table.entries.find(pair.word1);
    auto it2 = table.entries.find(pair.word2);
    if (it1 == table.entries.end() || it2 == table.entries.end()) {
      ++result.all.n_skipped_oov;
      ++(covered ? result.vis : result.zs).n_skipped_oov;
      continue;
    }
    const double prediction = cosine(it1->second, it2->second);
    pred_all.push_back(prediction);
    rate_all.push_back(pair.rating);
    if (covered) {
      pred_vis.push_back(prediction);
      rate_vis.push_back(pair.rating);
    } else {
      pred_zs.push_back(prediction);
      rate_zs.push_back(pair.rating);
    }
  }
  detail::score_region(pred_all, rate_all, result.all);
  detail::score_region(pred_vis, rate_vis, result.vis);
  detail::score_region(pred_zs, rate_zs, result.zs);
  return result;
}

// ---------------------------------------------------------------------------
// Report emission: one row per table x benchmark x region, as TSV and JSON.
// ---------------------------------------------------------------------------

struct EvalRow {
  std::string table;
  std::string benchmark;
  std::string region;  // ALL | VIS | ZS
  RegionScore score;
  std::string note;
};

// The whole-set wordsim353 evaluation is kept available but marked: its two
// subsets are the primary results and the union double-counts them.
inline std::string benchmark_note(const std::string& benchmark_name) {
  return benchmark_name == "wordsim353" ? "redundant-with-subsets" : "";
}

inline std::vector<EvalRow> eval_rows(const std::string& table_name,
                                      const std::string& benchmark_name,
                                      const EvalResult& result) {
  const std::string note = benchmark_note(benchmark_name);
  return {
      {table_name, benchmark_name, "ALL", result.all, note},
      {table_name, benchmark_name, "VIS", result.vis, note},
      {table_name, benchmark_name, "ZS", result.zs, note},
  };
}

namespace detail {

inline std::string region_note(const EvalRow& row) {
  if (!row.score.diagnostic.empty()) {
    return row.note.empty() ? row.score.diagnostic
                            : row.note + "; " + row.score.diagnostic;
  }
  return row.note;
}

}  // namespace detail

inline void write_eval_rows_tsv(const std::vector<EvalRow>& rows,
                                const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open report file for writing: " + path.string());
  out << "table\tbenchmark\tregion\trho\tn_pairs\tn_skipped_oov\tnote\n";
  for (const EvalRow& row : rows) {
    out << row.table << '\t' << row.benchmark << '\t' << row.region << '\t'
        << (row.score.rho ? format_double(*row.score.rho) : "NA") << '\t'
        << row.score.n_pairs << '\t' << row.score.n_skipped_oov << '\t'
        << detail::region_note(row) << '\n';
  }
  if (!out.good()) throw DataError("failed writing report file: " + path.string());
}

inline nlohmann::ordered_json eval_rows_json(const std::vector<EvalRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const EvalRow& row : rows) {
    nlohmann::ordered_json j;
    j["table"] = row.table;
    j["benchmark"] = row.benchmark;
    j["region"] = row.region;
    if (row.score.rho) {
      j["rho"] = *row.score.rho;
    } else {
      j["rho"] = nullptr;
    }
    j["n_pairs"] = row.score.n_pairs;
    j["n_skipped_oov"] = row.score.n_skipped_oov;
    const std::string note = detail::region_note(row);
    if (!note.empty()) j["note"] = note;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace lexvis
