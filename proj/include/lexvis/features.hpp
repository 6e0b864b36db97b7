#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexvis/error.hpp"
#include "lexvis/format.hpp"
#include "lexvis/table.hpp"
#include "lexvis/vec.hpp"

#include <json.hpp>

namespace lexvis {

// One image's raw feature vector, tagged with its concept label.
struct FeatureRecord {
  std::string word;
  std::string image_id;
  Vec features;
};

struct AggregationPolicy {
  std::size_t min_images = 50;
  std::size_t max_images = 500;
};

// Strict floor used by replication runs: a concept must have at least 51 images.
inline constexpr std::size_t kReplicationMinImages = 51;

struct AggregationReport {
  std::size_t concepts_kept = 0;
  std::map<std::string, std::size_t> dropped;  // concept -> record count
  std::map<std::string, std::size_t> capped;   // concept -> original count
  std::size_t d_v = 0;
};

inline nlohmann::ordered_json aggregation_report_json(const AggregationReport& r) {
  nlohmann::ordered_json j;
  j["concepts_kept"] = r.concepts_kept;
  j["concepts_dropped"] = nlohmann::ordered_json::object();
  for (const auto& [w, n] : r.dropped) j["concepts_dropped"][w] = n;
  j["concepts_capped"] = nlohmann::ordered_json::object();
  for (const auto& [w, n] : r.capped) j["concepts_capped"][w] = n;
  j["d_v"] = r.d_v;
  return j;
}

// Feature TSV: concept<TAB>image_id<TAB>f1,f2,...,fd per line.
// Concepts are lowercased; d_v is fixed by the first record.
inline std::vector<FeatureRecord> load_feature_records(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open feature file: " + path.string());

  std::vector<FeatureRecord> records;
  std::string raw;
  std::size_t line_no = 0;
  std::size_t d_v = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::strip_cr(raw);
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);

    std::size_t tab1 = line.find('\t');
    std::size_t tab2 = tab1 == std::string_view::npos
                           ? std::string_view::npos
                           : line.find('\t', tab1 + 1);
    if (tab2 == std::string_view::npos || line.find('\t', tab2 + 1) != std::string_view::npos) {
      throw DataError(where + ": expected concept<TAB>image_id<TAB>features");
    }
    FeatureRecord rec;
    rec.word = to_lower(line.substr(0, tab1));
    rec.image_id = std::string(line.substr(tab1 + 1, tab2 - tab1 - 1));
    if (rec.word.empty() || rec.image_id.empty()) {
      throw DataError(where + ": empty concept or image_id");
    }

    std::string_view feats = line.substr(tab2 + 1);
    std::size_t pos = 0;
    while (pos <= feats.size()) {
      std::size_t comma = feats.find(',', pos);
      std::string_view field = feats.substr(
          pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
      rec.features.push_back(parse_finite_double(field, where));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (d_v == 0) {
      d_v = rec.features.size();
    } else if (rec.features.size() != d_v) {
      throw DataError(where + ": feature dimension mismatch (" +
                      std::to_string(rec.features.size()) + " vs " +
                      std::to_string(d_v) + ")");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

inline void write_feature_records(const std::vector<FeatureRecord>& records,
                                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write feature file: " + path.string());
  for (const FeatureRecord& rec : records) {
    out << rec.word << '\t' << rec.image_id << '\t';
    for (std::size_t i = 0; i < rec.features.size(); ++i) {
      if (i) out << ',';
      out << format_double(rec.features[i]);
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

// Per-concept arithmetic mean of image features. Concepts under the floor are
// dropped and reported; concepts over the cap keep the max_images
// lexicographically-first image_ids. Summation runs in id-sorted order within
// each concept, so the result is bitwise permutation-invariant.
inline std::pair<VectorTable, AggregationReport> aggregate_mean(
    const std::vector<FeatureRecord>& records, const AggregationPolicy& policy) {
  if (policy.min_images > policy.max_images) {
    throw ConfigError("aggregation policy: min_images > max_images");
  }
  if (policy.min_images == 0) {
    throw ConfigError("aggregation policy: min_images must be positive");
  }

  VectorTable table;
  table.name = "visual";
  AggregationReport report;
  if (records.empty()) return {table, report};

  report.d_v = records.front().features.size();
  std::map<std::string, std::vector<const FeatureRecord*>> by_concept;
  for (const auto& rec : records) {
    if (rec.features.size() != report.d_v) {
      throw DataError("aggregate_mean: feature dimension mismatch for concept '" +
                      rec.word + "'");
    }
    by_concept[rec.word].push_back(&rec);
  }

  table.dim = report.d_v;
  for (auto& [word, recs] : by_concept) {
    if (recs.size() < policy.min_images) {
      report.dropped[word] = recs.size();
      continue;
    }
    std::sort(recs.begin(), recs.end(), [](const FeatureRecord* a, const FeatureRecord* b) {
      if (a->image_id != b->image_id) return a->image_id < b->image_id;
      return a->features < b->features;
    });
    std::size_t take = recs.size();
    if (take > policy.max_images) {
      report.capped[word] = recs.size();
      take = policy.max_images;
    }
    Vec mean(report.d_v, 0.0);
    for (std::size_t k = 0; k < take; ++k) {
      for (std::size_t i = 0; i < report.d_v; ++i) mean[i] += recs[k]->features[i];
    }
    for (double& x : mean) x /= static_cast<double>(take);
    table.entries.emplace(word, std::move(mean));
    ++report.concepts_kept;
  }
  return {table, report};
}

}  // namespace lexvis
