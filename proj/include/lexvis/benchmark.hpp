#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexvis/error.hpp"
#include "lexvis/format.hpp"
#include "lexvis/table.hpp"

namespace lexvis {

struct RatedPair {
  std::string word1;
  std::string word2;
  double rating = 0.0;
};

struct SimilarityBenchmark {
  std::string name;
  std::vector<RatedPair> pairs;
};

enum class BenchmarkFormat { auto_detect, tsv, whitespace };

// Similarity benchmark file: word1 word2 rating, one pair per line, tab- or
// space-delimited; '#' lines are comments. Words are case-normalized and a
// pair that appears twice (in either order) is rejected. With auto_detect the
// first data line decides: a tab makes the whole file TSV, otherwise the
// whitespace adapter applies.
inline SimilarityBenchmark load_benchmark(const std::filesystem::path& path,
                                          BenchmarkFormat format = BenchmarkFormat::auto_detect,
                                          const std::string& name = "") {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open benchmark file: " + path.string());
  SimilarityBenchmark bench;
  bench.name = name.empty() ? path.stem().string() : name;
  std::set<std::pair<std::string, std::string>> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::strip_cr(raw);
    if (line.empty() || line[0] == '#') continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (format == BenchmarkFormat::auto_detect) {
      format = line.find('\t') != std::string_view::npos ? BenchmarkFormat::tsv
                                                         : BenchmarkFormat::whitespace;
    }
    std::vector<std::string_view> fields;
    if (format == BenchmarkFormat::tsv) {
      std::size_t start = 0;
      while (true) {
        const std::size_t tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
      }
    } else {
      fields = detail::split_ws(line);
    }
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      throw DataError(where + ": expected word1, word2, rating");
    }
    RatedPair pair;
    pair.word1 = to_lower(fields[0]);
    pair.word2 = to_lower(fields[1]);
    pair.rating = parse_finite_double(fields[2], where + ": rating");
    auto key = pair.word1 <= pair.word2
                   ? std::make_pair(pair.word1, pair.word2)
                   : std::make_pair(pair.word2, pair.word1);
    if (!seen.insert(key).second) {
      throw DataError(where + ": duplicate pair '" + pair.word1 + "'/'" +
                      pair.word2 + "'");
    }
    bench.pairs.push_back(std::move(pair));
  }
  if (bench.pairs.empty()) {
    throw DataError("benchmark file has no pairs: " + path.string());
  }
  return bench;
}

inline void write_benchmark(const SimilarityBenchmark& benchmark,
                            const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write benchmark file: " + path.string());
  for (const RatedPair& pair : benchmark.pairs) {
    out << pair.word1 << '\t' << pair.word2 << '\t' << format_double(pair.rating)
        << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace lexvis
