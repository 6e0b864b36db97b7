#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lexvis/error.hpp"
#include "lexvis/format.hpp"
#include "lexvis/vec.hpp"

namespace lexvis {

// Immutable-by-convention word -> vector map with uniform dimensionality.
// Words are lowercase and unique; construction paths enforce both.
struct VectorTable {
  std::map<std::string, Vec> entries;
  std::size_t dim = 0;
  std::string name;

  bool contains(const std::string& word) const { return entries.count(word) != 0; }
  std::size_t size() const { return entries.size(); }
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace detail

// Text embedding format: one record per line, token then dim decimal floats,
// whitespace separated, no header. Words are lowercased; duplicates (after
// lowercasing) are a hard error rather than last-wins.
inline VectorTable load_text_embeddings(const std::filesystem::path& path,
                                        std::size_t expected_dim = 0,
                                        std::string name = "") {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file: " + path.string());

  VectorTable table;
  table.name = name.empty() ? path.stem().string() : std::move(name);

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::strip_cr(raw);
    auto fields = detail::split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() < 2) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected token plus at least one value");
    }
    std::string word = to_lower(fields[0]);
    Vec v(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      v[i - 1] = parse_finite_double(
          fields[i], path.string() + ":" + std::to_string(line_no));
    }
    if (table.dim == 0) {
      table.dim = v.size();
      if (expected_dim != 0 && table.dim != expected_dim) {
        throw DataError(path.string() + ": dimension " + std::to_string(table.dim) +
                        " does not match expected " + std::to_string(expected_dim));
      }
    } else if (v.size() != table.dim) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": dimension mismatch (" + std::to_string(v.size()) + " vs " +
                      std::to_string(table.dim) + ")");
    }
    auto [it, inserted] = table.entries.emplace(std::move(word), std::move(v));
    if (!inserted) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": duplicate word '" + it->first + "'");
    }
  }
  if (table.entries.empty()) {
    throw DataError(path.string() + ": empty embedding file");
  }
  return table;
}

// Emits shortest round-tripping decimals so load(write(t)) == t bit for bit.
// Records are written in sorted word order.
inline void write_text_embeddings(const VectorTable& table,
                                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write embedding file: " + path.string());
  for (const auto& [word, vec] : table.entries) {
    out << word;
    for (double x : vec) out << ' ' << format_double(x);
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace lexvis
