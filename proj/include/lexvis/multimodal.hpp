#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lexvis/error.hpp"
#include "lexvis/model.hpp"
#include "lexvis/table.hpp"
#include "lexvis/vec.hpp"

namespace lexvis {

namespace detail {

inline void check_map_input(const MapModel& model, const VectorTable& text) {
  if (text.dim != model.d_l) {
    throw DataError("build: text table dim " + std::to_string(text.dim) +
                    " does not match model d_l " + std::to_string(model.d_l));
  }
  if (text.entries.empty()) throw DataError("build: text table is empty");
}

}  // namespace detail

// MAP table: m_w = f(l_w) for every word in the text vocabulary, including
// words that never had a visual training vector (zero-shot coverage).
// normalize_text_input must match the flag the model was trained with.
inline VectorTable build_map_table(const MapModel& model, const VectorTable& text,
                                   bool normalize_text_input = false) {
  detail::check_map_input(model, text);
  VectorTable out;
  out.name = "map";
  out.dim = model.d_v;
  for (const auto& [word, lvec] : text.entries) {
    out.entries.emplace(word, forward_eval(model, normalize_text_input
                                                      ? l2_normalize(lvec)
                                                      : lvec));
  }
  return out;
}

struct MapcResult {
  VectorTable table;
  // Words whose mapped vector had exactly zero norm; they are kept in the
  // table with an all-zero mapped half so the vocabulary stays stable.
  std::vector<std::string> degenerate_words;
};

// MAP-C table: l_w concatenated with the l2-normalized f(l_w); text half
// first and raw by default. normalize_text_half additionally normalizes the
// stored text half (sensitivity studies); normalize_text_input only controls
// what the model sees, matching training.
inline MapcResult build_mapc_table(const MapModel& model, const VectorTable& text,
                                   bool normalize_text_input = false,
                                   bool normalize_text_half = false) {
  detail::check_map_input(model, text);
  MapcResult result;
  result.table.name = "mapc";
  result.table.dim = model.d_l + model.d_v;
  for (const auto& [word, lvec] : text.entries) {
    Vec mapped = forward_eval(model, normalize_text_input ? l2_normalize(lvec) : lvec);
    if (norm(mapped) == 0.0) {
      result.degenerate_words.push_back(word);
      mapped.assign(mapped.size(), 0.0);
    } else {
      mapped = l2_normalize(mapped);
    }
    const Vec& text_half = normalize_text_half ? l2_normalize(lvec) : lvec;
    result.table.entries.emplace(word, concat(text_half, mapped));
  }
  return result;
}

}  // namespace lexvis
