#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lexvis/benchmark.hpp"
#include "lexvis/error.hpp"
#include "lexvis/features.hpp"
#include "lexvis/model.hpp"
#include "lexvis/rng.hpp"
#include "lexvis/table.hpp"
#include "lexvis/vec.hpp"

namespace lexvis {

// Desk-scale ground-truth world: text vectors are i.i.d. standard normal, a
// hidden linear map W* defines the "true" visual space, per-image features
// are W* l_w plus isotropic noise, and benchmark ratings blend text-space and
// true-visual-space cosine similarity with weight alpha.
struct SyntheticSpec {
  std::uint64_t seed = 0;
  std::size_t n_words = 100;
  std::size_t d_l = 20;
  std::size_t d_v = 10;
  double noise_sigma = 0.1;        // per-component std of image noise
  std::size_t benchmark_size = 500;
  double alpha = 0.5;              // rating = alpha*cos_text + (1-alpha)*cos_visual
  std::size_t images_per_concept = 60;
  double visual_coverage = 1.0;    // leading fraction of words that get images
  double visual_scale = 0.1;       // per-component std of the true visual signal

  void validate() const {
    if (n_words < 2) throw ConfigError("synthetic: n_words must be at least 2");
    if (d_l == 0 || d_v == 0) throw ConfigError("synthetic: dimensions must be positive");
    if (noise_sigma < 0.0 || !std::isfinite(noise_sigma)) {
      throw ConfigError("synthetic: noise_sigma must be nonnegative");
    }
    if (benchmark_size == 0) throw ConfigError("synthetic: benchmark_size must be positive");
    const std::size_t max_pairs = n_words * (n_words - 1) / 2;
    if (benchmark_size > max_pairs) {
      throw ConfigError("synthetic: benchmark_size exceeds the " +
                        std::to_string(max_pairs) + " distinct pairs available");
    }
    if (alpha < 0.0 || alpha > 1.0) throw ConfigError("synthetic: alpha must lie in [0,1]");
    if (images_per_concept == 0) {
      throw ConfigError("synthetic: images_per_concept must be positive");
    }
    if (visual_coverage <= 0.0 || visual_coverage > 1.0) {
      throw ConfigError("synthetic: visual_coverage must lie in (0,1]");
    }
    if (visual_scale <= 0.0 || !std::isfinite(visual_scale)) {
      throw ConfigError("synthetic: visual_scale must be positive");
    }
  }
};

struct SyntheticData {
  VectorTable text;                        // name "text"
  std::vector<FeatureRecord> records;      // only for covered words
  SimilarityBenchmark benchmark;           // name "synthetic"
  MapModel true_model;                     // linear W*, zero bias
  std::vector<std::string> covered_words;  // words possessing images
};

namespace detail {

inline std::string synthetic_word(std::size_t index) {
  std::string digits = std::to_string(index);
  return "w" + std::string(6 - std::min<std::size_t>(6, digits.size()), '0') + digits;
}

inline std::string synthetic_image_id(const std::string& word, std::size_t index) {
  std::string digits = std::to_string(index);
  return word + "_img" + std::string(4 - std::min<std::size_t>(4, digits.size()), '0') +
         digits;
}

// Distinct unordered index pairs (i<j), seed-deterministic. Dense requests
// enumerate-and-shuffle; sparse ones rejection-sample.
inline std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(
    std::size_t n, std::size_t count, Rng& rng) {
  const std::size_t total = n * (n - 1) / 2;
  std::vector<std::pair<std::size_t, std::size_t>> picked;
  if (total <= 4 * count || total <= (1u << 20)) {
    std::vector<std::pair<std::size_t, std::size_t>> all;
    all.reserve(total);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) all.emplace_back(i, j);
    }
    rng.shuffle(all);
    picked.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(count));
    return picked;
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  while (picked.size() < count) {
    std::size_t a = rng.bounded(n);
    std::size_t b = rng.bounded(n);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!seen.emplace(a, b).second) continue;
    picked.emplace_back(a, b);
  }
  return picked;
}

}  // namespace detail

inline SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng text_rng(derive_seed(spec.seed, 0));
  Rng wstar_rng(derive_seed(spec.seed, 1));
  Rng noise_rng(derive_seed(spec.seed, 2));
  Rng pairs_rng(derive_seed(spec.seed, 3));

  SyntheticData data;
  data.text.name = "text";
  data.text.dim = spec.d_l;
  std::vector<std::string> words(spec.n_words);
  for (std::size_t i = 0; i < spec.n_words; ++i) {
    words[i] = detail::synthetic_word(i);
    Vec l(spec.d_l);
    for (double& x : l) x = text_rng.normal();
    data.text.entries.emplace(words[i], std::move(l));
  }

  // True map: rows of W* carry per-component signal std = visual_scale for
  // unit-variance inputs, so the visual SNR is visual_scale : noise_sigma per
  // image before aggregation.
  data.true_model.kind = ModelKind::linear;
  data.true_model.d_l = spec.d_l;
  data.true_model.d_v = spec.d_v;
  data.true_model.w1.assign(spec.d_v, Vec(spec.d_l));
  const double w_std = spec.visual_scale / std::sqrt(static_cast<double>(spec.d_l));
  for (Vec& row : data.true_model.w1) {
    for (double& w : row) w = w_std * wstar_rng.normal();
  }
  data.true_model.b1.assign(spec.d_v, 0.0);

  const std::size_t covered =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(
                                   spec.visual_coverage *
                                   static_cast<double>(spec.n_words))));
  data.covered_words.assign(words.begin(),
                            words.begin() + static_cast<std::ptrdiff_t>(
                                                std::min(covered, spec.n_words)));
  data.records.reserve(data.covered_words.size() * spec.images_per_concept);
  for (const std::string& word : data.covered_words) {
    const Vec truth = forward_eval(data.true_model, data.text.entries.at(word));
    for (std::size_t img = 0; img < spec.images_per_concept; ++img) {
      Vec features = truth;
      for (double& f : features) f += spec.noise_sigma * noise_rng.normal();
      data.records.push_back(
          {word, detail::synthetic_image_id(word, img), std::move(features)});
    }
  }

  data.benchmark.name = "synthetic";
  for (const auto& [i, j] : detail::sample_pairs(spec.n_words, spec.benchmark_size,
                                                 pairs_rng)) {
    const Vec& li = data.text.entries.at(words[i]);
    const Vec& lj = data.text.entries.at(words[j]);
    double rating = 0.0;
    if (spec.alpha > 0.0) rating += spec.alpha * cosine(li, lj);
    if (spec.alpha < 1.0) {
      rating += (1.0 - spec.alpha) * cosine(forward_eval(data.true_model, li),
                                            forward_eval(data.true_model, lj));
    }
    data.benchmark.pairs.push_back({words[i], words[j], rating});
  }
  return data;
}

}  // namespace lexvis
