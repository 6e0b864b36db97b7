#include <set>
#include <string>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "lexvis/evaluate.hpp"
#include "lexvis/multimodal.hpp"
#include "lexvis/synthetic.hpp"
#include "lexvis/train.hpp"

using namespace lexvis;

namespace {

SyntheticSpec small_spec() {
  SyntheticSpec spec;
  spec.seed = 7;
  spec.n_words = 30;
  spec.d_l = 6;
  spec.d_v = 3;
  spec.noise_sigma = 0.05;
  spec.benchmark_size = 40;
  spec.alpha = 0.5;
  spec.images_per_concept = 4;
  spec.visual_coverage = 1.0;
  return spec;
}

TEST(Synthetic, DeterministicForFixedSeed) {
  SyntheticData a = generate_synthetic(small_spec());
  SyntheticData b = generate_synthetic(small_spec());
  ASSERT_EQ(a.text.entries.size(), b.text.entries.size());
  auto bit = b.text.entries.begin();
  for (const auto& [word, vec] : a.text.entries) {
    EXPECT_EQ(word, bit->first);
    EXPECT_EQ(vec, bit->second);
    ++bit;
  }
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].word, b.records[i].word);
    EXPECT_EQ(a.records[i].image_id, b.records[i].image_id);
    EXPECT_EQ(a.records[i].features, b.records[i].features);
  }
  ASSERT_EQ(a.benchmark.pairs.size(), b.benchmark.pairs.size());
  for (std::size_t i = 0; i < a.benchmark.pairs.size(); ++i) {
    EXPECT_EQ(a.benchmark.pairs[i].word1, b.benchmark.pairs[i].word1);
    EXPECT_EQ(a.benchmark.pairs[i].word2, b.benchmark.pairs[i].word2);
    EXPECT_EQ(a.benchmark.pairs[i].rating, b.benchmark.pairs[i].rating);
  }
  for (std::size_t i = 0; i < a.true_model.w1.size(); ++i) {
    EXPECT_EQ(a.true_model.w1[i], b.true_model.w1[i]);
  }
}

TEST(Synthetic, SeedChangesWorld) {
  SyntheticSpec spec = small_spec();
  SyntheticData a = generate_synthetic(spec);
  spec.seed = 8;
  SyntheticData b = generate_synthetic(spec);
  EXPECT_NE(a.text.entries.begin()->second, b.text.entries.begin()->second);
  EXPECT_NE(a.true_model.w1[0], b.true_model.w1[0]);
}

TEST(Synthetic, ShapesAndNaming) {
  SyntheticSpec spec = small_spec();
  SyntheticData data = generate_synthetic(spec);
  EXPECT_EQ(data.text.name, "text");
  EXPECT_EQ(data.text.dim, spec.d_l);
  EXPECT_EQ(data.text.entries.size(), spec.n_words);
  EXPECT_TRUE(data.text.contains("w000000"));
  EXPECT_TRUE(data.text.contains("w000029"));
  EXPECT_EQ(data.benchmark.name, "synthetic");
  EXPECT_EQ(data.benchmark.pairs.size(), spec.benchmark_size);
  EXPECT_EQ(data.records.size(), spec.n_words * spec.images_per_concept);
  EXPECT_EQ(data.records[0].image_id, "w000000_img0000");
  EXPECT_EQ(data.true_model.kind, ModelKind::linear);
  EXPECT_EQ(data.true_model.w1.size(), spec.d_v);
  EXPECT_EQ(data.true_model.w1[0].size(), spec.d_l);
  for (double b : data.true_model.b1) EXPECT_EQ(b, 0.0);
}

TEST(Synthetic, BenchmarkPairsDistinctUnordered) {
  SyntheticSpec spec = small_spec();
  spec.benchmark_size = 100;
  SyntheticData data = generate_synthetic(spec);
  std::set<std::pair<std::string, std::string>> seen;
  for (const RatedPair& p : data.benchmark.pairs) {
    EXPECT_NE(p.word1, p.word2);
    auto key = p.word1 < p.word2 ? std::make_pair(p.word1, p.word2)
                                 : std::make_pair(p.word2, p.word1);
    EXPECT_TRUE(seen.insert(key).second) << p.word1 << "/" << p.word2;
  }
}

TEST(Synthetic, SaturatedRequestEnumeratesEveryPair) {
  SyntheticSpec spec = small_spec();
  spec.n_words = 5;
  spec.benchmark_size = 10;  // all 5*4/2 pairs
  SyntheticData data = generate_synthetic(spec);
  EXPECT_EQ(data.benchmark.pairs.size(), 10u);
}

TEST(Synthetic, SparseRequestOnLargeVocabulary) {
  SyntheticSpec spec = small_spec();
  spec.n_words = 3000;  // 4.5M candidate pairs forces the sampling path
  spec.benchmark_size = 25;
  spec.images_per_concept = 1;
  SyntheticData data = generate_synthetic(spec);
  EXPECT_EQ(data.benchmark.pairs.size(), 25u);
}

TEST(Synthetic, RatingsRecomputeFromParts) {
  SyntheticSpec spec = small_spec();
  SyntheticData data = generate_synthetic(spec);
  for (const RatedPair& p : data.benchmark.pairs) {
    const Vec& l1 = data.text.entries.at(p.word1);
    const Vec& l2 = data.text.entries.at(p.word2);
    const double expected =
        spec.alpha * cosine(l1, l2) +
        (1.0 - spec.alpha) * cosine(forward_eval(data.true_model, l1),
                                    forward_eval(data.true_model, l2));
    EXPECT_EQ(p.rating, expected);
  }
}

TEST(Synthetic, CoverageSelectsLeadingWords) {
  SyntheticSpec spec = small_spec();
  spec.n_words = 10;
  spec.visual_coverage = 0.5;
  spec.benchmark_size = 20;
  SyntheticData data = generate_synthetic(spec);
  ASSERT_EQ(data.covered_words.size(), 5u);
  EXPECT_EQ(data.covered_words.front(), "w000000");
  EXPECT_EQ(data.covered_words.back(), "w000004");
  EXPECT_EQ(data.records.size(), 5u * spec.images_per_concept);
  for (const FeatureRecord& rec : data.records) {
    EXPECT_LT(rec.word, "w000005");
  }
}

TEST(Synthetic, TinyCoverageStillCoversOneWord) {
  SyntheticSpec spec = small_spec();
  spec.visual_coverage = 0.001;
  SyntheticData data = generate_synthetic(spec);
  EXPECT_EQ(data.covered_words.size(), 1u);
}

TEST(Synthetic, NoiselessFeaturesEqualTrueVisual) {
  SyntheticSpec spec = small_spec();
  spec.noise_sigma = 0.0;
  SyntheticData data = generate_synthetic(spec);
  for (const FeatureRecord& rec : data.records) {
    EXPECT_EQ(rec.features,
              forward_eval(data.true_model, data.text.entries.at(rec.word)));
  }
}

TEST(Synthetic, SpecValidation) {
  SyntheticSpec spec = small_spec();
  spec.n_words = 1;
  EXPECT_THROW(generate_synthetic(spec), ConfigError);
  spec = small_spec();
  spec.d_l = 0;
  EXPECT_THROW(generate_synthetic(spec), ConfigError);
  spec = small_spec();
  spec.d_v = 0;
  EXPECT_THROW(generate_synthetic(spec), ConfigError);
  spec = small_spec();
  spec.noise_sigma = -0.1;
  EXPECT_THROW(generate_synthetic(spec), ConfigError);
  spec = small_spec();
  spec.benchmark_size = 0;
  EXPECT_THROW(generate_synthetic(spec), ConfigError);
  spec = small_spec();
  spec.n_words = 5;
  spec.benchmark_size = 11;  // only 10 distinct pairs exist
  EXPECT_THROW(generate_synthetic(spec), ConfigError);
  spec = small_spec();
  spec.alpha = 1.5;
  EXPECT_THROW(generate_synthetic(spec), ConfigError);
  spec = small_spec();
  spec.images_per_concept = 0;
  EXPECT_THROW(generate_synthetic(spec), ConfigError);
  spec = small_spec();
  spec.visual_coverage = 0.0;
  EXPECT_THROW(generate_synthetic(spec), ConfigError);
  spec = small_spec();
  spec.visual_scale = 0.0;
  EXPECT_THROW(generate_synthetic(spec), ConfigError);
}

TEST(Synthetic, AlphaOneMakesTextTablePerfect) {
  SyntheticSpec spec = small_spec();
  spec.alpha = 1.0;
  SyntheticData data = generate_synthetic(spec);
  EvalResult r = evaluate(data.text, data.benchmark, {});
  ASSERT_TRUE(r.all.rho.has_value());
  EXPECT_DOUBLE_EQ(*r.all.rho, 1.0);
}

TEST(Synthetic, AlphaZeroNoiselessTrainingRecoversVisualOrder) {
  SyntheticSpec spec;
  spec.seed = 11;
  spec.n_words = 120;
  spec.d_l = 8;
  spec.d_v = 4;
  spec.noise_sigma = 0.0;
  spec.benchmark_size = 200;
  spec.alpha = 0.0;
  spec.images_per_concept = 3;
  SyntheticData data = generate_synthetic(spec);

  AggregationPolicy policy;
  policy.min_images = 1;
  auto [visual, report] = aggregate_mean(data.records, policy);
  ASSERT_EQ(report.concepts_kept, 120u);

  TrainConfig cfg;
  cfg.learning_rate = 0.1;
  cfg.dropout_rate = 0.0;
  cfg.epochs = 150;
  cfg.batch_size = 32;
  cfg.seed = 3;
  auto [model, train_report] = train(data.text, visual, ModelKind::linear, cfg);

  // The trained rows must align with the true map rows (cosine >= 0.999).
  for (std::size_t i = 0; i < model.w1.size(); ++i) {
    EXPECT_GE(cosine(model.w1[i], data.true_model.w1[i]), 0.999) << "row " << i;
  }

  std::set<std::string> vocab(data.covered_words.begin(), data.covered_words.end());
  VectorTable map = build_map_table(model, data.text);
  EvalResult map_result = evaluate(map, data.benchmark, vocab);
  EvalResult text_result = evaluate(data.text, data.benchmark, vocab);
  ASSERT_TRUE(map_result.all.rho.has_value());
  ASSERT_TRUE(text_result.all.rho.has_value());
  EXPECT_GE(*map_result.all.rho, 0.99);
  EXPECT_LT(*text_result.all.rho, *map_result.all.rho);
}

}  // namespace
