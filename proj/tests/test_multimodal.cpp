#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lexvis/multimodal.hpp"
#include "lexvis/rng.hpp"

using namespace lexvis;

namespace {

VectorTable make_table(const std::vector<std::pair<std::string, Vec>>& rows) {
  VectorTable t;
  t.name = "text";
  for (const auto& [w, v] : rows) t.entries.emplace(w, v);
  t.dim = rows.front().second.size();
  return t;
}

MapModel identity_model(std::size_t d) {
  MapModel m;
  m.kind = ModelKind::linear;
  m.d_l = d;
  m.d_v = d;
  m.w1.assign(d, Vec(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) m.w1[i][i] = 1.0;
  m.b1.assign(d, 0.0);
  return m;
}

VectorTable random_table(std::size_t words, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  VectorTable t;
  t.name = "text";
  t.dim = dim;
  for (std::size_t i = 0; i < words; ++i) {
    Vec v(dim);
    for (double& x : v) x = rng.normal();
    t.entries.emplace("w" + std::to_string(i), std::move(v));
  }
  return t;
}

TEST(BuildMap, IdentityModelReproducesTextTable) {
  VectorTable text = make_table({{"a", {1.0, -2.0}}, {"b", {0.25, 4.0}}});
  VectorTable map = build_map_table(identity_model(2), text);
  EXPECT_EQ(map.name, "map");
  EXPECT_EQ(map.dim, 2u);
  ASSERT_EQ(map.entries.size(), 2u);
  EXPECT_EQ(map.entries.at("a"), text.entries.at("a"));
  EXPECT_EQ(map.entries.at("b"), text.entries.at("b"));
}

TEST(BuildMap, ZeroWeightsGiveConstantMap) {
  MapModel m;
  m.kind = ModelKind::linear;
  m.d_l = 2;
  m.d_v = 2;
  m.w1 = {{0.0, 0.0}, {0.0, 0.0}};
  m.b1 = {1.5, -0.5};
  VectorTable text = make_table({{"a", {1.0, 2.0}}, {"b", {-3.0, 0.0}}});
  VectorTable map = build_map_table(m, text);
  EXPECT_EQ(map.entries.at("a"), (Vec{1.5, -0.5}));
  EXPECT_EQ(map.entries.at("b"), (Vec{1.5, -0.5}));
}

TEST(BuildMap, CoversFullTextVocabulary) {
  // Coverage is decided by the text table alone: words without any visual
  // training data still receive a mapped vector (zero-shot words).
  VectorTable text = random_table(25, 4, 3);
  MapModel m = init_model(ModelKind::mlp, 4, 3, 5, 11);
  VectorTable map = build_map_table(m, text);
  ASSERT_EQ(map.entries.size(), text.entries.size());
  for (const auto& [word, vec] : text.entries) {
    EXPECT_TRUE(map.contains(word));
    EXPECT_EQ(map.entries.at(word), forward_eval(m, vec));
  }
}

TEST(BuildMap, DimensionMismatchThrows) {
  VectorTable text = make_table({{"a", {1.0, 2.0, 3.0}}});
  EXPECT_THROW(build_map_table(identity_model(2), text), DataError);
}

TEST(BuildMap, EmptyTableThrows) {
  VectorTable text;
  text.dim = 2;
  EXPECT_THROW(build_map_table(identity_model(2), text), DataError);
}

TEST(BuildMap, NormalizedInputOption) {
  VectorTable text = make_table({{"a", {3.0, 4.0}}});
  MapModel m = identity_model(2);
  VectorTable map = build_map_table(m, text, /*normalize_text_input=*/true);
  EXPECT_EQ(map.entries.at("a"), (Vec{0.6, 0.8}));
}

TEST(BuildMapc, ThreeFourFiveExample) {
  // l=(1,0), f(l)=(3,4) -> (1, 0, 0.6, 0.8): raw text half, unit mapped half.
  MapModel m;
  m.kind = ModelKind::linear;
  m.d_l = 2;
  m.d_v = 2;
  m.w1 = {{3.0, 0.0}, {4.0, 0.0}};
  m.b1 = {0.0, 0.0};
  VectorTable text = make_table({{"a", {1.0, 0.0}}});
  MapcResult r = build_mapc_table(m, text);
  EXPECT_EQ(r.table.name, "mapc");
  EXPECT_EQ(r.table.dim, 4u);
  EXPECT_TRUE(r.degenerate_words.empty());
  EXPECT_EQ(r.table.entries.at("a"), (Vec{1.0, 0.0, 0.6, 0.8}));
}

TEST(BuildMapc, PresetDimensions) {
  VectorTable text = random_table(3, 300, 5);
  MapModel m = init_model(ModelKind::linear, 300, 128, 0, 2);
  MapcResult r = build_mapc_table(m, text);
  EXPECT_EQ(r.table.dim, 428u);
  EXPECT_EQ(r.table.entries.begin()->second.size(), 428u);
}

TEST(BuildMapc, LeadingCoordinatesAreTextVector) {
  VectorTable text = random_table(10, 6, 7);
  MapModel m = init_model(ModelKind::mlp, 6, 4, 5, 13);
  MapcResult r = build_mapc_table(m, text);
  for (const auto& [word, entry] : r.table.entries) {
    const Vec& l = text.entries.at(word);
    for (std::size_t i = 0; i < l.size(); ++i) {
      EXPECT_EQ(entry[i], l[i]) << word << " coord " << i;
    }
    double n = 0.0;
    for (std::size_t i = l.size(); i < entry.size(); ++i) n += entry[i] * entry[i];
    EXPECT_NEAR(std::sqrt(n), 1.0, 1e-12) << word;
  }
}

TEST(BuildMapc, DegenerateMappedVectorKeptWithZeroBlock) {
  MapModel m;
  m.kind = ModelKind::linear;
  m.d_l = 2;
  m.d_v = 3;
  m.w1.assign(3, Vec(2, 0.0));
  m.b1.assign(3, 0.0);
  VectorTable text = make_table({{"a", {1.0, 2.0}}, {"b", {0.5, -1.0}}});
  MapcResult r = build_mapc_table(m, text);
  EXPECT_EQ(r.degenerate_words, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(r.table.entries.at("a"), (Vec{1.0, 2.0, 0.0, 0.0, 0.0}));
  EXPECT_EQ(r.table.entries.size(), 2u);
}

TEST(BuildMapc, StrippedTextHalfReproducesNormalizedMapCosines) {
  VectorTable text = random_table(12, 5, 17);
  MapModel m = init_model(ModelKind::linear, 5, 3, 0, 19);
  VectorTable map = build_map_table(m, text);
  MapcResult r = build_mapc_table(m, text);
  std::vector<std::string> words;
  for (const auto& [w, v] : text.entries) words.push_back(w);
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = i + 1; j < words.size(); ++j) {
      const Vec& a = r.table.entries.at(words[i]);
      const Vec& b = r.table.entries.at(words[j]);
      Vec ta(a.begin() + 5, a.end());
      Vec tb(b.begin() + 5, b.end());
      EXPECT_NEAR(cosine(ta, tb),
                  cosine(map.entries.at(words[i]), map.entries.at(words[j])), 1e-12);
    }
  }
}

TEST(BuildMapc, NormalizeTextHalfOption) {
  MapModel m = identity_model(2);
  VectorTable text = make_table({{"a", {3.0, 4.0}}});
  MapcResult r = build_mapc_table(m, text, /*normalize_text_input=*/false,
                                  /*normalize_text_half=*/true);
  const Vec& entry = r.table.entries.at("a");
  EXPECT_DOUBLE_EQ(entry[0], 0.6);
  EXPECT_DOUBLE_EQ(entry[1], 0.8);
}

TEST(BuildMapc, VocabulariesMatchTextTable) {
  VectorTable text = random_table(9, 4, 23);
  MapModel m = init_model(ModelKind::mlp, 4, 2, 3, 29);
  VectorTable map = build_map_table(m, text);
  MapcResult r = build_mapc_table(m, text);
  ASSERT_EQ(map.entries.size(), text.entries.size());
  ASSERT_EQ(r.table.entries.size(), text.entries.size());
  auto mit = map.entries.begin();
  auto cit = r.table.entries.begin();
  for (const auto& [word, vec] : text.entries) {
    EXPECT_EQ(mit->first, word);
    EXPECT_EQ(cit->first, word);
    ++mit;
    ++cit;
  }
}

}  // namespace
