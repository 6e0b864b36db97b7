#include "lexvis/spearman.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "lexvis/error.hpp"
#include "lexvis/rng.hpp"

using lexvis::DataError;
using lexvis::DegenerateStatsError;
using lexvis::Rng;
using lexvis::spearman;

namespace {

// Brute-force oracle, independent of the implementation: ranks by counting
// comparisons, then the textbook sum-form Pearson formula.
std::vector<double> oracle_ranks(const std::vector<double>& xs) {
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::size_t less = 0, equal = 0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (xs[j] < xs[i]) ++less;
      if (xs[j] == xs[i]) ++equal;
    }
    ranks[i] = static_cast<double>(less) + (static_cast<double>(equal) + 1.0) / 2.0;
  }
  return ranks;
}

// Returns false when rho is undefined (either rank sequence constant).
bool oracle_spearman(const std::vector<double>& xs, const std::vector<double>& ys,
                     double& rho_out) {
  std::vector<double> rx = oracle_ranks(xs);
  std::vector<double> ry = oracle_ranks(ys);
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += rx[i];
    sy += ry[i];
    sxy += rx[i] * ry[i];
    sxx += rx[i] * rx[i];
    syy += ry[i] * ry[i];
  }
  double vx = sxx - sx * sx / n;
  double vy = syy - sy * sy / n;
  if (vx == 0.0 || vy == 0.0) return false;
  rho_out = (sxy - sx * sy / n) / std::sqrt(vx * vy);
  return true;
}

bool has_ties(const std::vector<double>& xs) {
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      if (xs[i] == xs[j]) return true;
  return false;
}

std::vector<double> random_seq(Rng& rng, std::size_t n, bool tie_prone) {
  std::vector<double> v(n);
  for (auto& x : v) {
    // tie-prone sequences draw from a small integer grid
    x = tie_prone ? static_cast<double>(rng.bounded(6)) : rng.uniform(-10.0, 10.0);
  }
  return v;
}

}  // namespace

TEST(Spearman, FrozenExample) {
  // hand check: ranks of ys=[3,1,2] are [3,1,2]; Pearson([1,2,3],[3,1,2]) = -1/2
  std::vector<double> xs{1, 2, 3};
  std::vector<double> ys{3, 1, 2};
  EXPECT_DOUBLE_EQ(spearman(xs, ys), -0.5);
  double rho = 0;
  ASSERT_TRUE(oracle_spearman(xs, ys, rho));
  EXPECT_DOUBLE_EQ(rho, -0.5);
}

TEST(Spearman, MonotoneIncreasingIsOne) {
  std::vector<double> xs{0.1, 2.3, 3.0, 7.5, 11.0};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(std::exp(x) + x * x * x);
  EXPECT_DOUBLE_EQ(spearman(xs, ys), 1.0);
}

TEST(Spearman, MonotoneDecreasingIsMinusOne) {
  std::vector<double> xs{0.1, 2.3, 3.0, 7.5, 11.0};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(-x * x);
  EXPECT_DOUBLE_EQ(spearman(xs, ys), -1.0);
}

TEST(Spearman, LengthMismatchThrows) {
  EXPECT_THROW(spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}),
               DataError);
}

TEST(Spearman, TooShortThrows) {
  EXPECT_THROW(spearman(std::vector<double>{1}, std::vector<double>{2}), DataError);
}

TEST(Spearman, ConstantInputThrowsDegenerate) {
  EXPECT_THROW(spearman(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}),
               DegenerateStatsError);
  EXPECT_THROW(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{4, 4, 4}),
               DegenerateStatsError);
}

TEST(Spearman, MatchesBruteForceOracle) {
  Rng rng(20260819);
  std::size_t tie_cases = 0, compared = 0;
  for (int t = 0; t < 1000; ++t) {
    std::size_t n = 2 + rng.bounded(49);  // lengths 2..50
    bool tie_prone = rng.uniform01() < 0.3;
    std::vector<double> xs = random_seq(rng, n, tie_prone);
    std::vector<double> ys = random_seq(rng, n, tie_prone);
    if (has_ties(xs) || has_ties(ys)) ++tie_cases;
    double expected = 0;
    if (!oracle_spearman(xs, ys, expected)) {
      EXPECT_THROW(spearman(xs, ys), DegenerateStatsError);
      continue;
    }
    ++compared;
    EXPECT_NEAR(spearman(xs, ys), expected, 1e-12);
  }
  EXPECT_GE(tie_cases, 200u);
  EXPECT_GE(compared, 800u);
}

TEST(Spearman, NoTiesShortcutFormulaAgrees) {
  // 1 - 6*sum(d^2)/(n(n^2-1)) is valid only without ties
  Rng rng(99);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 3 + rng.bounded(40);
    std::vector<double> xs = random_seq(rng, n, false);
    std::vector<double> ys = random_seq(rng, n, false);
    if (has_ties(xs) || has_ties(ys)) continue;
    std::vector<double> rx = oracle_ranks(xs);
    std::vector<double> ry = oracle_ranks(ys);
    double sum_d2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double d = rx[i] - ry[i];
      sum_d2 += d * d;
    }
    double nn = static_cast<double>(n);
    double shortcut = 1.0 - 6.0 * sum_d2 / (nn * (nn * nn - 1.0));
    EXPECT_NEAR(spearman(xs, ys), shortcut, 1e-12);
  }
}

TEST(Spearman, Symmetric) {
  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 2 + rng.bounded(30);
    std::vector<double> xs = random_seq(rng, n, rng.uniform01() < 0.5);
    std::vector<double> ys = random_seq(rng, n, rng.uniform01() < 0.5);
    double a, b;
    try {
      a = spearman(xs, ys);
      b = spearman(ys, xs);
    } catch (const DegenerateStatsError&) {
      continue;
    }
    EXPECT_EQ(a, b);
  }
}

TEST(Spearman, ExactlyInvariantUnderMonotoneTransforms) {
  Rng rng(31337);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 5 + rng.bounded(40);
    std::vector<double> xs = random_seq(rng, n, t % 3 == 0);
    std::vector<double> ys = random_seq(rng, n, t % 3 == 1);
    double base;
    try {
      base = spearman(xs, ys);
    } catch (const DegenerateStatsError&) {
      continue;
    }
    // random strictly increasing transform: positive-slope affine then one of
    // identity / cube / atan / expm1-compressed
    double a = std::exp(rng.uniform(-2.0, 2.0));
    double b = rng.uniform(-10.0, 10.0);
    int family = static_cast<int>(rng.bounded(4));
    auto g = [&](double x) {
      double y = a * x + b;
      switch (family) {
        case 0: return y;
        case 1: return y * y * y;
        case 2: return std::atan(y);
        default: return std::expm1(y / 50.0);
      }
    };
    std::vector<double> gx, hy;
    for (double x : xs) gx.push_back(g(x));
    for (double y : ys) hy.push_back(g(y));
    EXPECT_EQ(spearman(gx, hy), base);
    EXPECT_EQ(spearman(gx, ys), base);
  }
}
