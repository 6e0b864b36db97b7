#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "lexvis/error.hpp"

namespace lexvis {

// Dense real vector, the atom of every embedding space here.
using Vec = std::vector<double>;

inline bool all_finite(const Vec& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

inline void check_same_dim(const Vec& a, const Vec& b, const char* op) {
  if (a.size() != b.size()) {
    throw DataError(std::string(op) + ": dimension mismatch (" +
                    std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
}

inline double dot(const Vec& a, const Vec& b) {
  check_same_dim(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& v) { return std::sqrt(dot(v, v)); }

inline Vec l2_normalize(const Vec& v) {
  double n = norm(v);
  if (n == 0.0) throw DataError("l2_normalize: zero-norm vector");
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / n;
  return out;
}

// Cosine similarity, clamped to [-1, 1] so rank statistics never see 1+eps.
inline double cosine(const Vec& a, const Vec& b) {
  check_same_dim(a, b, "cosine");
  double na = norm(a);
  double nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw DataError("cosine: zero-norm operand");
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

inline Vec concat(const Vec& a, const Vec& b) {
  if (a.empty() || b.empty()) throw DataError("concat: operands must have dim >= 1");
  Vec out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace lexvis
