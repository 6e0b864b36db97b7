#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "lexvis/error.hpp"
#include "lexvis/rng.hpp"
#include "lexvis/vec.hpp"

#include <json.hpp>

namespace lexvis {

enum class ModelKind { linear, mlp };

inline std::string model_kind_name(ModelKind kind) {
  return kind == ModelKind::linear ? "linear" : "mlp";
}

inline ModelKind parse_model_kind(const std::string& name) {
  if (name == "linear") return ModelKind::linear;
  if (name == "mlp") return ModelKind::mlp;
  throw ConfigError("unknown model kind '" + name + "' (expected linear or mlp)");
}

// The language-to-vision map f. For linear, w1/b1 form the single output
// layer (d_v x d_l) and w2/b2 are empty. For mlp, w1/b1 feed a tanh hidden
// layer (d_h x d_l) and w2/b2 form the linear output layer (d_v x d_h).
struct MapModel {
  ModelKind kind = ModelKind::linear;
  std::size_t d_l = 0;
  std::size_t d_v = 0;
  std::size_t d_h = 0;  // 0 for linear
  std::vector<Vec> w1;  // row-major rows
  Vec b1;
  std::vector<Vec> w2;
  Vec b2;
};

namespace detail {

inline void check_matrix_shape(const std::vector<Vec>& m, std::size_t rows,
                               std::size_t cols, const std::string& name) {
  if (m.size() != rows) {
    throw DataError("model: " + name + " has " + std::to_string(m.size()) +
                    " rows, expected " + std::to_string(rows));
  }
  for (const Vec& row : m) {
    if (row.size() != cols) {
      throw DataError("model: " + name + " row has " + std::to_string(row.size()) +
                      " columns, expected " + std::to_string(cols));
    }
    if (!all_finite(row)) throw DataError("model: non-finite entry in " + name);
  }
}

}  // namespace detail

inline void validate_model(const MapModel& model) {
  if (model.d_l == 0 || model.d_v == 0) throw DataError("model: dimensions must be positive");
  if (model.kind == ModelKind::linear) {
    if (model.d_h != 0) throw DataError("model: linear kind must have d_h=0");
    detail::check_matrix_shape(model.w1, model.d_v, model.d_l, "w1");
    if (model.b1.size() != model.d_v) throw DataError("model: b1 length mismatch");
    if (!model.w2.empty() || !model.b2.empty()) {
      throw DataError("model: linear kind must not carry a second layer");
    }
  } else {
    if (model.d_h == 0) throw DataError("model: mlp kind requires d_h > 0");
    detail::check_matrix_shape(model.w1, model.d_h, model.d_l, "w1");
    if (model.b1.size() != model.d_h) throw DataError("model: b1 length mismatch");
    detail::check_matrix_shape(model.w2, model.d_v, model.d_h, "w2");
    if (model.b2.size() != model.d_v) throw DataError("model: b2 length mismatch");
  }
  if (!all_finite(model.b1) || !all_finite(model.b2)) {
    throw DataError("model: non-finite bias entry");
  }
}

namespace detail {

// Glorot-style uniform init: entries ~ U(-a, a), a = sqrt(6/(fan_in+fan_out)).
inline std::vector<Vec> glorot_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::vector<Vec> m(rows, Vec(cols));
  for (Vec& row : m) {
    for (double& w : row) w = rng.uniform(-a, a);
  }
  return m;
}

}  // namespace detail

// Weights drawn row-major, layer 1 before layer 2, from Rng(seed); biases zero.
inline MapModel init_model(ModelKind kind, std::size_t d_l, std::size_t d_v,
                           std::size_t d_h, std::uint64_t seed) {
  if (d_l == 0 || d_v == 0) throw ConfigError("init_model: dimensions must be positive");
  if (kind == ModelKind::mlp && d_h == 0) throw ConfigError("init_model: mlp requires d_h > 0");
  if (kind == ModelKind::linear && d_h != 0) {
    throw ConfigError("init_model: linear kind takes no hidden layer (pass d_h=0)");
  }
  Rng rng(seed);
  MapModel model;
  model.kind = kind;
  model.d_l = d_l;
  model.d_v = d_v;
  model.d_h = d_h;
  if (kind == ModelKind::linear) {
    model.w1 = detail::glorot_matrix(d_v, d_l, rng);
    model.b1.assign(d_v, 0.0);
  } else {
    model.w1 = detail::glorot_matrix(d_h, d_l, rng);
    model.b1.assign(d_h, 0.0);
    model.w2 = detail::glorot_matrix(d_v, d_h, rng);
    model.b2.assign(d_v, 0.0);
  }
  return model;
}

namespace detail {

inline Vec affine(const std::vector<Vec>& w, const Vec& b, const Vec& x) {
  Vec out(b);
  for (std::size_t i = 0; i < w.size(); ++i) out[i] += dot(w[i], x);
  return out;
}

}  // namespace detail

// Deterministic eval-mode forward pass: linear -> W1 x + b1;
// mlp -> W2 tanh(W1 x + b1) + b2.
inline Vec forward_eval(const MapModel& model, const Vec& x) {
  if (x.size() != model.d_l) {
    throw DataError("forward: input has dim " + std::to_string(x.size()) +
                    ", model expects " + std::to_string(model.d_l));
  }
  Vec z = detail::affine(model.w1, model.b1, x);
  if (model.kind == ModelKind::linear) return z;
  for (double& v : z) v = std::tanh(v);
  return detail::affine(model.w2, model.b2, z);
}

// Intermediates cached by a train-mode forward pass, shaped for backprop.
// hidden_* members stay empty for linear models.
struct ForwardCache {
  Vec output;
  Vec x_dropped;      // input after inverted dropout
  Vec hidden;         // tanh activations before dropout
  Vec hidden_dropped; // tanh activations after inverted dropout
  Vec hidden_scale;   // per-unit mask/(1-p) factors, for backprop
};

namespace detail {

// Inverted dropout on v: each kept element is scaled by 1/(1-p), dropped
// elements go to zero. scale_out records the factor applied per element.
// rate==0 draws nothing from the rng so train mode matches eval exactly.
inline Vec apply_dropout(const Vec& v, double rate, Rng& rng, Vec* scale_out) {
  if (rate == 0.0) {
    if (scale_out) scale_out->assign(v.size(), 1.0);
    return v;
  }
  const double keep_scale = 1.0 / (1.0 - rate);
  Vec out(v.size());
  if (scale_out) scale_out->assign(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool keep = rng.uniform01() >= rate;
    out[i] = keep ? v[i] * keep_scale : 0.0;
    if (scale_out && keep) (*scale_out)[i] = keep_scale;
  }
  return out;
}

}  // namespace detail

// Train-mode forward pass: inverted dropout on the input of every weight
// layer (the input vector; for mlp also the tanh activations). Mask draws
// come from `rng` in a fixed order: input mask first, then hidden mask.
inline ForwardCache forward_train(const MapModel& model, const Vec& x,
                                  double dropout_rate, Rng& rng) {
  if (x.size() != model.d_l) {
    throw DataError("forward: input has dim " + std::to_string(x.size()) +
                    ", model expects " + std::to_string(model.d_l));
  }
  if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
    throw ConfigError("forward: dropout rate must lie in [0,1)");
  }
  ForwardCache cache;
  cache.x_dropped = detail::apply_dropout(x, dropout_rate, rng, nullptr);
  Vec z = detail::affine(model.w1, model.b1, cache.x_dropped);
  if (model.kind == ModelKind::linear) {
    cache.output = std::move(z);
    return cache;
  }
  for (double& v : z) v = std::tanh(v);
  cache.hidden = std::move(z);
  cache.hidden_dropped =
      detail::apply_dropout(cache.hidden, dropout_rate, rng, &cache.hidden_scale);
  cache.output = detail::affine(model.w2, model.b2, cache.hidden_dropped);
  return cache;
}

namespace detail {

inline Vec flatten(const std::vector<Vec>& m) {
  Vec flat;
  for (const Vec& row : m) flat.insert(flat.end(), row.begin(), row.end());
  return flat;
}

inline std::vector<Vec> unflatten(const Vec& flat, std::size_t rows, std::size_t cols,
                                  const std::string& name) {
  if (flat.size() != rows * cols) {
    throw DataError("model: " + name + " has " + std::to_string(flat.size()) +
                    " entries, expected " + std::to_string(rows * cols));
  }
  std::vector<Vec> m(rows, Vec(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m[i][j] = flat[i * cols + j];
  }
  return m;
}

template <typename Json>
inline Vec json_vec(const Json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw DataError("model: missing or non-array field '" + key + "'");
  }
  Vec v;
  for (const auto& e : j.at(key)) {
    if (!e.is_number()) throw DataError("model: non-numeric entry in '" + key + "'");
    v.push_back(e.template get<double>());
  }
  return v;
}

}  // namespace detail

inline nlohmann::ordered_json model_to_json(const MapModel& model) {
  validate_model(model);
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["kind"] = model_kind_name(model.kind);
  j["d_l"] = model.d_l;
  j["d_v"] = model.d_v;
  j["d_h"] = model.d_h;
  j["w1"] = detail::flatten(model.w1);
  j["b1"] = model.b1;
  if (model.kind == ModelKind::mlp) {
    j["w2"] = detail::flatten(model.w2);
    j["b2"] = model.b2;
  }
  return j;
}

inline MapModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("model: document is not a JSON object");
  if (!j.contains("version") || j.at("version") != 1) {
    throw DataError("model: missing or unsupported version");
  }
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    throw DataError("model: missing kind");
  }
  MapModel model;
  try {
    model.kind = parse_model_kind(j.at("kind").get<std::string>());
  } catch (const ConfigError& e) {
    throw DataError(std::string("model: ") + e.what());
  }
  for (const char* key : {"d_l", "d_v", "d_h"}) {
    if (!j.contains(key) || !j.at(key).is_number_unsigned()) {
      throw DataError("model: missing or invalid dimension '" + std::string(key) + "'");
    }
  }
  model.d_l = j.at("d_l").get<std::size_t>();
  model.d_v = j.at("d_v").get<std::size_t>();
  model.d_h = j.at("d_h").get<std::size_t>();
  const std::size_t rows1 = model.kind == ModelKind::linear ? model.d_v : model.d_h;
  if (model.d_l == 0 || model.d_v == 0 || rows1 == 0) {
    throw DataError("model: dimensions must be positive");
  }
  model.w1 = detail::unflatten(detail::json_vec(j, "w1"), rows1, model.d_l, "w1");
  model.b1 = detail::json_vec(j, "b1");
  if (model.kind == ModelKind::mlp) {
    model.w2 = detail::unflatten(detail::json_vec(j, "w2"), model.d_v, model.d_h, "w2");
    model.b2 = detail::json_vec(j, "b2");
  } else if (j.contains("w2") || j.contains("b2")) {
    throw DataError("model: linear kind must not carry a second layer");
  }
  validate_model(model);
  return model;
}

inline void save_model(const MapModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open model file for writing: " + path.string());
  out << model_to_json(model).dump(2) << '\n';
  if (!out.good()) throw DataError("failed writing model file: " + path.string());
}

inline MapModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("model " + path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace lexvis
