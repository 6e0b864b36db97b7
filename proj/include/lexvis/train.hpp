#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lexvis/error.hpp"
#include "lexvis/format.hpp"
#include "lexvis/model.hpp"
#include "lexvis/rng.hpp"
#include "lexvis/table.hpp"
#include "lexvis/vec.hpp"

namespace lexvis {

struct TrainConfig {
  double learning_rate = 0.1;
  double dropout_rate = 0.0;
  std::size_t epochs = 100;
  std::size_t batch_size = 64;
  std::uint64_t seed = 0;
  bool shuffle = true;
  std::size_t d_h = 300;        // hidden width, mlp kind only
  bool normalize_text = false;  // l2-normalize text vectors before pairing

  void validate() const {
    if (learning_rate <= 0.0 || !std::isfinite(learning_rate)) {
      throw ConfigError("learning_rate must be positive");
    }
    if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
      throw ConfigError("dropout_rate must lie in [0,1)");
    }
    if (epochs == 0) throw ConfigError("epochs must be positive");
    if (batch_size == 0) throw ConfigError("batch_size must be positive");
  }
};

struct TrainReport {
  std::vector<double> epoch_losses;  // mean training loss per epoch
  std::size_t examples_seen = 0;     // N, pairs per epoch
  double final_loss = 0.0;
};

// Loss(y, y_hat) = 1/2 * sum_i (y_hat_i - y_i)^2.
inline double mse_loss(const Vec& y_hat, const Vec& y) {
  check_same_dim(y_hat, y, "mse_loss");
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y_hat[i] - y[i];
    sum += d * d;
  }
  return 0.5 * sum;
}

using TrainPair = std::pair<Vec, Vec>;  // (language vector, visual vector)

// Gradient of the batch-mean loss, shaped exactly like the model it came from.
struct GradientSet {
  std::vector<Vec> w1;
  Vec b1;
  std::vector<Vec> w2;
  Vec b2;
};

namespace detail {

inline GradientSet zero_gradients(const MapModel& model) {
  GradientSet g;
  g.w1.assign(model.w1.size(), Vec(model.d_l, 0.0));
  g.b1.assign(model.b1.size(), 0.0);
  if (model.kind == ModelKind::mlp) {
    g.w2.assign(model.d_v, Vec(model.d_h, 0.0));
    g.b2.assign(model.d_v, 0.0);
  }
  return g;
}

// delta (length rows) times x^T (length cols), accumulated into w.
inline void add_outer(std::vector<Vec>& w, const Vec& delta, const Vec& x) {
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (delta[i] == 0.0) continue;
    Vec& row = w[i];
    for (std::size_t j = 0; j < x.size(); ++j) row[j] += delta[i] * x[j];
  }
}

}  // namespace detail

// Backpropagation of the batch-mean MSE loss. Dropout masks are drawn from
// `rng` in batch order, one forward pass per pair, matching forward_train.
// Returns the gradients and the batch-mean training loss.
inline std::pair<GradientSet, double> gradients(const MapModel& model,
                                                std::span<const TrainPair> batch,
                                                double dropout_rate, Rng& rng) {
  if (batch.empty()) throw DataError("gradients: empty batch");
  GradientSet grads = detail::zero_gradients(model);
  double loss_sum = 0.0;
  for (const auto& [x, y] : batch) {
    if (y.size() != model.d_v) {
      throw DataError("gradients: target has dim " + std::to_string(y.size()) +
                      ", model expects " + std::to_string(model.d_v));
    }
    ForwardCache cache = forward_train(model, x, dropout_rate, rng);
    loss_sum += mse_loss(cache.output, y);
    Vec delta(model.d_v);  // dLoss/d(output) = y_hat - y
    for (std::size_t i = 0; i < model.d_v; ++i) delta[i] = cache.output[i] - y[i];
    if (model.kind == ModelKind::linear) {
      detail::add_outer(grads.w1, delta, cache.x_dropped);
      for (std::size_t i = 0; i < model.d_v; ++i) grads.b1[i] += delta[i];
      continue;
    }
    detail::add_outer(grads.w2, delta, cache.hidden_dropped);
    for (std::size_t i = 0; i < model.d_v; ++i) grads.b2[i] += delta[i];
    Vec delta_z1(model.d_h, 0.0);
    for (std::size_t k = 0; k < model.d_h; ++k) {
      double back = 0.0;  // dLoss/d(hidden_dropped_k) routed back through the mask
      for (std::size_t i = 0; i < model.d_v; ++i) back += model.w2[i][k] * delta[i];
      const double h = cache.hidden[k];
      delta_z1[k] = back * cache.hidden_scale[k] * (1.0 - h * h);
    }
    detail::add_outer(grads.w1, delta_z1, cache.x_dropped);
    for (std::size_t k = 0; k < model.d_h; ++k) grads.b1[k] += delta_z1[k];
  }
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  for (Vec& row : grads.w1) {
    for (double& g : row) g *= inv_b;
  }
  for (double& g : grads.b1) g *= inv_b;
  for (Vec& row : grads.w2) {
    for (double& g : row) g *= inv_b;
  }
  for (double& g : grads.b2) g *= inv_b;
  return {std::move(grads), loss_sum * inv_b};
}

// theta <- theta - eta * dLoss/dtheta, returned as a new model.
inline MapModel sgd_step(MapModel model, const GradientSet& grads, double learning_rate) {
  if (grads.w1.size() != model.w1.size() || grads.b1.size() != model.b1.size() ||
      grads.w2.size() != model.w2.size() || grads.b2.size() != model.b2.size()) {
    throw DataError("sgd_step: gradient shape does not match model");
  }
  for (std::size_t i = 0; i < model.w1.size(); ++i) {
    check_same_dim(model.w1[i], grads.w1[i], "sgd_step");
    for (std::size_t j = 0; j < model.w1[i].size(); ++j) {
      model.w1[i][j] -= learning_rate * grads.w1[i][j];
    }
  }
  for (std::size_t i = 0; i < model.b1.size(); ++i) model.b1[i] -= learning_rate * grads.b1[i];
  for (std::size_t i = 0; i < model.w2.size(); ++i) {
    check_same_dim(model.w2[i], grads.w2[i], "sgd_step");
    for (std::size_t j = 0; j < model.w2[i].size(); ++j) {
      model.w2[i][j] -= learning_rate * grads.w2[i][j];
    }
  }
  for (std::size_t i = 0; i < model.b2.size(); ++i) model.b2[i] -= learning_rate * grads.b2[i];
  return model;
}

// Mean eval-mode loss over a batch (no dropout, no rng).
inline double batch_loss(const MapModel& model, std::span<const TrainPair> batch) {
  if (batch.empty()) throw DataError("batch_loss: empty batch");
  double sum = 0.0;
  for (const auto& [x, y] : batch) sum += mse_loss(forward_eval(model, x), y);
  return sum / static_cast<double>(batch.size());
}

// Training pairs: one (text, visual) pair per word in both vocabularies,
// in sorted word order.
inline std::vector<TrainPair> make_training_pairs(const VectorTable& text,
                                                  const VectorTable& visual,
                                                  bool normalize_text) {
  std::vector<TrainPair> pairs;
  for (const auto& [word, lvec] : text.entries) {
    auto it = visual.entries.find(word);
    if (it == visual.entries.end()) continue;
    pairs.emplace_back(normalize_text ? l2_normalize(lvec) : lvec, it->second);
  }
  if (pairs.empty()) {
    throw DataError("train: text and visual vocabularies do not intersect");
  }
  return pairs;
}

// SGD over the vocabulary intersection of the two tables. Deterministic for
// a fixed config: sub-seeds for init / shuffling / dropout are derived from
// config.seed, batches are contiguous slices of the per-epoch shuffle.
inline std::pair<MapModel, TrainReport> train(const VectorTable& text,
                                              const VectorTable& visual,
                                              ModelKind kind, const TrainConfig& config) {
  config.validate();
  std::vector<TrainPair> pairs = make_training_pairs(text, visual, config.normalize_text);
  const std::size_t n = pairs.size();
  MapModel model = init_model(kind, text.dim, visual.dim,
                              kind == ModelKind::mlp ? config.d_h : 0,
                              derive_seed(config.seed, 0));
  Rng shuffle_rng(derive_seed(config.seed, 1));
  Rng dropout_rng(derive_seed(config.seed, 2));
  TrainReport report;
  report.examples_seen = n;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle) shuffle_rng.shuffle(pairs);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t b = std::min(config.batch_size, n - start);
      std::span<const TrainPair> batch(pairs.data() + start, b);
      auto [grads, loss] = gradients(model, batch, config.dropout_rate, dropout_rng);
      model = sgd_step(std::move(model), grads, config.learning_rate);
      loss_sum += loss * static_cast<double>(b);
    }
    const double epoch_loss = loss_sum / static_cast<double>(n);
    if (!std::isfinite(epoch_loss)) {
      throw DivergenceError("training diverged: non-finite mean loss at epoch " +
                            std::to_string(epoch + 1) + " (learning_rate=" +
                            format_double(config.learning_rate) + ")");
    }
    report.epoch_losses.push_back(epoch_loss);
  }
  report.final_loss = report.epoch_losses.back();
  return {std::move(model), std::move(report)};
}

struct GradientCheckReport {
  std::vector<double> rel_errors;  // flat parameter order: w1, b1, w2, b2
  double max_rel_err = 0.0;
  std::size_t worst_index = 0;
  bool passed = false;
};

namespace detail {

inline std::vector<double*> parameter_pointers(MapModel& model) {
  std::vector<double*> ptrs;
  for (Vec& row : model.w1) {
    for (double& w : row) ptrs.push_back(&w);
  }
  for (double& b : model.b1) ptrs.push_back(&b);
  for (Vec& row : model.w2) {
    for (double& w : row) ptrs.push_back(&w);
  }
  for (double& b : model.b2) ptrs.push_back(&b);
  return ptrs;
}

}  // namespace detail

// Central-difference check of the analytic gradients, dropout disabled.
// Relative error per parameter: |a - n| / max(1, |a|, |n|).
inline GradientCheckReport gradient_check(const MapModel& model,
                                          std::span<const TrainPair> batch,
                                          double h, double tolerance) {
  if (h == 0.0 || !std::isfinite(h)) throw ConfigError("gradient_check: invalid step h");
  Rng unused(0);  // dropout_rate=0 draws nothing from it
  auto [grads, loss] = gradients(model, batch, 0.0, unused);
  (void)loss;
  MapModel probe = model;
  std::vector<double*> params = detail::parameter_pointers(probe);
  GradientCheckReport report;
  report.rel_errors.reserve(params.size());
  MapModel grads_as_model = model;  // same shapes; reuse the flat walk
  grads_as_model.w1 = grads.w1;
  grads_as_model.b1 = grads.b1;
  grads_as_model.w2 = grads.w2;
  grads_as_model.b2 = grads.b2;
  std::vector<double*> analytic = detail::parameter_pointers(grads_as_model);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = *params[i];
    *params[i] = saved + h;
    const double plus = batch_loss(probe, batch);
    *params[i] = saved - h;
    const double minus = batch_loss(probe, batch);
    *params[i] = saved;
    const double numeric = (plus - minus) / (2.0 * h);
    const double a = *analytic[i];
    const double rel = std::abs(a - numeric) /
                       std::max({1.0, std::abs(a), std::abs(numeric)});
    if (report.rel_errors.empty() || rel > report.max_rel_err) {
      report.max_rel_err = rel;
      report.worst_index = i;
    }
    report.rel_errors.push_back(rel);
  }
  report.passed = report.max_rel_err < tolerance;
  return report;
}

}  // namespace lexvis
