#include "freqclue/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numeric>
#include <random>

#include "freqclue/error.hpp"
#include "freqclue/fileutil.hpp"

namespace freqclue {

using nlohmann::json;

void TrainConfig::validate() const {
  if (!(beta1 > 0.0 && beta1 < 1.0)) throw Error(ErrorKind::kConfig, "beta1 must be in (0, 1)");
  if (!(beta2 > 0.0 && beta2 < 1.0)) throw Error(ErrorKind::kConfig, "beta2 must be in (0, 1)");
  if (!(learning_rate > 0.0)) throw Error(ErrorKind::kConfig, "learning rate must be > 0");
  if (!(adam_epsilon > 0.0)) throw Error(ErrorKind::kConfig, "adam epsilon must be > 0");
  if (batch_size == 0) throw Error(ErrorKind::kConfig, "batch size must be >= 1");
  if (!(decay_factor > 0.0)) throw Error(ErrorKind::kConfig, "decay factor must be > 0");
}

AdamOptimizer::AdamOptimizer(std::size_t size, double beta1, double beta2, double epsilon)
    : beta1_(beta1), beta2_(beta2), epsilon_(epsilon), m_(size, 0.0), v_(size, 0.0) {}

void AdamOptimizer::step(std::span<double> params, std::span<const double> grad, double learning_rate) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw Error(ErrorKind::kShape, "adam parameter/gradient size mismatch");
  }
  ++t_;
  const double correction1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double correction2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    const double m_hat = m_[i] / correction1;
    const double v_hat = v_[i] / correction2;
    params[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + epsilon_);
  }
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

// log(1 + e^z), stable for large |z|.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double monitor_accuracy(std::span<const double> w, double b, const std::vector<std::vector<double>>& rows,
                        std::span<const int> targets) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    correct += (sigmoid(dot(w, rows[i]) + b) >= 0.5) == (targets[i] == 1);
  }
  return rows.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(rows.size());
}

}  // namespace

LossGradient bce_loss_gradient(std::span<const double> weights, double bias,
                               const std::vector<std::vector<double>>& rows, std::span<const int> targets) {
  LossGradient out;
  out.grad_w.assign(weights.size(), 0.0);
  if (rows.empty()) return out;
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double z = dot(weights, rows[i]) + bias;
    const double y = targets[i];
    out.loss += (softplus(z) - y * z) * inv_n;
    const double residual = (sigmoid(z) - y) * inv_n;
    for (std::size_t d = 0; d < weights.size(); ++d) out.grad_w[d] += residual * rows[i][d];
    out.grad_b += residual;
  }
  return out;
}

std::vector<double> LinearHead::standardize(std::span<const double> x) const {
  if (x.size() != weights.size()) {
    throw Error(ErrorKind::kShape, "feature dimension " + std::to_string(x.size()) + " does not match head dimension " +
                                       std::to_string(weights.size()));
  }
  std::vector<double> out(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) out[d] = (x[d] - mean[d]) / stddev[d];
  return out;
}

double LinearHead::logit(std::span<const double> x) const { return dot(weights, standardize(x)) + bias; }

double score(const LinearHead& head, std::span<const double> feature) { return sigmoid(head.logit(feature)); }

void fit_standardization(LinearHead& head, const std::vector<LabeledFeature>& data) {
  const std::size_t dim = data.front().values.size();
  head.mean.assign(dim, 0.0);
  head.stddev.assign(dim, 0.0);
  const double n = static_cast<double>(data.size());
  for (const auto& s : data) {
    for (std::size_t d = 0; d < dim; ++d) head.mean[d] += s.values[d] / n;
  }
  for (const auto& s : data) {
    for (std::size_t d = 0; d < dim; ++d) head.stddev[d] += (s.values[d] - head.mean[d]) * (s.values[d] - head.mean[d]) / n;
  }
  for (double& sd : head.stddev) {
    sd = std::sqrt(sd);
    if (!(sd > 1e-12)) sd = 1.0;
  }
}

LinearHead train(const std::vector<LabeledFeature>& data, const TrainConfig& config,
                 const std::vector<LabeledFeature>& validation, TrainHistory* history, bool record_step_loss) {
  config.validate();
  if (data.empty()) throw Error(ErrorKind::kDegenerateData, "training set is empty");
  const std::size_t dim = data.front().values.size();
  std::size_t fakes = 0;
  for (const auto& s : data) {
    if (s.values.size() != dim) throw Error(ErrorKind::kShape, "training features have differing dimensions");
    fakes += s.label == Label::kFake;
  }
  if (fakes == 0 || fakes == data.size()) {
    throw Error(ErrorKind::kDegenerateData, "training set needs both real and fake samples");
  }
  for (const auto& s : validation) {
    if (s.values.size() != dim) throw Error(ErrorKind::kShape, "validation features have the wrong dimension");
  }

  LinearHead head;
  head.weights.assign(dim, 0.0);
  fit_standardization(head, data);
  head.trained = config.epochs > 0;

  std::vector<std::vector<double>> rows;
  std::vector<int> targets;
  for (const auto& s : data) {
    rows.push_back(head.standardize(s.values));
    targets.push_back(s.label == Label::kFake ? 1 : 0);
  }
  std::vector<std::vector<double>> val_rows;
  std::vector<int> val_targets;
  for (const auto& s : validation) {
    val_rows.push_back(head.standardize(s.values));
    val_targets.push_back(s.label == Label::kFake ? 1 : 0);
  }
  const auto& mon_rows = validation.empty() ? rows : val_rows;
  const auto& mon_targets = validation.empty() ? targets : val_targets;

  // params = [w..., b]
  std::vector<double> params(dim + 1, 0.0);
  AdamOptimizer adam(dim + 1, config.beta1, config.beta2, config.adam_epsilon);
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);

  double lr = config.learning_rate;
  double best_accuracy = -1.0;
  std::size_t stale = 0;
  std::vector<std::vector<double>> batch_rows;
  std::vector<int> batch_targets;
  std::vector<double> grad(dim + 1);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch_rows.clear();
      batch_targets.clear();
      for (std::size_t i = start; i < end; ++i) {
        batch_rows.push_back(rows[order[i]]);
        batch_targets.push_back(targets[order[i]]);
      }
      const std::span<const double> w(params.data(), dim);
      if (history && record_step_loss) {
        history->step_loss.push_back(bce_loss_gradient(w, params[dim], rows, targets).loss);
      }
      const LossGradient lg = bce_loss_gradient(w, params[dim], batch_rows, batch_targets);
      std::copy(lg.grad_w.begin(), lg.grad_w.end(), grad.begin());
      grad[dim] = lg.grad_b;
      adam.step(params, grad, lr);
    }

    const std::span<const double> w(params.data(), dim);
    const double acc = monitor_accuracy(w, params[dim], mon_rows, mon_targets);
    if (acc > best_accuracy) {
      best_accuracy = acc;
      stale = 0;
    } else if (++stale >= config.patience) {
      lr = std::max(config.min_learning_rate, lr / config.decay_factor);
      stale = 0;
    }
    if (history) {
      history->epoch_loss.push_back(bce_loss_gradient(w, params[dim], rows, targets).loss);
      history->monitor_accuracy.push_back(acc);
      history->learning_rate.push_back(lr);
    }
  }
  if (history && record_step_loss) {
    history->step_loss.push_back(
        bce_loss_gradient(std::span<const double>(params.data(), dim), params[dim], rows, targets).loss);
  }

  std::copy(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(dim), head.weights.begin());
  head.bias = params[dim];
  return head;
}

void write_head(const std::filesystem::path& path, const LinearHead& head, const TrainConfig& config) {
  const json cfg{{"learning_rate", config.learning_rate}, {"beta1", config.beta1},
                 {"beta2", config.beta2},                 {"adam_epsilon", config.adam_epsilon},
                 {"epochs", config.epochs},               {"batch_size", config.batch_size},
                 {"patience", config.patience},           {"decay_factor", config.decay_factor},
                 {"min_learning_rate", config.min_learning_rate}, {"seed", config.seed}};
  const json j{{"dim", head.dim()},       {"weights", head.weights}, {"bias", head.bias},
               {"mean", head.mean},       {"std", head.stddev},      {"trained", head.trained},
               {"fingerprint", head.fingerprint}, {"train_config", cfg},
               {"train_fingerprint", fingerprint(cfg.dump())}};
  write_file_atomic(path, j.dump(2) + "\n");
}

LinearHead read_head(const std::filesystem::path& path) {
  try {
    const json j = json::parse(read_file(path));
    LinearHead head;
    head.weights = j.at("weights").get<std::vector<double>>();
    head.bias = j.at("bias").get<double>();
    head.mean = j.at("mean").get<std::vector<double>>();
    head.stddev = j.at("std").get<std::vector<double>>();
    head.trained = j.value("trained", true);
    head.fingerprint = j.value("fingerprint", "");
    const std::size_t dim = j.at("dim").get<std::size_t>();
    if (head.weights.size() != dim || head.mean.size() != dim || head.stddev.size() != dim) {
      throw Error(ErrorKind::kFormat, "head '" + path.string() + "' has inconsistent dimensions");
    }
    for (double sd : head.stddev) {
      if (!(sd > 0.0)) throw Error(ErrorKind::kFormat, "head '" + path.string() + "' has a non-positive std");
    }
    return head;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kFormat, "malformed head file '" + path.string() + "': " + e.what());
  }
}

}  // namespace freqclue
