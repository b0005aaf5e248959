#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "freqclue/dataset.hpp"

namespace freqclue {

/// A labeled feature vector (fake = positive class).
struct LabeledFeature {
  std::vector<double> values;
  Label label = Label::kReal;
};

struct TrainConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::size_t epochs = 100;
  std::size_t batch_size = 16;
  std::size_t patience = 5;       // epochs without strict improvement before decay
  double decay_factor = 10.0;
  double min_learning_rate = 1e-7;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Adam with bias correction. One instance per parameter vector.
class AdamOptimizer {
 public:
  AdamOptimizer(std::size_t size, double beta1, double beta2, double epsilon);

  void step(std::span<double> params, std::span<const double> grad, double learning_rate);
  std::size_t steps() const noexcept { return t_; }

 private:
  double beta1_;
  double beta2_;
  double epsilon_;
  std::size_t t_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

struct LinearHead {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> mean;  // standardization, from the training set
  std::vector<double> stddev;
  bool trained = false;
  std::string fingerprint;  // feature config fingerprint the head was trained on

  std::size_t dim() const noexcept { return weights.size(); }
  std::vector<double> standardize(std::span<const double> x) const;
  /// w·x̂ + b
  double logit(std::span<const double> x) const;
};

/// Mean binary cross-entropy of sigmoid(w·x + b) over already-standardized
/// rows, with its gradient (grad_w, grad_b).
struct LossGradient {
  double loss = 0.0;
  std::vector<double> grad_w;
  double grad_b = 0.0;
};
LossGradient bce_loss_gradient(std::span<const double> weights, double bias,
                               const std::vector<std::vector<double>>& rows, std::span<const int> targets);

/// Per-dimension train-set mean and std (std below 1e-12 is replaced by 1).
void fit_standardization(LinearHead& head, const std::vector<LabeledFeature>& data);

struct TrainHistory {
  std::vector<double> epoch_loss;  // training loss after each epoch
  std::vector<double> monitor_accuracy;
  std::vector<double> learning_rate;
  std::vector<double> step_loss;   // full-training-set loss before each update, then after the last
};

/// Trains a logistic head with Adam. `validation` drives the plateau rule
/// (training data is monitored when it is empty). Throws kDegenerateData if
/// either class is missing and kShape for inconsistent dimensions.
LinearHead train(const std::vector<LabeledFeature>& data, const TrainConfig& config,
                 const std::vector<LabeledFeature>& validation = {}, TrainHistory* history = nullptr,
                 bool record_step_loss = false);

double sigmoid(double z);

/// sigmoid(w·x̂ + b); throws kShape on dimension mismatch.
double score(const LinearHead& head, std::span<const double> feature);

void write_head(const std::filesystem::path& path, const LinearHead& head, const TrainConfig& config);
LinearHead read_head(const std::filesystem::path& path);

}  // namespace freqclue
