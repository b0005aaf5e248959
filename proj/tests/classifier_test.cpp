#include "freqclue/classifier.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "freqclue/error.hpp"
#include "freqclue/metrics.hpp"
#include "scratch_dir.hpp"

namespace freqclue {
namespace {

using freqclue::testing::ScratchDir;

std::vector<LabeledFeature> two_blobs(std::size_t per_class, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<LabeledFeature> out;
  for (std::size_t i = 0; i < per_class; ++i) {
    out.push_back({{3.0 + noise(rng), 3.0 + noise(rng)}, Label::kFake});
    out.push_back({{-3.0 + noise(rng), -3.0 + noise(rng)}, Label::kReal});
  }
  return out;
}

TEST(Sigmoid, Examples) {
  EXPECT_EQ(sigmoid(0.0), 0.5);
  EXPECT_GT(sigmoid(20.0), 0.9999);
  EXPECT_LT(sigmoid(-20.0), 1e-4);
  EXPECT_TRUE(std::isfinite(sigmoid(-1000.0)));
  EXPECT_EQ(sigmoid(1000.0), 1.0);
}

TEST(Train, SeparableBlobsReachFullAccuracy) {
  const auto data = two_blobs(100, 0.1, 1);
  TrainConfig cfg;
  cfg.epochs = 20;
  const LinearHead head = train(data, cfg);
  std::vector<ScoredLabel> scored;
  for (const auto& d : data) scored.push_back({score(head, d.values), d.label});
  EXPECT_EQ(accuracy(scored), 1.0);
  EXPECT_EQ(auc(scored), 1.0);
  EXPECT_TRUE(head.trained);
}

TEST(Train, ZeroEpochsGivesNeutralScores) {
  TrainConfig cfg;
  cfg.epochs = 0;
  const LinearHead head = train(two_blobs(5, 0.1, 2), cfg);
  EXPECT_EQ(score(head, std::vector<double>{10.0, -4.0}), 0.5);
}

TEST(Train, DegenerateAndShapeErrors) {
  std::vector<LabeledFeature> one_class{{{1.0}, Label::kReal}, {{2.0}, Label::kReal}};
  try {
    train(one_class, TrainConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateData);
  }
  std::vector<LabeledFeature> ragged{{{1.0}, Label::kReal}, {{2.0, 3.0}, Label::kFake}};
  EXPECT_THROW(train(ragged, TrainConfig{}), Error);
  const LinearHead head = train(two_blobs(3, 0.1, 3), TrainConfig{});
  EXPECT_THROW(score(head, std::vector<double>{1.0}), Error);
}

TEST(Train, DeterministicForFixedSeed) {
  const auto data = two_blobs(20, 1.0, 4);
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.seed = 9;
  const LinearHead a = train(data, cfg), b = train(data, cfg);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
}

TEST(LossGradient, MatchesCentralDifferences) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<std::vector<double>> rows(12, std::vector<double>(4));
  std::vector<int> targets(12);
  for (std::size_t i = 0; i < 12; ++i) {
    for (double& v : rows[i]) v = n01(rng);
    targets[i] = static_cast<int>(i % 2);
  }
  std::vector<double> w{0.3, -0.7, 0.1, 0.5};
  const double b = -0.2;
  const auto lg = bce_loss_gradient(w, b, rows, targets);
  const double h = 1e-5;
  for (std::size_t j = 0; j < w.size(); ++j) {
    auto wp = w, wm = w;
    wp[j] += h;
    wm[j] -= h;
    const double fd = (bce_loss_gradient(wp, b, rows, targets).loss - bce_loss_gradient(wm, b, rows, targets).loss) /
                      (2 * h);
    EXPECT_LT(std::abs(fd - lg.grad_w[j]) / std::max(1e-8, std::abs(fd) + std::abs(lg.grad_w[j])), 1e-5) << j;
  }
  const double fd_b =
      (bce_loss_gradient(w, b + h, rows, targets).loss - bce_loss_gradient(w, b - h, rows, targets).loss) / (2 * h);
  EXPECT_LT(std::abs(fd_b - lg.grad_b) / (std::abs(fd_b) + std::abs(lg.grad_b)), 1e-5);
}

TEST(Train, FullBatchLossDecreasesMonotonically) {
  const auto data = two_blobs(16, 1.5, 6);
  TrainConfig cfg;
  cfg.batch_size = data.size();
  cfg.learning_rate = 1e-2;
  cfg.epochs = 30;
  TrainHistory hist;
  train(data, cfg, {}, &hist, true);
  ASSERT_EQ(hist.step_loss.size(), 31u);
  for (std::size_t i = 1; i < hist.step_loss.size(); ++i) EXPECT_LT(hist.step_loss[i], hist.step_loss[i - 1]) << i;
}

TEST(Train, PlateauDecaysLearningRateWithFloor) {
  // Perfectly separated data saturates monitoring accuracy at once, so the
  // rate drops by 10× every 5 stale epochs until it reaches the floor.
  const auto data = two_blobs(8, 0.01, 7);
  TrainConfig cfg;
  cfg.learning_rate = 1e-4;
  cfg.epochs = 40;
  TrainHistory hist;
  train(data, cfg, {}, &hist);
  ASSERT_EQ(hist.learning_rate.size(), 40u);
  EXPECT_EQ(hist.learning_rate.front(), 1e-4);
  for (std::size_t i = 1; i < 40; ++i) EXPECT_LE(hist.learning_rate[i], hist.learning_rate[i - 1]);
  EXPECT_LT(hist.learning_rate.back(), 1e-4);
  EXPECT_GE(hist.learning_rate.back(), cfg.min_learning_rate);
}

TEST(Adam, TinyEpsilonStepsAreSignSized) {
  // At t=1 the bias-corrected update is lr·g/(|g| + ε).
  AdamOptimizer opt(3, 0.9, 0.999, 1e-8);
  std::vector<double> p{0.0, 0.0, 0.0};
  const std::vector<double> g{5.0, -0.01, 1e3};
  opt.step(p, g, 1e-3);
  EXPECT_NEAR(p[0], -1e-3, 1e-9);
  EXPECT_NEAR(p[1], 1e-3, 1e-8);
  EXPECT_NEAR(p[2], -1e-3, 1e-9);
  EXPECT_EQ(opt.steps(), 1u);
}

TEST(Adam, VanishingMomentaGiveSignStepsOnQuadratic) {
  // Minimize ½·Σ a_i·p_i²; with β1 = β2 = 1e-8 every step is ≈ −lr·sign(∇).
  AdamOptimizer opt(3, 1e-8, 1e-8, 1e-12);
  const std::vector<double> a{1.0, 4.0, 0.25};
  std::vector<double> p{2.0, -3.0, 5.0};
  const double lr = 1e-2;
  for (int step = 0; step < 50; ++step) {
    std::vector<double> grad(3);
    for (std::size_t i = 0; i < 3; ++i) grad[i] = a[i] * p[i];
    const auto before = p;
    opt.step(p, grad, lr);
    for (std::size_t i = 0; i < 3; ++i) {
      const double expected = before[i] - lr * (grad[i] > 0 ? 1.0 : -1.0);
      EXPECT_NEAR(p[i], expected, 1e-6) << "step " << step << " dim " << i;
    }
  }
}

TEST(Adam, MatchesClosedFormFirstTwoSteps) {
  AdamOptimizer opt(1, 0.9, 0.999, 0.0);
  std::vector<double> p{1.0};
  opt.step(p, std::vector<double>{2.0}, 0.1);
  opt.step(p, std::vector<double>{-1.0}, 0.1);
  const double m = 0.9 * (0.1 * 2.0) + 0.1 * -1.0;
  const double v = 0.999 * (0.001 * 4.0) + 0.001 * 1.0;
  const double m_hat = m / (1 - 0.81), v_hat = v / (1 - 0.999 * 0.999);
  EXPECT_NEAR(p[0], 1.0 - 0.1 - 0.1 * m_hat / std::sqrt(v_hat), 1e-12);
}

TEST(Head, StandardizationAndJsonRoundTrip) {
  ScratchDir dir;
  std::vector<LabeledFeature> data{{{1.0, 10.0}, Label::kReal}, {{3.0, 10.0}, Label::kFake}};
  LinearHead head;
  fit_standardization(head, data);
  EXPECT_EQ(head.mean, (std::vector<double>{2.0, 10.0}));
  EXPECT_EQ(head.stddev[0], 1.0);
  EXPECT_EQ(head.stddev[1], 1.0);  // constant column falls back to 1

  head.weights = {0.25, -1.0 / 3.0};
  head.bias = 20.0;
  head.trained = true;
  head.fingerprint = "00ff00ff00ff00ff";
  EXPECT_GT(score(head, std::vector<double>{2.0, 10.0}), 0.9999);
  write_head(dir / "head.json", head, TrainConfig{});
  const LinearHead back = read_head(dir / "head.json");
  EXPECT_EQ(back.weights, head.weights);
  EXPECT_EQ(back.bias, head.bias);
  EXPECT_EQ(back.mean, head.mean);
  EXPECT_EQ(back.stddev, head.stddev);
  EXPECT_EQ(back.fingerprint, head.fingerprint);
  EXPECT_THROW(read_head(dir / "nope.json"), Error);
}

TEST(TrainConfig, Validate) {
  TrainConfig c;
  c.learning_rate = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c = TrainConfig{};
  c.batch_size = 0;
  EXPECT_THROW(c.validate(), Error);
  c = TrainConfig{};
  c.beta2 = 1.0;
  EXPECT_THROW(c.validate(), Error);
}

}  // namespace
}  // namespace freqclue
