#include "freqclue/fta.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "freqclue/error.hpp"
#include "oracles.hpp"

namespace freqclue {
namespace {

TEST(ChannelL2, SingleChannelIsAbs) {
  std::mt19937_64 rng(1);
  const Spectrum s = oracle::random_tensor(rng, 2, 1, 4, 4);
  const Tensor3 a = channel_l2(s);
  for (std::size_t n = 0; n < 2; ++n)
    for (std::size_t h = 0; h < 4; ++h)
      for (std::size_t w = 0; w < 4; ++w) EXPECT_EQ(a(n, h, w), std::abs(s(n, 0, h, w)));
}

TEST(ChannelL2, ThreeFourFive) {
  Spectrum s(1, 2, 1, 1);
  s(0, 0, 0, 0) = 3.0;
  s(0, 1, 0, 0) = -4.0;
  EXPECT_EQ(channel_l2(s)(0, 0, 0), 5.0);
}

TEST(ChannelL2, MatchesLoopOracle) {
  std::mt19937_64 rng(2);
  const Spectrum s = oracle::random_tensor(rng, 2, 3, 4, 4);
  EXPECT_LT(oracle::max_abs_diff(channel_l2(s).values(), oracle::naive_channel_l2(s).values()), 1e-15);
}

TEST(SpatialNormalize, UniformOneHotZero) {
  Tensor3 a(3, 4, 4, 0.0);
  for (std::size_t i = 0; i < 16; ++i) a.slice(0)[i] = 2.5;
  a(1, 2, 3) = 7.0;
  const Tensor3 out = spatial_normalize(a);
  for (double v : out.slice(0)) EXPECT_NEAR(v, 1.0 / 16.0, 1e-12);
  EXPECT_NEAR(out(1, 2, 3), 1.0, 1e-12);
  double rest = 0.0;
  for (double v : out.slice(1)) rest += v;
  EXPECT_NEAR(rest, 1.0, 1e-12);
  for (double v : out.slice(2)) {
    EXPECT_FALSE(std::isnan(v));
    EXPECT_EQ(v, 0.0);
  }
}

TEST(BlockScores, UniformAndConcentrated) {
  Tensor3 a(2, 8, 8, 1.0 / 64.0);
  for (double& v : a.slice(1)) v = 0.0;
  a(1, 0, 0) = 0.25;
  a(1, 1, 1) = 0.75;
  const Plane s = block_scores(a, BlockGrid{4, 4});
  for (std::size_t k = 0; k < 16; ++k) EXPECT_NEAR(s(0, k), 1.0 / 16.0, 1e-15);
  EXPECT_EQ(s(1, 0), 1.0);
  for (std::size_t k = 1; k < 16; ++k) EXPECT_EQ(s(1, k), 0.0);
}

TEST(BlockScores, MatchesTileSumOracleAndRejectsBadGrid) {
  std::mt19937_64 rng(3);
  Tensor3 a(3, 8, 12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double& v : a.values()) v = u(rng);
  const Plane s = block_scores(a, BlockGrid{2, 3});
  const auto ref = oracle::naive_block_scores(a, 2, 3);
  for (std::size_t n = 0; n < 3; ++n)
    for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(s(n, k), ref[n][k], 1e-14);
  EXPECT_THROW(block_scores(a, BlockGrid{3, 3}), Error);
}

TEST(FrameL1, Examples) {
  Plane rows(3, 4, 0.0);
  rows(0, 0) = 2;
  rows(0, 1) = 2;
  for (std::size_t k = 0; k < 4; ++k) rows(1, k) = 0.25;
  const AttentionMap a = frame_l1(rows);
  EXPECT_NEAR(a(0, 0), 0.5, 1e-12);
  EXPECT_NEAR(a(0, 1), 0.5, 1e-12);
  EXPECT_EQ(a(0, 2), 0.0);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(a(1, k), 0.25, 1e-12);
    EXPECT_EQ(a(2, k), 0.0);
  }
}

TEST(FrameL1, MatchesRowDivisionOracle) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  Plane rows(5, 7);
  std::vector<std::vector<double>> ref(5, std::vector<double>(7));
  for (std::size_t n = 0; n < 5; ++n)
    for (std::size_t k = 0; k < 7; ++k) ref[n][k] = rows(n, k) = u(rng);
  ref = oracle::naive_frame_l1(ref, kDefaultEpsilon);
  const AttentionMap a = frame_l1(rows);
  for (std::size_t n = 0; n < 5; ++n)
    for (std::size_t k = 0; k < 7; ++k) EXPECT_NEAR(a(n, k), ref[n][k], 1e-15);
}

TEST(Attention, IdenticalFramesIdenticalRows) {
  std::mt19937_64 rng(5);
  const Spectrum one = oracle::random_tensor(rng, 1, 3, 8, 8);
  Spectrum s(3, 3, 8, 8);
  for (std::size_t n = 0; n < 3; ++n)
    for (std::size_t c = 0; c < 3; ++c) s.set_plane(n, c, one.copy_plane(0, c));
  const AttentionMap a = attention(s, BlockGrid{2, 2});
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(a(1, k), a(0, k));
    EXPECT_EQ(a(2, k), a(0, k));
  }
}

TEST(Attention, MassInOneTile) {
  Spectrum s(2, 1, 8, 8, 0.0);
  s(0, 0, 5, 6) = -4.0;  // tile r=2, c=3 under a 4x4 grid → k = 11
  s(0, 0, 4, 7) = 1.0;
  for (double& v : s.plane(1, 0)) v = 1.0;
  const AttentionMap a = attention(s, BlockGrid{4, 4});
  EXPECT_NEAR(a(0, 11), 1.0, 1e-11);  // ε enters twice
  for (std::size_t k = 0; k < 16; ++k) {
    if (k != 11) {
      EXPECT_EQ(a(0, k), 0.0);
    }
  }
}

TEST(Attention, MatchesComposedOracles) {
  std::mt19937_64 rng(6);
  const Spectrum s = oracle::random_tensor(rng, 2, 2, 8, 8);
  const auto ref = oracle::naive_frame_l1(
      oracle::naive_block_scores(oracle::naive_spatial_normalize(oracle::naive_channel_l2(s), kDefaultEpsilon), 4, 4),
      kDefaultEpsilon);
  const AttentionMap a = attention(s, BlockGrid{4, 4});
  for (std::size_t n = 0; n < 2; ++n)
    for (std::size_t k = 0; k < 16; ++k) EXPECT_NEAR(a(n, k), ref[n][k], 1e-15);
}

TEST(AttentionProperties, StochasticScaleInvariantLocal) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Spectrum s = oracle::random_tensor(rng, 4, 3, 8, 8, -10.0, 10.0);
    const AttentionMap a = attention(s, BlockGrid{4, 4});
    for (std::size_t n = 0; n < 4; ++n) {
      double sum = 0.0;
      for (std::size_t k = 0; k < 16; ++k) {
        EXPECT_GE(a(n, k), 0.0);
        sum += a(n, k);
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }

    // Scale frame 2 only; permute frames 0 and 3.
    Spectrum t = s;
    const double lambda = scale(rng);
    for (std::size_t c = 0; c < 3; ++c)
      for (double& v : t.plane(2, c)) v *= lambda;
    for (std::size_t c = 0; c < 3; ++c) {
      t.set_plane(0, c, s.copy_plane(3, c));
      t.set_plane(3, c, s.copy_plane(0, c));
    }
    const AttentionMap b = attention(t, BlockGrid{4, 4});
    for (std::size_t k = 0; k < 16; ++k) {
      EXPECT_NEAR(b(2, k), a(2, k), 1e-9);
      EXPECT_EQ(b(1, k), a(1, k));
      EXPECT_EQ(b(0, k), a(3, k));
      EXPECT_EQ(b(3, k), a(0, k));
    }
  }
}

}  // namespace
}  // namespace freqclue
