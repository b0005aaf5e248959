#include "freqclue/weighting.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "freqclue/error.hpp"
#include "oracles.hpp"

namespace freqclue {
namespace {

TEST(WeightMatrix, SixBySixExamples) {
  const auto w = build_weight_matrix(6, 6, std::sqrt(2.0));
  EXPECT_EQ(w(0, 0), 1.0);
  EXPECT_EQ(w(2, 2), std::sqrt(2.0));  // u+v = 4 = 2H/3, inclusive
  EXPECT_EQ(w(5, 5), 2.0);             // u+v = 10 > 4
  EXPECT_EQ(w(1, 0), 1.0);             // 1 < H/3 = 2
  EXPECT_EQ(w(1, 1), std::sqrt(2.0));  // 2 = H/3, inclusive
  EXPECT_EQ(w(2, 3), 2.0);             // 5 > 4
}

TEST(WeightMatrix, UnitBaseIsAllOnes) {
  const auto w = build_weight_matrix(9, 5, 1.0);
  for (std::size_t u = 0; u < 9; ++u)
    for (std::size_t v = 0; v < 5; ++v) EXPECT_EQ(w(u, v), 1.0);
}

TEST(WeightMatrix, ThreeByThreeEnumeration) {
  // u+v < 1: (0,0); 1 ≤ u+v ≤ 2: five cells; u+v > 2: three cells.
  const auto w = build_weight_matrix(3, 3);
  int counts[3] = {0, 0, 0};
  for (std::size_t u = 0; u < 3; ++u)
    for (std::size_t v = 0; v < 3; ++v) counts[w.exponent(u, v)]++;
  EXPECT_EQ(counts[0], 1);
  EXPECT_EQ(counts[1], 5);
  EXPECT_EQ(counts[2], 3);
  EXPECT_EQ(w.exponent(0, 0), 0);
  EXPECT_EQ(w.exponent(2, 0), 1);
  EXPECT_EQ(w.exponent(1, 2), 2);
}

TEST(WeightMatrix, DegenerateAndInvalid) {
  try {
    build_weight_matrix(2, 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateBand);
  }
  EXPECT_THROW(build_weight_matrix(6, 6, 0.0), Error);
  EXPECT_THROW(build_weight_matrix(6, 6, -1.0), Error);
}

TEST(WeightMatrix, BandsMatchInequalitiesAndAreMonotone) {
  for (std::size_t h : {3u, 4u, 5u, 6u, 8u, 10u, 12u, 17u}) {
    for (std::size_t w : {1u, 3u, 8u, 13u}) {
      const auto wm = build_weight_matrix(h, w);
      for (std::size_t u = 0; u < h; ++u) {
        for (std::size_t v = 0; v < w; ++v) {
          EXPECT_EQ(wm.exponent(u, v), oracle::naive_alpha(u, v, h)) << h << "x" << w << " (" << u << "," << v << ")";
          if (u + 1 < h) EXPECT_LE(wm.exponent(u, v), wm.exponent(u + 1, v));
          if (v + 1 < w) EXPECT_LE(wm.exponent(u, v), wm.exponent(u, v + 1));
        }
      }
    }
  }
}

TEST(WeightMatrix, BandsUseHeightOnly) {
  // Same height, different widths: identical α wherever both are defined.
  const auto narrow = build_weight_matrix(9, 4);
  const auto wide = build_weight_matrix(9, 20);
  for (std::size_t u = 0; u < 9; ++u)
    for (std::size_t v = 0; v < 4; ++v) EXPECT_EQ(narrow.exponent(u, v), wide.exponent(u, v));
}

TEST(WeightMatrix, BandMapText) {
  EXPECT_EQ(build_weight_matrix(3, 3).band_map(), "0 1 1\n1 1 2\n1 2 2\n");
}

TEST(ApplyWeights, IdentityAndBroadcast) {
  std::mt19937_64 rng(3);
  const Spectrum s = oracle::random_tensor(rng, 2, 3, 6, 6);
  EXPECT_EQ(apply_weights(s, build_weight_matrix(6, 6, 1.0)), s);

  const auto w = build_weight_matrix(6, 6);
  const Spectrum ones(2, 3, 6, 6, 1.0);
  const Spectrum out = apply_weights(ones, w);
  for (std::size_t n = 0; n < 2; ++n)
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t u = 0; u < 6; ++u)
        for (std::size_t v = 0; v < 6; ++v) EXPECT_EQ(out(n, c, u, v), w(u, v));
}

TEST(ApplyWeights, ElementwiseLoopOracleAndLinearity) {
  std::mt19937_64 rng(4);
  const auto w = build_weight_matrix(6, 6);
  const Spectrum x = oracle::random_tensor(rng, 1, 1, 6, 6);
  const Spectrum y = oracle::random_tensor(rng, 1, 1, 6, 6);
  const Spectrum wx = apply_weights(x, w);
  for (std::size_t u = 0; u < 6; ++u)
    for (std::size_t v = 0; v < 6; ++v)
      EXPECT_NEAR(wx(0, 0, u, v), std::pow(std::sqrt(2.0), oracle::naive_alpha(u, v, 6)) * x(0, 0, u, v), 1e-15)
          << u << "," << v;

  Spectrum combo = x;
  for (std::size_t i = 0; i < combo.size(); ++i) combo.values()[i] = 2.0 * x.values()[i] - 3.0 * y.values()[i];
  const Spectrum wc = apply_weights(combo, w);
  const Spectrum wy = apply_weights(y, w);
  for (std::size_t i = 0; i < wc.size(); ++i) {
    EXPECT_NEAR(wc.values()[i], 2.0 * wx.values()[i] - 3.0 * wy.values()[i], 1e-12);
  }
}

TEST(ApplyWeights, ShapeMismatch) {
  try {
    apply_weights(Spectrum(1, 1, 6, 6), build_weight_matrix(6, 5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kShape);
  }
}

}  // namespace
}  // namespace freqclue
