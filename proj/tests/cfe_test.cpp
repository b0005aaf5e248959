#include "freqclue/cfe.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "freqclue/error.hpp"
#include "oracles.hpp"

namespace freqclue {
namespace {

Spectrum ramp8x8() {
  Spectrum s(1, 1, 8, 8);
  std::iota(s.values().begin(), s.values().end(), 0.0);
  return s;
}

TEST(BlockGrid, Parse) {
  EXPECT_EQ(BlockGrid::parse("4x4"), (BlockGrid{4, 4}));
  EXPECT_EQ(BlockGrid::parse("2X3"), (BlockGrid{2, 3}));
  EXPECT_EQ(BlockGrid::parse("2x3").blocks(), 6u);
  EXPECT_THROW(BlockGrid::parse("4"), Error);
  EXPECT_THROW(BlockGrid::parse("0x4"), Error);
  EXPECT_THROW(BlockGrid::parse("4xa"), Error);
}

TEST(PartitionBlocks, RowMajorTiles) {
  const auto view = partition_blocks(8, 8, BlockGrid{4, 4});
  EXPECT_EQ(view.blocks(), 16u);
  EXPECT_EQ(view.tile_rows(), 2u);
  EXPECT_EQ(view.tile_cols(), 2u);
  const Tile t0 = view.tile(0);
  EXPECT_EQ(t0.row0, 0u);
  EXPECT_EQ(t0.col0, 0u);
  const Tile t5 = view.tile(5);  // r=1, c=1
  EXPECT_EQ(t5.row0, 2u);
  EXPECT_EQ(t5.col0, 2u);

  const auto coarse = partition_blocks(8, 8, BlockGrid{2, 2});
  EXPECT_EQ(coarse.blocks(), 4u);
  EXPECT_EQ(coarse.tile_rows(), 4u);
}

TEST(PartitionBlocks, NonDivisibleNamesDimensions) {
  try {
    partition_blocks(9, 8, BlockGrid{4, 4});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPartition);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("9"), std::string::npos);
    EXPECT_NE(msg.find("8"), std::string::npos);
  }
}

TEST(Compact, RampMaximaAreBottomRightCorners) {
  const auto out = compact(ramp8x8(), BlockGrid{4, 4});
  EXPECT_EQ(out.values(0, 0, 0), 9.0);
  for (std::size_t k = 0; k < 16; ++k) {
    const std::size_t r = k / 4, c = k % 4;
    EXPECT_EQ(out.values(0, 0, k), static_cast<double>((2 * r + 1) * 8 + 2 * c + 1));
  }
  EXPECT_EQ(out.reduction, Reduction::kMax);
}

TEST(Compact, ConstantPlaneAnyReduction) {
  const Spectrum s(2, 3, 8, 8, 7.0);
  for (auto red : {Reduction::kMax, Reduction::kMin, Reduction::kAvg, Reduction::kAbsMax}) {
    for (BlockGrid g : {BlockGrid{1, 1}, BlockGrid{2, 2}, BlockGrid{4, 2}, BlockGrid{8, 8}}) {
      const auto out = compact(s, g, red);
      EXPECT_EQ(out.values.dims(), (std::array<std::size_t, 3>{2, 3, g.blocks()}));
      for (double v : out.values.values()) EXPECT_EQ(v, 7.0);
    }
  }
}

TEST(Compact, MatchesTileScanOracle) {
  std::mt19937_64 rng(11);
  const Spectrum s = oracle::random_tensor(rng, 1, 2, 8, 8);
  EXPECT_EQ(compact(s, BlockGrid{2, 2}, Reduction::kMax).values,
            oracle::naive_compact(s, 2, 2, oracle::Reduce::kMax));
  EXPECT_EQ(compact(s, BlockGrid{2, 4}, Reduction::kMin).values,
            oracle::naive_compact(s, 2, 4, oracle::Reduce::kMin));
  const auto avg = compact(s, BlockGrid{4, 4}, Reduction::kAvg).values;
  const auto ref = oracle::naive_compact(s, 4, 4, oracle::Reduce::kAvg);
  EXPECT_LT(oracle::max_abs_diff(avg.values(), ref.values()), 1e-15);
}

TEST(Compact, AbsMaxUsesMagnitude) {
  Spectrum s(1, 1, 2, 2, 0.5);
  s(0, 0, 1, 1) = -3.0;
  EXPECT_EQ(compact(s, BlockGrid{1, 1}, Reduction::kAbsMax).values(0, 0, 0), 3.0);
  EXPECT_EQ(compact(s, BlockGrid{1, 1}, Reduction::kMax).values(0, 0, 0), 0.5);
}

TEST(Compact, PropagatesPartitionError) {
  EXPECT_THROW(compact(Spectrum(1, 1, 9, 8), BlockGrid{4, 4}), Error);
}

// Properties over seeded random spectra.
TEST(CompactProperties, PermutationDominanceMonotonicity) {
  std::mt19937_64 rng(99);
  const BlockGrid grid{2, 2};
  for (int trial = 0; trial < 50; ++trial) {
    Spectrum s = oracle::random_tensor(rng, 2, 2, 8, 8, -5.0, 5.0);
    const auto mx = compact(s, grid, Reduction::kMax).values;
    const auto mn = compact(s, grid, Reduction::kMin).values;
    const auto av = compact(s, grid, Reduction::kAvg).values;
    for (std::size_t i = 0; i < mx.size(); ++i) {
      EXPECT_GE(mx.values()[i], av.values()[i]);
      EXPECT_GE(av.values()[i], mn.values()[i]);
    }

    // Shuffle inside tile (r=1, c=0) of every plane.
    Spectrum shuffled = s;
    for (std::size_t n = 0; n < 2; ++n) {
      for (std::size_t c = 0; c < 2; ++c) {
        std::vector<double> vals;
        for (std::size_t y = 4; y < 8; ++y)
          for (std::size_t x = 0; x < 4; ++x) vals.push_back(s(n, c, y, x));
        std::shuffle(vals.begin(), vals.end(), rng);
        std::size_t i = 0;
        for (std::size_t y = 4; y < 8; ++y)
          for (std::size_t x = 0; x < 4; ++x) shuffled(n, c, y, x) = vals[i++];
      }
    }
    EXPECT_EQ(compact(shuffled, grid, Reduction::kMax).values, mx);
    EXPECT_EQ(compact(shuffled, grid, Reduction::kMin).values, mn);
    EXPECT_LT(oracle::max_abs_diff(compact(shuffled, grid, Reduction::kAvg).values.values(), av.values()), 1e-12);

    Spectrum raised = s;
    std::uniform_real_distribution<double> bump(0.0, 1.0);
    for (double& v : raised.values()) v += bump(rng);
    const auto mx2 = compact(raised, grid, Reduction::kMax).values;
    for (std::size_t i = 0; i < mx.size(); ++i) EXPECT_GE(mx2.values()[i], mx.values()[i]);
  }
}

}  // namespace
}  // namespace freqclue
