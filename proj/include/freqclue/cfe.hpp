#pragma once

// Compact feature extraction: each spectrum plane is tiled into a rows×cols
// grid of equal contiguous blocks and every block is reduced to one value.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "freqclue/tensor.hpp"

namespace freqclue {

struct BlockGrid {
  std::size_t rows = 4;
  std::size_t cols = 4;

  std::size_t blocks() const noexcept { return rows * cols; }

  /// Parses "RxC" (e.g. "4x4"). Throws kConfig on malformed or zero sizes.
  static BlockGrid parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const BlockGrid&, const BlockGrid&) = default;
};

enum class Reduction { kMax, kMin, kAvg, kAbsMax };

Reduction parse_reduction(std::string_view text);
std::string_view to_string(Reduction r);

/// Geometry of one tile in a plane.
struct Tile {
  std::size_t row0;
  std::size_t col0;
  std::size_t rows;
  std::size_t cols;
};

/// Row-major view of the K tiles of an H×W plane; tile k = r·grid.cols + c.
class BlockView {
 public:
  BlockView(std::size_t height, std::size_t width, BlockGrid grid);

  std::size_t blocks() const noexcept { return grid_.blocks(); }
  std::size_t tile_rows() const noexcept { return tile_rows_; }
  std::size_t tile_cols() const noexcept { return tile_cols_; }
  Tile tile(std::size_t k) const;

  /// Calls fn(value) for every element of tile k of plane `values` (H×W row-major).
  template <typename Fn>
  void for_each(std::span<const double> values, std::size_t k, Fn&& fn) const {
    const Tile t = tile(k);
    for (std::size_t r = t.row0; r < t.row0 + t.rows; ++r) {
      for (std::size_t c = t.col0; c < t.col0 + t.cols; ++c) fn(values[r * width_ + c]);
    }
  }

 private:
  std::size_t width_;
  BlockGrid grid_;
  std::size_t tile_rows_;
  std::size_t tile_cols_;
};

/// Throws kPartition naming both dimensions when the grid does not divide H×W.
BlockView partition_blocks(const Spectrum& spectrum, BlockGrid grid);
BlockView partition_blocks(std::size_t height, std::size_t width, BlockGrid grid);

struct CompactFeature {
  Tensor3 values;  // N × C × K
  Reduction reduction = Reduction::kMax;
};

CompactFeature compact(const Spectrum& spectrum, BlockGrid grid, Reduction reduction = Reduction::kMax);

}  // namespace freqclue
