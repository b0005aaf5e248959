#include "freqclue/cfe.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "freqclue/error.hpp"

namespace freqclue {

BlockGrid BlockGrid::parse(std::string_view text) {
  const auto x = text.find_first_of("xX");
  auto to_size = [&](std::string_view part) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc() || ptr != part.data() + part.size() || value == 0) {
      throw Error(ErrorKind::kConfig, "invalid block grid '" + std::string(text) + "', expected RxC");
    }
    return value;
  };
  if (x == std::string_view::npos) {
    throw Error(ErrorKind::kConfig, "invalid block grid '" + std::string(text) + "', expected RxC");
  }
  return BlockGrid{to_size(text.substr(0, x)), to_size(text.substr(x + 1))};
}

std::string BlockGrid::to_string() const { return std::to_string(rows) + "x" + std::to_string(cols); }

Reduction parse_reduction(std::string_view text) {
  if (text == "max") return Reduction::kMax;
  if (text == "min") return Reduction::kMin;
  if (text == "avg") return Reduction::kAvg;
  if (text == "absmax") return Reduction::kAbsMax;
  throw Error(ErrorKind::kConfig, "unknown reduction '" + std::string(text) + "' (max|min|avg|absmax)");
}

std::string_view to_string(Reduction r) {
  switch (r) {
    case Reduction::kMax: return "max";
    case Reduction::kMin: return "min";
    case Reduction::kAvg: return "avg";
    case Reduction::kAbsMax: return "absmax";
  }
  return "max";
}

BlockView::BlockView(std::size_t height, std::size_t width, BlockGrid grid)
    : width_(width), grid_(grid), tile_rows_(0), tile_cols_(0) {
  if (grid.rows == 0 || grid.cols == 0 || height % grid.rows != 0 || width % grid.cols != 0) {
    throw Error(ErrorKind::kPartition, "plane " + std::to_string(height) + "x" + std::to_string(width) +
                                           " is not divisible by block grid " + grid.to_string() +
                                           " (height " + std::to_string(height) + " by " +
                                           std::to_string(grid.rows) + ", width " + std::to_string(width) +
                                           " by " + std::to_string(grid.cols) + ")");
  }
  tile_rows_ = height / grid.rows;
  tile_cols_ = width / grid.cols;
}

Tile BlockView::tile(std::size_t k) const {
  const std::size_t r = k / grid_.cols;
  const std::size_t c = k % grid_.cols;
  return Tile{r * tile_rows_, c * tile_cols_, tile_rows_, tile_cols_};
}

BlockView partition_blocks(std::size_t height, std::size_t width, BlockGrid grid) {
  return BlockView(height, width, grid);
}

BlockView partition_blocks(const Spectrum& spectrum, BlockGrid grid) {
  return BlockView(spectrum.height(), spectrum.width(), grid);
}

CompactFeature compact(const Spectrum& spectrum, BlockGrid grid, Reduction reduction) {
  const BlockView view = partition_blocks(spectrum, grid);
  const std::size_t k_count = view.blocks();
  const double tile_count = static_cast<double>(view.tile_rows() * view.tile_cols());
  CompactFeature out{Tensor3(spectrum.frames(), spectrum.channels(), k_count), reduction};

  for (std::size_t n = 0; n < spectrum.frames(); ++n) {
    for (std::size_t c = 0; c < spectrum.channels(); ++c) {
      const auto plane = spectrum.plane(n, c);
      for (std::size_t k = 0; k < k_count; ++k) {
        double acc = 0.0;
        switch (reduction) {
          case Reduction::kMax:
            acc = -std::numeric_limits<double>::infinity();
            view.for_each(plane, k, [&](double v) { acc = std::max(acc, v); });
            break;
          case Reduction::kMin:
            acc = std::numeric_limits<double>::infinity();
            view.for_each(plane, k, [&](double v) { acc = std::min(acc, v); });
            break;
          case Reduction::kAvg:
            view.for_each(plane, k, [&](double v) { acc += v; });
            acc /= tile_count;
            break;
          case Reduction::kAbsMax:
            view.for_each(plane, k, [&](double v) { acc = std::max(acc, std::abs(v)); });
            break;
        }
        out.values(n, c, k) = acc;
      }
    }
  }
  return out;
}

}  // namespace freqclue
