#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace freqclue {

/// Planar image with values in [0, 1]; channels is 1 (gray/NIR) or 3 (RGB).
class Image {
 public:
  Image() = default;
  Image(std::size_t channels, std::size_t height, std::size_t width, double fill = 0.0)
      : channels_(channels), height_(height), width_(width), data_(channels * height * width, fill) {}

  std::size_t channels() const noexcept { return channels_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }

  double& at(std::size_t c, std::size_t y, std::size_t x) { return data_[(c * height_ + y) * width_ + x]; }
  double at(std::size_t c, std::size_t y, std::size_t x) const { return data_[(c * height_ + y) * width_ + x]; }

  std::span<double> channel(std::size_t c) {
    return std::span<double>(data_).subspan(c * height_ * width_, height_ * width_);
  }
  std::span<const double> channel(std::size_t c) const {
    return std::span<const double>(data_).subspan(c * height_ * width_, height_ * width_);
  }
  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t channels_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> data_;
};

/// Reads 8-bit PGM (P5/P2), PPM (P6) or PNG (gray, gray+alpha, RGB, RGBA; alpha dropped).
Image read_image(const std::filesystem::path& path);

/// Writes 8-bit PGM/PPM/PNG chosen by extension; values are clamped and rounded.
void write_image(const std::filesystem::path& path, const Image& image);

/// Rounds every value to the nearest 8-bit level, as a write/read round trip would.
Image quantize_8bit(const Image& image);

}  // namespace freqclue
