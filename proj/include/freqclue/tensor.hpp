#pragma once

// Dense row-major containers used across the frequency pipeline. All values
// are stored as double; 32-bit inputs are widened on construction.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace freqclue {

/// A single H×W real plane.
class Plane {
 public:
  Plane() = default;
  Plane(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Plane(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool all_finite() const noexcept;

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Rank-3 tensor, used for N×H×W attention planes and N×C×K compact features.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t d0, std::size_t d1, std::size_t d2, double fill = 0.0)
      : dims_{d0, d1, d2}, data_(d0 * d1 * d2, fill) {}

  std::size_t dim(std::size_t axis) const { return dims_.at(axis); }
  const std::array<std::size_t, 3>& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * dims_[1] + j) * dims_[2] + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * dims_[1] + j) * dims_[2] + k];
  }

  /// Contiguous slice for fixed leading index.
  std::span<double> slice(std::size_t i) {
    return std::span<double>(data_).subspan(i * dims_[1] * dims_[2], dims_[1] * dims_[2]);
  }
  std::span<const double> slice(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * dims_[1] * dims_[2], dims_[1] * dims_[2]);
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  std::array<std::size_t, 3> dims_{0, 0, 0};
  std::vector<double> data_;
};

/// Rank-4 N×C×H×W tensor (frames × channels × rows × cols).
class Tensor4 {
 public:
  Tensor4() = default;
  Tensor4(std::size_t n, std::size_t c, std::size_t h, std::size_t w, double fill = 0.0)
      : dims_{n, c, h, w}, data_(n * c * h * w, fill) {}

  std::size_t frames() const noexcept { return dims_[0]; }
  std::size_t channels() const noexcept { return dims_[1]; }
  std::size_t height() const noexcept { return dims_[2]; }
  std::size_t width() const noexcept { return dims_[3]; }
  const std::array<std::size_t, 4>& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t plane_size() const noexcept { return dims_[2] * dims_[3]; }

  double& operator()(std::size_t n, std::size_t c, std::size_t h, std::size_t w) {
    return data_[((n * dims_[1] + c) * dims_[2] + h) * dims_[3] + w];
  }
  double operator()(std::size_t n, std::size_t c, std::size_t h, std::size_t w) const {
    return data_[((n * dims_[1] + c) * dims_[2] + h) * dims_[3] + w];
  }

  std::span<double> plane(std::size_t n, std::size_t c) {
    return std::span<double>(data_).subspan((n * dims_[1] + c) * plane_size(), plane_size());
  }
  std::span<const double> plane(std::size_t n, std::size_t c) const {
    return std::span<const double>(data_).subspan((n * dims_[1] + c) * plane_size(), plane_size());
  }

  Plane copy_plane(std::size_t n, std::size_t c) const;
  void set_plane(std::size_t n, std::size_t c, const Plane& p);

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  friend bool operator==(const Tensor4&, const Tensor4&) = default;

 private:
  std::array<std::size_t, 4> dims_{0, 0, 0, 0};
  std::vector<double> data_;
};

/// Backbone output: per-frame feature maps.
using FeatureMapSequence = Tensor4;
/// Per-frame, per-channel 2D-DCT coefficients (optionally band-weighted).
using Spectrum = Tensor4;

}  // namespace freqclue
