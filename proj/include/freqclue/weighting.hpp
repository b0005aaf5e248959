#pragma once

#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "freqclue/tensor.hpp"

namespace freqclue {

inline constexpr double kDefaultBeta = std::numbers::sqrt2;

/// Band exponent α for coefficient (u, v) of a spectrum with `height` rows:
/// 0 for u+v < H/3, 1 for H/3 ≤ u+v ≤ 2H/3, 2 above. Comparisons are done on
/// 3(u+v) against H and 2H in integers, so ties are exact.
int band_exponent(std::size_t u, std::size_t v, std::size_t height);

/// Coefficient weights β^α(u,v) amplifying mid and high DCT bands.
class WeightMatrix {
 public:
  WeightMatrix(std::size_t height, std::size_t width, double base);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  double base() const noexcept { return base_; }

  double operator()(std::size_t u, std::size_t v) const { return weights_[u * width_ + v]; }
  int exponent(std::size_t u, std::size_t v) const { return exponents_[u * width_ + v]; }

  /// Text grid of α values, one row per line, digits separated by spaces.
  std::string band_map() const;

 private:
  std::size_t height_;
  std::size_t width_;
  double base_;
  std::vector<int> exponents_;
  std::vector<double> weights_;
};

/// Throws kDegenerateBand for height < 3 and kConfig for non-positive base.
WeightMatrix build_weight_matrix(std::size_t height, std::size_t width, double base = kDefaultBeta);

/// Elementwise weights(u,v) · spectrum(n,c,u,v).
Spectrum apply_weights(const Spectrum& spectrum, const WeightMatrix& weights);

}  // namespace freqclue
