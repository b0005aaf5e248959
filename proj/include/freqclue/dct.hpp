#pragma once

// Orthonormal 2D DCT-II over planes, computed separably with precomputed
// cosine tables. Non-square planes use per-dimension normalization.

#include <cstddef>
#include <memory>
#include <vector>

#include "freqclue/tensor.hpp"

namespace freqclue {

/// M×M orthonormal DCT-II basis: entry (u, i) = c(u) · cos((i + 0.5)·π·u / M),
/// c(0) = sqrt(1/M), c(u>0) = sqrt(2/M). Immutable once built.
class CosineTable {
 public:
  explicit CosineTable(std::size_t size);

  std::size_t size() const noexcept { return size_; }
  double operator()(std::size_t u, std::size_t i) const { return coeffs_[u * size_ + i]; }

  /// Shared cached table for `size`; safe to call from multiple threads.
  static std::shared_ptr<const CosineTable> get(std::size_t size);

 private:
  std::size_t size_;
  std::vector<double> coeffs_;
};

Plane dct2_forward(const Plane& input);
Plane dct2_inverse(const Plane& input);

/// Applies dct2_forward to every (n, c) plane. Planes are independent, so the
/// output is bitwise identical for any `workers`. Errors carry the (n, c) index.
Spectrum dct2_batch(const FeatureMapSequence& input, std::size_t workers = 1);

}  // namespace freqclue
