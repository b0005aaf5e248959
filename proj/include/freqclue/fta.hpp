#pragma once

// Frequency temporal attention. Stages:
//   channel_l2        A(n,h,w)   = sqrt(Σ_c F(n,c,h,w)²)
//   spatial_normalize A'(n,h,w)  = A / (Σ_hw A + ε)
//   block_scores      A''(n,k)   = Σ_{tile k} A'
//   frame_l1          A_FTA(n,k) = A'' / (Σ_k A'' + ε)
// Every normalization is within one frame.

#include <cstddef>

#include "freqclue/cfe.hpp"
#include "freqclue/tensor.hpp"

namespace freqclue {

inline constexpr double kDefaultEpsilon = 1e-12;

/// N×K per-frame block weights; rows are nonnegative and sum to 1 (or are all
/// zero for an all-zero frame).
struct AttentionMap {
  Plane weights;

  std::size_t frames() const noexcept { return weights.rows(); }
  std::size_t blocks() const noexcept { return weights.cols(); }
  double operator()(std::size_t n, std::size_t k) const { return weights(n, k); }
};

Tensor3 channel_l2(const Spectrum& spectrum);
Tensor3 spatial_normalize(const Tensor3& a, double epsilon = kDefaultEpsilon);
Plane block_scores(const Tensor3& a_prime, BlockGrid grid);
AttentionMap frame_l1(const Plane& a_dprime, double epsilon = kDefaultEpsilon);

AttentionMap attention(const Spectrum& spectrum, BlockGrid grid, double epsilon = kDefaultEpsilon);

}  // namespace freqclue
