#include "freqclue/fta.hpp"

#include <cmath>
#include <string>

#include "freqclue/error.hpp"

namespace freqclue {

Tensor3 channel_l2(const Spectrum& spectrum) {
  if (spectrum.channels() == 0) throw Error(ErrorKind::kShape, "channel L2 needs at least one channel");
  const std::size_t hw = spectrum.plane_size();
  Tensor3 out(spectrum.frames(), spectrum.height(), spectrum.width());
  for (std::size_t n = 0; n < spectrum.frames(); ++n) {
    auto dst = out.slice(n);
    for (std::size_t c = 0; c < spectrum.channels(); ++c) {
      const auto src = spectrum.plane(n, c);
      for (std::size_t i = 0; i < hw; ++i) dst[i] += src[i] * src[i];
    }
    for (double& v : dst) v = std::sqrt(v);
  }
  return out;
}

Tensor3 spatial_normalize(const Tensor3& a, double epsilon) {
  Tensor3 out = a;
  for (std::size_t n = 0; n < a.dim(0); ++n) {
    auto row = out.slice(n);
    double total = 0.0;
    for (double v : row) total += v;
    const double denom = total + epsilon;
    for (double& v : row) v /= denom;
  }
  return out;
}

Plane block_scores(const Tensor3& a_prime, BlockGrid grid) {
  const BlockView view = partition_blocks(a_prime.dim(1), a_prime.dim(2), grid);
  Plane out(a_prime.dim(0), view.blocks());
  for (std::size_t n = 0; n < a_prime.dim(0); ++n) {
    const auto frame = a_prime.slice(n);
    for (std::size_t k = 0; k < view.blocks(); ++k) {
      double sum = 0.0;
      view.for_each(frame, k, [&](double v) { sum += v; });
      out(n, k) = sum;
    }
  }
  return out;
}

AttentionMap frame_l1(const Plane& a_dprime, double epsilon) {
  AttentionMap out{a_dprime};
  for (std::size_t n = 0; n < a_dprime.rows(); ++n) {
    double total = 0.0;
    for (std::size_t k = 0; k < a_dprime.cols(); ++k) total += a_dprime(n, k);
    const double denom = total + epsilon;
    for (std::size_t k = 0; k < a_dprime.cols(); ++k) out.weights(n, k) = a_dprime(n, k) / denom;
  }
  return out;
}

AttentionMap attention(const Spectrum& spectrum, BlockGrid grid, double epsilon) {
  partition_blocks(spectrum, grid);
  return frame_l1(block_scores(spatial_normalize(channel_l2(spectrum), epsilon), grid), epsilon);
}

}  // namespace freqclue
