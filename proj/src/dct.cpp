#include "freqclue/dct.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <string>

#include "freqclue/error.hpp"
#include "freqclue/parallel.hpp"

namespace freqclue {

CosineTable::CosineTable(std::size_t size) : size_(size), coeffs_(size * size) {
  if (size == 0) throw Error(ErrorKind::kShape, "cosine table size must be positive");
  const double m = static_cast<double>(size);
  const double c0 = std::sqrt(1.0 / m);
  const double cu = std::sqrt(2.0 / m);
  for (std::size_t u = 0; u < size; ++u) {
    const double scale = u == 0 ? c0 : cu;
    for (std::size_t i = 0; i < size; ++i) {
      coeffs_[u * size + i] =
          scale * std::cos((static_cast<double>(i) + 0.5) * std::numbers::pi * static_cast<double>(u) / m);
    }
  }
}

std::shared_ptr<const CosineTable> CosineTable::get(std::size_t size) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const CosineTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[size];
  if (!slot) slot = std::make_shared<const CosineTable>(size);
  return slot;
}

namespace {

void require_valid(const Plane& p) {
  if (p.rows() == 0 || p.cols() == 0) throw Error(ErrorKind::kShape, "plane must be at least 1x1");
  if (!p.all_finite()) throw Error(ErrorKind::kInvalidInput, "plane contains non-finite values");
}

// out = T_rows · in · T_colsᵀ  (forward)   or   T_rowsᵀ · in · T_cols  (inverse)
void transform(std::span<const double> in, std::span<double> out, std::size_t rows, std::size_t cols,
               bool inverse) {
  const auto tr = CosineTable::get(rows);
  const auto tc = CosineTable::get(cols);
  std::vector<double> tmp(rows * cols, 0.0);

  // Along each row (width dimension).
  for (std::size_t r = 0; r < rows; ++r) {
    const double* src = in.data() + r * cols;
    double* dst = tmp.data() + r * cols;
    for (std::size_t v = 0; v < cols; ++v) {
      double acc = 0.0;
      for (std::size_t j = 0; j < cols; ++j) {
        acc += (inverse ? (*tc)(j, v) : (*tc)(v, j)) * src[j];
      }
      dst[v] = acc;
    }
  }
  // Along each column (height dimension).
  for (std::size_t u = 0; u < rows; ++u) {
    double* dst = out.data() + u * cols;
    for (std::size_t v = 0; v < cols; ++v) dst[v] = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      const double k = inverse ? (*tr)(i, u) : (*tr)(u, i);
      const double* src = tmp.data() + i * cols;
      for (std::size_t v = 0; v < cols; ++v) dst[v] += k * src[v];
    }
  }
}

}  // namespace

Plane dct2_forward(const Plane& input) {
  require_valid(input);
  Plane out(input.rows(), input.cols());
  transform(input.values(), out.values(), input.rows(), input.cols(), false);
  return out;
}

Plane dct2_inverse(const Plane& input) {
  require_valid(input);
  Plane out(input.rows(), input.cols());
  transform(input.values(), out.values(), input.rows(), input.cols(), true);
  return out;
}

Spectrum dct2_batch(const FeatureMapSequence& input, std::size_t workers) {
  const auto& d = input.dims();
  if (d[0] == 0 || d[1] == 0 || d[2] == 0 || d[3] == 0) {
    throw Error(ErrorKind::kShape, "feature map sequence must have N, C, H, W >= 1 (got " +
                                       std::to_string(d[0]) + "x" + std::to_string(d[1]) + "x" +
                                       std::to_string(d[2]) + "x" + std::to_string(d[3]) + ")");
  }
  Spectrum out(d[0], d[1], d[2], d[3]);
  const std::size_t planes = d[0] * d[1];
  parallel_for(planes, workers, [&](std::size_t idx) {
    const std::size_t n = idx / d[1];
    const std::size_t c = idx % d[1];
    auto src = input.plane(n, c);
    for (double v : src) {
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::kInvalidInput, "non-finite value in plane (n=" + std::to_string(n) +
                                                  ", c=" + std::to_string(c) + ")");
      }
    }
    transform(src, out.plane(n, c), d[2], d[3], false);
  });
  return out;
}

}  // namespace freqclue
