#include "freqclue/weighting.hpp"

#include <cmath>
#include <sstream>

#include "freqclue/error.hpp"

namespace freqclue {

int band_exponent(std::size_t u, std::size_t v, std::size_t height) {
  const std::size_t scaled = 3 * (u + v);
  if (scaled < height) return 0;
  if (scaled <= 2 * height) return 1;
  return 2;
}

WeightMatrix::WeightMatrix(std::size_t height, std::size_t width, double base)
    : height_(height), width_(width), base_(base), exponents_(height * width), weights_(height * width) {
  if (height < 3) {
    throw Error(ErrorKind::kDegenerateBand,
                "weight matrix needs height >= 3 for three frequency bands (got " + std::to_string(height) + ")");
  }
  if (width < 1) throw Error(ErrorKind::kShape, "weight matrix width must be >= 1");
  if (!(base > 0.0) || !std::isfinite(base)) {
    throw Error(ErrorKind::kConfig, "weight base must be finite and > 0");
  }
  // β·β rounds away from short decimals (√2·√2 = 2.0000000000000004); when β
  // is the correctly rounded root of such a value, use that value as β².
  double square = base * base;
  const double snapped = std::round(square * 1e12) / 1e12;
  if (std::sqrt(snapped) == base) square = snapped;
  const double powers[3] = {1.0, base, square};
  for (std::size_t u = 0; u < height; ++u) {
    for (std::size_t v = 0; v < width; ++v) {
      const int a = band_exponent(u, v, height);
      exponents_[u * width + v] = a;
      weights_[u * width + v] = powers[a];
    }
  }
}

std::string WeightMatrix::band_map() const {
  std::ostringstream out;
  for (std::size_t u = 0; u < height_; ++u) {
    for (std::size_t v = 0; v < width_; ++v) {
      if (v) out << ' ';
      out << exponent(u, v);
    }
    out << '\n';
  }
  return out.str();
}

WeightMatrix build_weight_matrix(std::size_t height, std::size_t width, double base) {
  return WeightMatrix(height, width, base);
}

Spectrum apply_weights(const Spectrum& spectrum, const WeightMatrix& weights) {
  if (spectrum.height() != weights.height() || spectrum.width() != weights.width()) {
    throw Error(ErrorKind::kShape, "weight matrix " + std::to_string(weights.height()) + "x" +
                                       std::to_string(weights.width()) + " does not match spectrum planes " +
                                       std::to_string(spectrum.height()) + "x" + std::to_string(spectrum.width()));
  }
  Spectrum out = spectrum;
  const std::size_t h = spectrum.height();
  const std::size_t w = spectrum.width();
  for (std::size_t n = 0; n < spectrum.frames(); ++n) {
    for (std::size_t c = 0; c < spectrum.channels(); ++c) {
      auto p = out.plane(n, c);
      for (std::size_t u = 0; u < h; ++u) {
        for (std::size_t v = 0; v < w; ++v) p[u * w + v] *= weights(u, v);
      }
    }
  }
  return out;
}

}  // namespace freqclue
