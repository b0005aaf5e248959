#include "freqclue/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "freqclue/dct.hpp"
#include "freqclue/error.hpp"
#include "freqclue/fileutil.hpp"
#include "freqclue/parallel.hpp"

namespace freqclue {

PerturbationKind parse_perturbation_kind(std::string_view text) {
  if (text == "blur" || text == "gaussian-blur") return PerturbationKind::kGaussianBlur;
  if (text == "noise" || text == "gaussian-noise") return PerturbationKind::kGaussianNoise;
  if (text == "jpeg" || text == "jpeg-like") return PerturbationKind::kJpegLike;
  if (text == "contrast") return PerturbationKind::kContrast;
  throw Error(ErrorKind::kConfig, "unknown perturbation '" + std::string(text) + "' (blur|noise|jpeg|contrast)");
}

std::string_view to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::kGaussianBlur: return "gaussian-blur";
    case PerturbationKind::kGaussianNoise: return "gaussian-noise";
    case PerturbationKind::kJpegLike: return "jpeg-like";
    case PerturbationKind::kContrast: return "contrast";
  }
  return "unknown";
}

void PerturbationSpec::validate() const {
  switch (kind) {
    case PerturbationKind::kGaussianBlur:
      if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(ErrorKind::kConfig, "blur sigma must be > 0");
      break;
    case PerturbationKind::kGaussianNoise:
      // σ = 0 is accepted and is the identity.
      if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error(ErrorKind::kConfig, "noise sigma must be >= 0");
      break;
    case PerturbationKind::kJpegLike:
      if (quality < 1 || quality > 100) throw Error(ErrorKind::kConfig, "jpeg quality must be in [1, 100]");
      break;
    case PerturbationKind::kContrast:
      if (!(gain > 0.0) || !std::isfinite(gain)) throw Error(ErrorKind::kConfig, "contrast gain must be > 0");
      break;
  }
}

std::string PerturbationSpec::describe() const {
  std::ostringstream out;
  out << to_string(kind);
  switch (kind) {
    case PerturbationKind::kGaussianBlur: out << " sigma=" << sigma << " radius=" << radius; break;
    case PerturbationKind::kGaussianNoise: out << " sigma=" << sigma << " seed=" << seed; break;
    case PerturbationKind::kJpegLike: out << " quality=" << quality; break;
    case PerturbationKind::kContrast: out << " gain=" << gain; break;
  }
  return out.str();
}

std::vector<double> gaussian_kernel(double sigma, std::size_t radius) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::kConfig, "gaussian sigma must be > 0");
  std::vector<double> taps(2 * radius + 1);
  double total = 0.0;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    const double d = static_cast<double>(i) - static_cast<double>(radius);
    taps[i] = std::exp(-0.5 * d * d / (sigma * sigma));
    total += taps[i];
  }
  for (double& t : taps) t /= total;
  return taps;
}

namespace {

constexpr std::array<int, 64> kLuminanceTable = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

// Symmetric reflection (edge sample repeated), folded until in range.
std::size_t reflect(long i, long n) {
  if (n == 1) return 0;
  const long period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return static_cast<std::size_t>(i < n ? i : period - 1 - i);
}

}  // namespace

std::array<int, 64> jpeg_quant_table(int quality) {
  if (quality < 1 || quality > 100) throw Error(ErrorKind::kConfig, "jpeg quality must be in [1, 100]");
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  std::array<int, 64> table{};
  for (std::size_t i = 0; i < 64; ++i) table[i] = std::clamp((kLuminanceTable[i] * scale + 50) / 100, 1, 255);
  return table;
}

std::uint64_t frame_seed(std::uint64_t seed, std::string_view video_id, std::size_t frame_index) {
  std::string key = std::to_string(seed);
  key += '/';
  key += video_id;
  key += '/';
  key += std::to_string(frame_index);
  return fnv1a64(key);
}

Image gaussian_blur(const Image& image, double sigma, std::size_t radius) {
  if (radius == 0) radius = static_cast<std::size_t>(std::ceil(3.0 * sigma));
  const auto taps = gaussian_kernel(sigma, radius);
  const long r = static_cast<long>(radius);
  const long h = static_cast<long>(image.height());
  const long w = static_cast<long>(image.width());
  Image tmp(image.channels(), image.height(), image.width());
  Image out(image.channels(), image.height(), image.width());
  for (std::size_t c = 0; c < image.channels(); ++c) {
    for (long y = 0; y < h; ++y) {
      for (long x = 0; x < w; ++x) {
        double acc = 0.0;
        for (long t = -r; t <= r; ++t) acc += taps[t + r] * image.at(c, y, reflect(x + t, w));
        tmp.at(c, y, x) = acc;
      }
    }
    for (long y = 0; y < h; ++y) {
      for (long x = 0; x < w; ++x) {
        double acc = 0.0;
        for (long t = -r; t <= r; ++t) acc += taps[t + r] * tmp.at(c, reflect(y + t, h), x);
        out.at(c, y, x) = acc;
      }
    }
  }
  return out;
}

Image gaussian_noise(const Image& image, double sigma, std::uint64_t seed) {
  if (sigma == 0.0) return image;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  Image out = image;
  for (double& v : out.values()) v = std::clamp(v + noise(rng), 0.0, 1.0);
  return out;
}

Image jpeg_like(const Image& image, int quality) {
  const auto table = jpeg_quant_table(quality);
  const std::size_t h = image.height();
  const std::size_t w = image.width();
  Image out(image.channels(), h, w);
  Plane block(8, 8);
  for (std::size_t c = 0; c < image.channels(); ++c) {
    for (std::size_t by = 0; by < h; by += 8) {
      for (std::size_t bx = 0; bx < w; bx += 8) {
        // Partial edge blocks are padded by replicating the last row/column.
        for (std::size_t y = 0; y < 8; ++y) {
          for (std::size_t x = 0; x < 8; ++x) {
            const std::size_t sy = std::min(by + y, h - 1);
            const std::size_t sx = std::min(bx + x, w - 1);
            block(y, x) = image.at(c, sy, sx) * 255.0 - 128.0;
          }
        }
        Plane coeffs = dct2_forward(block);
        for (std::size_t i = 0; i < 64; ++i) {
          const double q = table[i];
          coeffs.values()[i] = std::round(coeffs.values()[i] / q) * q;
        }
        const Plane recon = dct2_inverse(coeffs);
        for (std::size_t y = 0; y < 8 && by + y < h; ++y) {
          for (std::size_t x = 0; x < 8 && bx + x < w; ++x) {
            out.at(c, by + y, bx + x) = std::clamp((recon(y, x) + 128.0) / 255.0, 0.0, 1.0);
          }
        }
      }
    }
  }
  return out;
}

Image adjust_contrast(const Image& image, double gain) {
  Image out = image;
  for (double& v : out.values()) v = std::clamp(gain * (v - 0.5) + 0.5, 0.0, 1.0);
  return out;
}

Image perturb(const Image& image, const PerturbationSpec& spec, std::uint64_t noise_seed) {
  spec.validate();
  switch (spec.kind) {
    case PerturbationKind::kGaussianBlur: return gaussian_blur(image, spec.sigma, spec.radius);
    case PerturbationKind::kGaussianNoise: return gaussian_noise(image, spec.sigma, noise_seed);
    case PerturbationKind::kJpegLike: return jpeg_like(image, spec.quality);
    case PerturbationKind::kContrast: return adjust_contrast(image, spec.gain);
  }
  return image;
}

DatasetManifest perturb_manifest(const DatasetManifest& manifest, const PerturbationSpec& spec,
                                 const std::filesystem::path& out_dir, std::string_view split,
                                 std::size_t workers) {
  spec.validate();
  DatasetManifest result = manifest;
  result.provenance = (manifest.provenance.empty() ? std::string("unknown") : manifest.provenance) +
                      " | perturbed: " + spec.describe() +
                      (split.empty() ? std::string() : " (split " + std::string(split) + ")");
  std::filesystem::create_directories(out_dir);
  parallel_for(result.samples.size(), workers, [&](std::size_t i) {
    VideoSample& sample = result.samples[i];
    if (!split.empty() && sample.split != split) return;
    const auto dir = out_dir / sample.id;
    std::filesystem::create_directories(dir);
    for (std::size_t f = 0; f < sample.frames.size(); ++f) {
      const Image src = read_image(sample.frames[f]);
      const Image dst = perturb(src, spec, frame_seed(spec.seed, sample.id, f));
      auto name = sample.frames[f].filename();
      const auto target = dir / name;
      write_image(target, dst);
      sample.frames[f] = target;
    }
  });
  return result;
}

}  // namespace freqclue
