#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "freqclue/dataset.hpp"
#include "freqclue/image.hpp"

namespace freqclue {

enum class PerturbationKind { kGaussianBlur, kGaussianNoise, kJpegLike, kContrast };

PerturbationKind parse_perturbation_kind(std::string_view text);
std::string_view to_string(PerturbationKind kind);

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::kGaussianBlur;
  double sigma = 1.0;        // blur std in pixels; noise std in [0,1] intensity units
  std::size_t radius = 0;    // blur kernel radius; 0 selects ceil(3σ)
  int quality = 75;          // jpeg-like, 1..100
  double gain = 1.0;         // contrast
  std::uint64_t seed = 0;    // noise

  /// Throws kConfig when a parameter lies outside its valid range.
  void validate() const;
  std::string describe() const;
};

/// Unit-mass symmetric Gaussian taps of length 2·radius+1.
std::vector<double> gaussian_kernel(double sigma, std::size_t radius);

/// Standard luminance table scaled by quality (IJG rule), entries in [1, 255], row-major.
std::array<int, 64> jpeg_quant_table(int quality);

/// Per-frame seed from (perturbation seed, video id, frame index); independent of processing order.
std::uint64_t frame_seed(std::uint64_t seed, std::string_view video_id, std::size_t frame_index);

/// Applies the perturbation. `noise_seed` is only consulted for Gaussian noise.
Image perturb(const Image& image, const PerturbationSpec& spec, std::uint64_t noise_seed = 0);

Image gaussian_blur(const Image& image, double sigma, std::size_t radius);
Image gaussian_noise(const Image& image, double sigma, std::uint64_t seed);
Image jpeg_like(const Image& image, int quality);
Image adjust_contrast(const Image& image, double gain);

/// Perturbs every frame of the selected samples (all when `split` is empty),
/// writes them under `out_dir`, and returns a manifest for the new corpus.
/// Unselected samples keep their original frame paths.
DatasetManifest perturb_manifest(const DatasetManifest& manifest, const PerturbationSpec& spec,
                                 const std::filesystem::path& out_dir, std::string_view split = {},
                                 std::size_t workers = 1);

}  // namespace freqclue
