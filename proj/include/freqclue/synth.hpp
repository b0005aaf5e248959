#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "freqclue/dataset.hpp"
#include "freqclue/image.hpp"

namespace freqclue {

enum class UpsampleMode { kNearest, kBilinear };

UpsampleMode parse_upsample_mode(std::string_view text);
std::string_view to_string(UpsampleMode mode);

/// Synthetic real/fake texture videos. A real video is a sequence of smooth
/// random fields: white noise blurred with `smoothness` (pixels), temporally
/// correlated by an AR(1) mix with coefficient `temporal_correlation`. A fake
/// video runs the same generator at size/factor (with smoothness/factor) and
/// upsamples each frame back to `size`, which leaves periodic spectral replicas.
struct SynthConfig {
  std::size_t count_per_class = 100;
  std::size_t size = 64;
  std::size_t upsample_factor = 2;
  UpsampleMode mode = UpsampleMode::kNearest;
  std::size_t frames = 16;
  double smoothness = 2.0;
  double temporal_correlation = 0.9;
  double train_fraction = 0.7;  // per class; the remainder is "test"
  std::uint64_t seed = 0;

  /// Throws kConfig for factor ∉ {2,4}, size not divisible by factor, etc.
  void validate() const;
};

/// Frames of a single video, already 8-bit quantized. `index` selects the
/// per-video random stream, so videos can be generated in any order.
std::vector<Image> synth_video(const SynthConfig& config, Label label, std::size_t index);

/// Upsamples by an integer factor (nearest: pixel replication; bilinear:
/// half-pixel-center interpolation).
Image upsample(const Image& image, std::size_t factor, UpsampleMode mode);

/// Writes `<out_dir>/<id>/frame_XXX.pgm` for every video plus
/// `<out_dir>/manifest.jsonl`, and returns the manifest.
DatasetManifest synth_corpus(const SynthConfig& config, const std::filesystem::path& out_dir,
                             std::size_t workers = 1);

}  // namespace freqclue
