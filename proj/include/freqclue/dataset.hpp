#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "freqclue/image.hpp"
#include "freqclue/tensor.hpp"

namespace freqclue {

enum class Label { kReal = 0, kFake = 1 };

Label parse_label(std::string_view text);
std::string_view to_string(Label label);

struct CropBox {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t w = 0;
  std::size_t h = 0;

  friend bool operator==(const CropBox&, const CropBox&) = default;
};

struct VideoSample {
  std::string id;
  Label label = Label::kReal;
  std::vector<std::filesystem::path> frames;  // resolved paths, in temporal order
  std::vector<CropBox> crops;                 // empty, one box for all frames, or one per frame
  std::string split;                          // "train", "val", "test" or empty

  /// Crop for frame `index`, if any.
  std::optional<CropBox> crop_for(std::size_t index) const;
};

struct DatasetManifest {
  std::vector<VideoSample> samples;
  std::string provenance;

  /// Samples whose split equals `split`; an empty split selects all.
  std::vector<VideoSample> select(std::string_view split) const;
};

/// JSON-lines manifest. Relative frame paths are resolved against the
/// manifest's directory. Throws kIo for a missing file and kManifest for a
/// malformed line (with the line number) or a duplicate id.
DatasetManifest read_manifest(const std::filesystem::path& path);

/// Writes the manifest with frame paths made relative to the manifest's
/// directory where possible.
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

/// Uniform sampling indices floor(j·T/n), j = 0..n−1.
std::vector<std::size_t> sample_frames(std::size_t total, std::size_t n);
std::vector<std::filesystem::path> sample_frames(const VideoSample& video, std::size_t n);

inline constexpr std::array<double, 3> kImageNetMean{0.485, 0.456, 0.406};
inline constexpr std::array<double, 3> kImageNetStd{0.229, 0.224, 0.225};

/// Bilinear resize with half-pixel centers (identity when sizes match).
Image resize_bilinear(const Image& image, std::size_t height, std::size_t width);

/// Crop (throws kGeometry when out of bounds), resize to target×target,
/// replicate gray to 3 channels, then (x − mean)/std per channel.
/// Returns a 3×target×target tensor slice written into `out` frame `n`.
void preprocess(const Image& frame, const std::optional<CropBox>& crop, std::size_t target, Tensor4& out,
                std::size_t n);
Tensor4 preprocess(const Image& frame, const std::optional<CropBox>& crop, std::size_t target);

/// Samples n frames, reads and preprocesses them into an n×3×target×target tensor.
Tensor4 load_video(const VideoSample& video, std::size_t n, std::size_t target);

}  // namespace freqclue
