#pragma once

// Pluggable per-frame feature extractors standing in for a trained CNN trunk.
//
//   identity              frames pass through unchanged
//   randconv:<params>     frozen 3×3 conv stack with ReLU; params are
//                         layers=L,channels=c1/c2/..,strides=s1/s2/..,seed=S
//                         (a single channels/strides value applies to all layers)
//   file:<path>           precomputed FMT1 tensor; "{id}" in the path is
//                         replaced by the video id

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "freqclue/tensor.hpp"

namespace freqclue {

enum class BackboneKind { kIdentity, kRandConv, kTensorFile };

struct BackboneSpec {
  BackboneKind kind = BackboneKind::kIdentity;
  std::vector<std::size_t> channels;  // per layer (rand-conv)
  std::vector<std::size_t> strides;   // per layer (rand-conv)
  std::uint64_t seed = 0;
  std::string path;                   // tensor-file

  std::size_t layers() const noexcept { return channels.size(); }

  static BackboneSpec parse(std::string_view text);
  /// Canonical text form; parse(to_string()) == *this.
  std::string to_string() const;

  friend bool operator==(const BackboneSpec&, const BackboneSpec&) = default;
};

/// Frozen extractor built from a spec. Rand-conv weights are drawn once from
/// the seed (He-normal), so two backbones with equal specs are identical.
class Backbone {
 public:
  explicit Backbone(BackboneSpec spec, std::size_t input_channels = 3);

  const BackboneSpec& spec() const noexcept { return spec_; }

  /// Output N×C×H×W for an input of the given shape (tensor-file: input shape is
  /// passed through for N only; C,H,W are only known from the file).
  std::array<std::size_t, 4> output_shape(const std::array<std::size_t, 4>& input) const;

  /// `video_id` is used only by tensor-file specs.
  FeatureMapSequence featurize(const Tensor4& frames, std::string_view video_id = {},
                               std::size_t workers = 1) const;

  /// Tensor-file backbones do not look at pixels; callers can skip decoding.
  bool needs_pixels() const noexcept { return spec_.kind != BackboneKind::kTensorFile; }
  std::filesystem::path tensor_path(std::string_view video_id) const;

 private:
  struct ConvLayer {
    std::size_t in_channels;
    std::size_t out_channels;
    std::size_t stride;
    std::vector<double> weights;  // out × in × 3 × 3
    std::vector<double> bias;
  };

  BackboneSpec spec_;
  std::size_t input_channels_;
  std::vector<ConvLayer> layers_;
};

/// FMT1: magic "FMT1", little-endian u32 N, C, H, W, then f32 payload, N-major row-major.
void write_tensor_file(const std::filesystem::path& path, const Tensor4& tensor);
Tensor4 read_tensor_file(const std::filesystem::path& path);

}  // namespace freqclue
