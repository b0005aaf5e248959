#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "freqclue/backbone.hpp"
#include "freqclue/cfe.hpp"
#include "freqclue/dataset.hpp"
#include "freqclue/fta.hpp"
#include "freqclue/tensor.hpp"
#include "freqclue/weighting.hpp"

namespace freqclue {

struct PipelineConfig {
  std::size_t frames = 16;
  BlockGrid grid{4, 4};
  double beta = kDefaultBeta;
  Reduction reduction = Reduction::kMax;
  BackboneSpec backbone{};
  double epsilon = kDefaultEpsilon;
  std::size_t input_size = 64;  // preprocess target side

  void validate() const;
  /// Canonical text of every effective setting; input to fingerprint().
  std::string canonical() const;
  std::string fingerprint() const;
};

struct FusedFeature {
  std::string id;
  Label label = Label::kReal;
  std::string split;
  std::vector<double> values;  // f_c, length C
  std::size_t frames = 0;
  std::size_t blocks = 0;
  double beta = 0.0;
  std::string backbone;
  std::string fingerprint;
};

/// f_c = Σ_n Σ_k compact(n,c,k) · attention(n,k). Throws kShape on N/K mismatch.
std::vector<double> fuse(const CompactFeature& compact, const AttentionMap& attention);

/// Intermediate products of the frequency branch for one feature-map sequence.
struct FrequencyAnalysis {
  Spectrum weighted;
  CompactFeature compact;
  AttentionMap attention;
  std::vector<double> fused;
};

/// DCT → band weighting → CFE and FTA on the shared weighted spectrum → fusion.
FrequencyAnalysis analyze(const FeatureMapSequence& maps, const PipelineConfig& config, std::size_t workers = 1);

/// Full per-video pipeline: sample, preprocess, featurize, analyze.
FusedFeature extract(const VideoSample& video, const PipelineConfig& config, const Backbone& backbone,
                     std::size_t workers = 1);
FusedFeature extract(const VideoSample& video, const PipelineConfig& config, std::size_t workers = 1);

/// Extracts every sample; videos run concurrently on `workers` threads and the
/// result keeps manifest order.
std::vector<FusedFeature> extract_all(const std::vector<VideoSample>& videos, const PipelineConfig& config,
                                      std::size_t workers = 1);

// Feature files. JSON-lines: one record per video with full metadata.
void write_features_jsonl(const std::filesystem::path& path, const std::vector<FusedFeature>& features);
std::vector<FusedFeature> read_features_jsonl(const std::filesystem::path& path);

// Flat binary: "FCF1", little-endian u32 C, then one C×f64 record per video.
void write_features_binary(const std::filesystem::path& path, const std::vector<FusedFeature>& features);
std::vector<std::vector<double>> read_features_binary(const std::filesystem::path& path);

}  // namespace freqclue
