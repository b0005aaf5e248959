#include "freqclue/pipeline.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <json.hpp>

#include "freqclue/dct.hpp"
#include "freqclue/error.hpp"
#include "freqclue/fileutil.hpp"
#include "freqclue/parallel.hpp"

namespace freqclue {

using nlohmann::json;

void PipelineConfig::validate() const {
  if (frames == 0) throw Error(ErrorKind::kConfig, "frame count must be >= 1");
  if (grid.rows == 0 || grid.cols == 0) throw Error(ErrorKind::kConfig, "block grid must be nonempty");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorKind::kConfig, "beta must be finite and > 0");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw Error(ErrorKind::kConfig, "epsilon must be >= 0");
  if (input_size == 0) throw Error(ErrorKind::kConfig, "input size must be >= 1");
}

std::string PipelineConfig::canonical() const {
  // nlohmann::json objects are key-sorted and doubles print round-trip exact.
  const json j{{"frames", frames},         {"grid", grid.to_string()},
               {"beta", beta},             {"reduction", std::string(to_string(reduction))},
               {"backbone", backbone.to_string()}, {"epsilon", epsilon},
               {"input_size", input_size}};
  return j.dump();
}

std::string PipelineConfig::fingerprint() const { return freqclue::fingerprint(canonical()); }

std::vector<double> fuse(const CompactFeature& compact, const AttentionMap& attention) {
  const auto& v = compact.values;
  if (v.dim(0) != attention.frames() || v.dim(2) != attention.blocks()) {
    throw Error(ErrorKind::kShape, "fusion needs matching N and K: compact " + std::to_string(v.dim(0)) + "x" +
                                       std::to_string(v.dim(2)) + ", attention " +
                                       std::to_string(attention.frames()) + "x" +
                                       std::to_string(attention.blocks()));
  }
  std::vector<double> f(v.dim(1), 0.0);
  for (std::size_t n = 0; n < v.dim(0); ++n) {
    for (std::size_t c = 0; c < v.dim(1); ++c) {
      for (std::size_t k = 0; k < v.dim(2); ++k) f[c] += v(n, c, k) * attention(n, k);
    }
  }
  return f;
}

FrequencyAnalysis analyze(const FeatureMapSequence& maps, const PipelineConfig& config, std::size_t workers) {
  config.validate();
  partition_blocks(maps, config.grid);
  const Spectrum raw = dct2_batch(maps, workers);
  const WeightMatrix weights = build_weight_matrix(raw.height(), raw.width(), config.beta);
  FrequencyAnalysis out{apply_weights(raw, weights), {}, {}, {}};
  out.compact = compact(out.weighted, config.grid, config.reduction);
  out.attention = attention(out.weighted, config.grid, config.epsilon);
  out.fused = fuse(out.compact, out.attention);
  return out;
}

FusedFeature extract(const VideoSample& video, const PipelineConfig& config, const Backbone& backbone,
                     std::size_t workers) {
  config.validate();
  if (video.frames.empty()) throw Error(ErrorKind::kIngestion, "video '" + video.id + "' has no frames");
  Tensor4 frames;
  if (backbone.needs_pixels()) {
    frames = load_video(video, config.frames, config.input_size);
  } else {
    frames = Tensor4(config.frames, 0, 0, 0);
  }
  FeatureMapSequence maps;
  try {
    maps = backbone.featurize(frames, video.id, workers);
    FusedFeature feature;
    feature.values = analyze(maps, config, workers).fused;
    feature.id = video.id;
    feature.label = video.label;
    feature.split = video.split;
    feature.frames = maps.frames();
    feature.blocks = config.grid.blocks();
    feature.beta = config.beta;
    feature.backbone = config.backbone.to_string();
    feature.fingerprint = config.fingerprint();
    for (double v : feature.values) {
      if (!std::isfinite(v)) throw Error(ErrorKind::kInvalidInput, "non-finite fused feature");
    }
    return feature;
  } catch (const Error& e) {
    throw Error(e.kind(), "video '" + video.id + "': " + e.what());
  }
}

FusedFeature extract(const VideoSample& video, const PipelineConfig& config, std::size_t workers) {
  return extract(video, config, Backbone(config.backbone), workers);
}

std::vector<FusedFeature> extract_all(const std::vector<VideoSample>& videos, const PipelineConfig& config,
                                      std::size_t workers) {
  config.validate();
  const Backbone backbone(config.backbone);
  if (backbone.needs_pixels()) {
    // Map size is known up front; reject a bad grid before decoding anything.
    const auto shape = backbone.output_shape({config.frames, 3, config.input_size, config.input_size});
    partition_blocks(shape[2], shape[3], config.grid);
  }
  std::vector<FusedFeature> out(videos.size());
  parallel_for(videos.size(), workers, [&](std::size_t i) { out[i] = extract(videos[i], config, backbone, 1); });
  return out;
}

void write_features_jsonl(const std::filesystem::path& path, const std::vector<FusedFeature>& features) {
  std::string text;
  for (const auto& f : features) {
    const json j{{"id", f.id},
                 {"label", std::string(to_string(f.label))},
                 {"split", f.split},
                 {"fingerprint", f.fingerprint},
                 {"frames", f.frames},
                 {"blocks", f.blocks},
                 {"beta", f.beta},
                 {"backbone", f.backbone},
                 {"dim", f.values.size()},
                 {"values", f.values}};
    text += j.dump() + "\n";
  }
  write_file_atomic(path, text);
}

std::vector<FusedFeature> read_features_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open feature file '" + path.string() + "'");
  std::vector<FusedFeature> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      FusedFeature f;
      f.id = j.at("id").get<std::string>();
      f.label = parse_label(j.at("label").get<std::string>());
      f.split = j.value("split", "");
      f.fingerprint = j.at("fingerprint").get<std::string>();
      f.frames = j.at("frames").get<std::size_t>();
      f.blocks = j.at("blocks").get<std::size_t>();
      f.beta = j.at("beta").get<double>();
      f.backbone = j.at("backbone").get<std::string>();
      f.values = j.at("values").get<std::vector<double>>();
      if (j.contains("dim") && j.at("dim").get<std::size_t>() != f.values.size()) {
        throw Error(ErrorKind::kFormat, "dim does not match number of values");
      }
      out.push_back(std::move(f));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kFormat, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorKind::kFormat, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_features_binary(const std::filesystem::path& path, const std::vector<FusedFeature>& features) {
  const std::size_t dim = features.empty() ? 0 : features.front().values.size();
  std::string out = "FCF1";
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((dim >> (8 * i)) & 0xff));
  for (const auto& f : features) {
    if (f.values.size() != dim) throw Error(ErrorKind::kShape, "feature records have differing dimensions");
    for (double v : f.values) {
      const auto bits = std::bit_cast<std::uint64_t>(v);
      for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
    }
  }
  write_file_atomic(path, out);
}

std::vector<std::vector<double>> read_features_binary(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 8 || std::memcmp(p, "FCF1", 4) != 0) {
    throw Error(ErrorKind::kFormat, "'" + path.string() + "' is not an FCF1 feature file");
  }
  std::size_t dim = 0;
  for (int i = 0; i < 4; ++i) dim |= static_cast<std::size_t>(p[4 + i]) << (8 * i);
  const std::size_t payload = bytes.size() - 8;
  if ((dim == 0 && payload != 0) || (dim != 0 && payload % (8 * dim) != 0)) {
    throw Error(ErrorKind::kFormat, "FCF1 payload of " + std::to_string(payload) +
                                        " bytes is not a whole number of records of dim " + std::to_string(dim));
  }
  std::vector<std::vector<double>> out(dim == 0 ? 0 : payload / (8 * dim), std::vector<double>(dim));
  for (std::size_t r = 0; r < out.size(); ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      std::uint64_t bits = 0;
      const unsigned char* q = p + 8 + 8 * (r * dim + c);
      for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(q[i]) << (8 * i);
      out[r][c] = std::bit_cast<double>(bits);
    }
  }
  return out;
}

}  // namespace freqclue
