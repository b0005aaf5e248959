#include "freqclue/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <numeric>
#include <random>
#include <sstream>

#include "freqclue/dataset.hpp"
#include "freqclue/error.hpp"
#include "freqclue/fileutil.hpp"
#include "freqclue/parallel.hpp"
#include "freqclue/perturb.hpp"

namespace freqclue {

namespace {
// Field contrast: per-frame standardized field mapped to 0.5 ± 40/255 per unit std.
constexpr double kFieldContrast = 40.0 / 255.0;

std::string video_id(Label label, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%04zu", label == Label::kFake ? "fake" : "real", index);
  return buf;
}

void standardize_to_intensity(Image& field) {
  auto v = field.values();
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / static_cast<double>(v.size()));
  for (double& x : v) x = 0.5 + kFieldContrast * (sd > 0 ? (x - mean) / sd : 0.0);
}

}  // namespace

UpsampleMode parse_upsample_mode(std::string_view text) {
  if (text == "nearest") return UpsampleMode::kNearest;
  if (text == "bilinear") return UpsampleMode::kBilinear;
  throw Error(ErrorKind::kConfig, "unknown upsample mode '" + std::string(text) + "' (nearest|bilinear)");
}

std::string_view to_string(UpsampleMode mode) { return mode == UpsampleMode::kNearest ? "nearest" : "bilinear"; }

void SynthConfig::validate() const {
  if (upsample_factor != 2 && upsample_factor != 4) {
    throw Error(ErrorKind::kConfig, "upsample factor must be 2 or 4 (got " + std::to_string(upsample_factor) +
                                        "; factor 1 would make real and fake identical)");
  }
  if (size == 0 || size % upsample_factor != 0) {
    throw Error(ErrorKind::kConfig, "texture size " + std::to_string(size) + " is not divisible by factor " +
                                        std::to_string(upsample_factor));
  }
  if (count_per_class == 0) throw Error(ErrorKind::kConfig, "count per class must be >= 1");
  if (frames == 0) throw Error(ErrorKind::kConfig, "frame count must be >= 1");
  if (!(smoothness > 0.0)) throw Error(ErrorKind::kConfig, "smoothness must be > 0");
  if (!(temporal_correlation >= 0.0 && temporal_correlation < 1.0)) {
    throw Error(ErrorKind::kConfig, "temporal correlation must be in [0, 1)");
  }
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) {
    throw Error(ErrorKind::kConfig, "train fraction must be in [0, 1]");
  }
}

Image upsample(const Image& image, std::size_t factor, UpsampleMode mode) {
  if (factor == 0) throw Error(ErrorKind::kConfig, "upsample factor must be >= 1");
  if (mode == UpsampleMode::kBilinear) {
    return resize_bilinear(image, image.height() * factor, image.width() * factor);
  }
  Image out(image.channels(), image.height() * factor, image.width() * factor);
  for (std::size_t c = 0; c < image.channels(); ++c) {
    for (std::size_t y = 0; y < out.height(); ++y) {
      for (std::size_t x = 0; x < out.width(); ++x) out.at(c, y, x) = image.at(c, y / factor, x / factor);
    }
  }
  return out;
}

std::vector<Image> synth_video(const SynthConfig& config, Label label, std::size_t index) {
  config.validate();
  const bool fake = label == Label::kFake;
  const std::size_t side = fake ? config.size / config.upsample_factor : config.size;
  const double smooth = fake ? config.smoothness / static_cast<double>(config.upsample_factor) : config.smoothness;
  const double rho = config.temporal_correlation;
  const double innovation = std::sqrt(1.0 - rho * rho);

  std::mt19937_64 rng(frame_seed(config.seed, video_id(label, index), 0));
  std::normal_distribution<double> normal(0.0, 1.0);

  Image state(1, side, side);
  for (double& v : state.values()) v = normal(rng);

  std::vector<Image> frames;
  frames.reserve(config.frames);
  for (std::size_t f = 0; f < config.frames; ++f) {
    for (double& v : state.values()) v = rho * v + innovation * normal(rng);
    Image field = gaussian_blur(state, smooth, 0);
    standardize_to_intensity(field);
    if (fake) field = upsample(field, config.upsample_factor, config.mode);
    frames.push_back(quantize_8bit(field));
  }
  return frames;
}

DatasetManifest synth_corpus(const SynthConfig& config, const std::filesystem::path& out_dir,
                             std::size_t workers) {
  config.validate();
  std::filesystem::create_directories(out_dir);

  DatasetManifest manifest;
  // Shortest round-trip text for the doubles, so the fingerprint is exact.
  auto num = [](double v) { return nlohmann::json(v).dump(); };
  std::ostringstream settings;
  settings << "count=" << config.count_per_class << " size=" << config.size << " factor=" << config.upsample_factor
           << " mode=" << to_string(config.mode) << " frames=" << config.frames
           << " smoothness=" << num(config.smoothness) << " rho=" << num(config.temporal_correlation)
           << " train=" << num(config.train_fraction) << " seed=" << config.seed;
  manifest.provenance = "synthetic textures: " + settings.str() + " fingerprint=" + fingerprint(settings.str());

  // Per-class split, fixed by the seed.
  const auto train_count = static_cast<std::size_t>(std::lround(config.train_fraction * config.count_per_class));
  std::vector<std::size_t> order(config.count_per_class);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 split_rng(config.seed ^ 0x9e3779b97f4a7c15ull);
  std::shuffle(order.begin(), order.end(), split_rng);
  std::vector<bool> is_train(config.count_per_class, false);
  for (std::size_t i = 0; i < train_count; ++i) is_train[order[i]] = true;

  const std::size_t total = 2 * config.count_per_class;
  manifest.samples.resize(total);
  parallel_for(total, workers, [&](std::size_t slot) {
    // Interleave classes: real_0, fake_0, real_1, fake_1, ...
    const Label label = slot % 2 == 0 ? Label::kReal : Label::kFake;
    const std::size_t index = slot / 2;
    VideoSample& sample = manifest.samples[slot];
    sample.id = video_id(label, index);
    sample.label = label;
    sample.split = is_train[index] ? "train" : "test";
    const auto dir = out_dir / sample.id;
    std::filesystem::create_directories(dir);
    const auto frames = synth_video(config, label, index);
    for (std::size_t f = 0; f < frames.size(); ++f) {
      char name[32];
      std::snprintf(name, sizeof(name), "frame_%03zu.pgm", f);
      write_image(dir / name, frames[f]);
      sample.frames.push_back(dir / name);
    }
  });
  write_manifest(out_dir / "manifest.jsonl", manifest);
  return manifest;
}

}  // namespace freqclue
