// freqclue: synth → perturb → extract → train → eval, plus inspection dumps.

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "freqclue/classifier.hpp"
#include "freqclue/dataset.hpp"
#include "freqclue/dct.hpp"
#include "freqclue/error.hpp"
#include "freqclue/fileutil.hpp"
#include "freqclue/metrics.hpp"
#include "freqclue/perturb.hpp"
#include "freqclue/pipeline.hpp"
#include "freqclue/synth.hpp"
#include "freqclue/weighting.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace freqclue;

namespace {

constexpr int kUsageExit = 2;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("freqclue");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("FREQCLUE_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"; only honor it when asked for.
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
  }
}

std::size_t default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct PipelineFlags {
  std::size_t frames = 16;
  std::string blocks = "4x4";
  double beta = kDefaultBeta;
  std::string reduction = "max";
  std::string backbone = "identity";
  double epsilon = kDefaultEpsilon;
  std::size_t size = 64;

  void add_to(CLI::App* app) {
    app->add_option("--frames", frames, "Frames sampled per video (N)")->capture_default_str();
    app->add_option("--blocks", blocks, "Block grid RxC (K = R*C)")->capture_default_str();
    app->add_option("--beta", beta, "Band weight base")->capture_default_str();
    app->add_option("--reduction", reduction, "Per-block reduction: max|min|avg|absmax")->capture_default_str();
    app->add_option("--backbone", backbone, "identity | randconv:<params> | file:<path with {id}>")
        ->capture_default_str();
    app->add_option("--epsilon", epsilon, "Attention normalization epsilon")->capture_default_str();
    app->add_option("--size", size, "Preprocessed frame side in pixels")->capture_default_str();
  }

  PipelineConfig config() const {
    PipelineConfig c;
    c.frames = frames;
    c.grid = BlockGrid::parse(blocks);
    c.beta = beta;
    c.reduction = parse_reduction(reduction);
    c.backbone = BackboneSpec::parse(backbone);
    c.epsilon = epsilon;
    c.input_size = size;
    c.validate();
    return c;
  }
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- synth -----------------------------------------------------------------

struct SynthFlags {
  fs::path out;
  SynthConfig cfg;
  std::string mode = "nearest";
  std::size_t workers = default_workers();
};

void run_synth(const SynthFlags& f) {
  SynthConfig cfg = f.cfg;
  cfg.mode = parse_upsample_mode(f.mode);
  cfg.validate();
  spdlog::info("writing {} videos per class to {}", cfg.count_per_class, f.out.string());
  const auto manifest = synth_corpus(cfg, f.out, f.workers);
  std::cout << (f.out / "manifest.jsonl").string() << "\n";
  spdlog::info("{} videos, {}", manifest.samples.size(), manifest.provenance);
}

// ---- perturb ---------------------------------------------------------------

struct PerturbFlags {
  fs::path manifest;
  fs::path out;
  std::string kind;
  std::optional<double> sigma;
  std::size_t radius = 0;
  std::optional<int> quality;
  std::optional<double> gain;
  std::uint64_t seed = 0;
  std::string split;
  std::size_t workers = default_workers();
};

void run_perturb(const PerturbFlags& f) {
  PerturbationSpec spec;
  spec.kind = parse_perturbation_kind(f.kind);
  spec.radius = f.radius;
  spec.seed = f.seed;
  // Strengths have no canonical default; the flag for the chosen kind is required.
  auto need = [&](bool present, const char* flag) {
    if (!present) throw Error(ErrorKind::kConfig, std::string(to_string(spec.kind)) + " needs " + flag);
  };
  switch (spec.kind) {
    case PerturbationKind::kGaussianBlur:
    case PerturbationKind::kGaussianNoise:
      need(f.sigma.has_value(), "--sigma");
      spec.sigma = *f.sigma;
      break;
    case PerturbationKind::kJpegLike:
      need(f.quality.has_value(), "--quality");
      spec.quality = *f.quality;
      break;
    case PerturbationKind::kContrast:
      need(f.gain.has_value(), "--gain");
      spec.gain = *f.gain;
      break;
  }
  spec.validate();
  const auto in = read_manifest(f.manifest);
  spdlog::info("perturbing {} ({}) into {}", f.manifest.string(), spec.describe(), f.out.string());
  auto result = perturb_manifest(in, spec, f.out, f.split, f.workers);
  const auto out_manifest = f.out / "manifest.jsonl";
  write_manifest(out_manifest, result);
  std::cout << out_manifest.string() << "\n";
}

// ---- extract ---------------------------------------------------------------

struct ExtractFlags {
  fs::path manifest;
  fs::path out;
  std::optional<fs::path> binary;
  std::string split;
  PipelineFlags pipeline;
  std::size_t workers = default_workers();
};

void run_extract(const ExtractFlags& f) {
  const PipelineConfig cfg = f.pipeline.config();
  const auto manifest = read_manifest(f.manifest);
  const auto videos = manifest.select(f.split);
  if (videos.empty()) throw Error(ErrorKind::kManifest, "no videos selected from '" + f.manifest.string() + "'");
  spdlog::info("extracting {} videos with {} workers (config {})", videos.size(), f.workers, cfg.fingerprint());
  const auto features = extract_all(videos, cfg, f.workers);
  write_features_jsonl(f.out, features);
  if (f.binary) write_features_binary(*f.binary, features);
  std::cout << dump(json{{"features", f.out.string()},
                         {"videos", features.size()},
                         {"dim", features.front().values.size()},
                         {"frames", features.front().frames},
                         {"blocks", features.front().blocks},
                         {"fingerprint", cfg.fingerprint()},
                         {"config", json::parse(cfg.canonical())}});
}

// ---- train -----------------------------------------------------------------

std::vector<LabeledFeature> labeled(const std::vector<FusedFeature>& all, const std::string& split) {
  std::vector<LabeledFeature> out;
  for (const auto& f : all) {
    if (split.empty() || f.split == split) out.push_back({f.values, f.label});
  }
  return out;
}

std::string common_fingerprint(const std::vector<FusedFeature>& all, const fs::path& path) {
  if (all.empty()) throw Error(ErrorKind::kFormat, "feature file '" + path.string() + "' is empty");
  for (const auto& f : all) {
    if (f.fingerprint != all.front().fingerprint) {
      throw Error(ErrorKind::kFingerprint, "feature file '" + path.string() + "' mixes configs (" +
                                               all.front().fingerprint + " vs " + f.fingerprint + " at '" + f.id +
                                               "')");
    }
  }
  return all.front().fingerprint;
}

struct TrainFlags {
  fs::path features;
  fs::path out;
  TrainConfig cfg;
  std::string train_split = "train";
  std::string val_split = "val";
};

void run_train(const TrainFlags& f) {
  f.cfg.validate();
  const auto all = read_features_jsonl(f.features);
  const std::string fp = common_fingerprint(all, f.features);
  const auto train_set = labeled(all, f.train_split);
  const auto val_set = f.val_split.empty() ? std::vector<LabeledFeature>{} : labeled(all, f.val_split);
  if (train_set.empty()) {
    throw Error(ErrorKind::kDegenerateData, "no '" + f.train_split + "' samples in '" + f.features.string() + "'");
  }
  spdlog::info("training on {} samples ({} validation)", train_set.size(), val_set.size());
  TrainHistory history;
  LinearHead head = train(train_set, f.cfg, val_set, &history);
  head.fingerprint = fp;
  write_head(f.out, head, f.cfg);
  std::vector<ScoredLabel> scored;
  for (const auto& s : train_set) scored.push_back({score(head, s.values), s.label});
  std::cout << dump(json{{"head", f.out.string()},
                         {"train_samples", train_set.size()},
                         {"validation_samples", val_set.size()},
                         {"train_accuracy", accuracy(scored)},
                         {"final_loss", history.epoch_loss.empty() ? 0.0 : history.epoch_loss.back()},
                         {"final_learning_rate",
                          history.learning_rate.empty() ? f.cfg.learning_rate : history.learning_rate.back()},
                         {"fingerprint", fp}});
}

// ---- eval ------------------------------------------------------------------

struct EvalFlags {
  fs::path head;
  fs::path features;
  std::optional<fs::path> out;
  std::string split = "test";
  double threshold = 0.5;
  bool force = false;
};

void run_eval(const EvalFlags& f) {
  const LinearHead head = read_head(f.head);
  const auto all = read_features_jsonl(f.features);
  const std::string fp = common_fingerprint(all, f.features);
  if (fp != head.fingerprint) {
    if (!f.force) {
      throw Error(ErrorKind::kFingerprint, "head '" + f.head.string() + "' was trained on config " +
                                               head.fingerprint + " but '" + f.features.string() + "' has " + fp +
                                               " (use --force to compare anyway)");
    }
    spdlog::warn("fingerprint mismatch ignored: head {} vs features {}", head.fingerprint, fp);
  }
  std::vector<ScoredLabel> scored;
  std::size_t fakes = 0;
  for (const auto& s : all) {
    if (!f.split.empty() && s.split != f.split) continue;
    scored.push_back({score(head, s.values), s.label});
    fakes += s.label == Label::kFake;
  }
  if (scored.empty()) throw Error(ErrorKind::kDegenerateData, "no '" + f.split + "' samples to evaluate");
  const json report{{"accuracy", accuracy(scored, f.threshold)},
                    {"auc", auc(scored)},
                    {"samples", scored.size()},
                    {"fake", fakes},
                    {"real", scored.size() - fakes},
                    {"split", f.split},
                    {"threshold", f.threshold},
                    {"fingerprint", fp},
                    {"head_fingerprint", head.fingerprint}};
  const std::string text = dump(report);
  if (f.out) write_file_atomic(*f.out, text);
  std::cout << text;
}

// ---- inspect ---------------------------------------------------------------

struct InspectFlags {
  std::string what;
  std::size_t height = 64;
  std::size_t width = 64;
  std::optional<double> beta;  // set: print weights instead of α
  fs::path manifest;
  std::string id;
  std::string split;
  std::optional<fs::path> out;
  PipelineFlags pipeline;
  std::size_t workers = default_workers();
};

void emit(const InspectFlags& f, const std::string& text) {
  if (f.out) {
    write_file_atomic(*f.out, text);
  } else {
    std::cout << text;
  }
}

void run_inspect(const InspectFlags& f) {
  if (f.what == "bands") {
    const WeightMatrix w = build_weight_matrix(f.height, f.width, f.beta.value_or(kDefaultBeta));
    if (!f.beta) {
      emit(f, w.band_map());
      return;
    }
    std::ostringstream grid;
    for (std::size_t u = 0; u < w.height(); ++u) {
      for (std::size_t v = 0; v < w.width(); ++v) grid << (v ? " " : "") << json(w(u, v)).dump();
      grid << "\n";
    }
    emit(f, grid.str());
    return;
  }
  const PipelineConfig cfg = f.pipeline.config();
  const auto manifest = read_manifest(f.manifest);
  const Backbone backbone(cfg.backbone);

  auto maps_for = [&](const VideoSample& v) {
    const Tensor4 frames = backbone.needs_pixels() ? load_video(v, cfg.frames, cfg.input_size)
                                                   : Tensor4(cfg.frames, 0, 0, 0);
    return backbone.featurize(frames, v.id, f.workers);
  };

  if (f.what == "attention") {
    const auto it = std::find_if(manifest.samples.begin(), manifest.samples.end(),
                                 [&](const VideoSample& v) { return v.id == f.id; });
    if (it == manifest.samples.end()) {
      throw Error(ErrorKind::kManifest, "no video '" + f.id + "' in '" + f.manifest.string() + "'");
    }
    const auto analysis = analyze(maps_for(*it), cfg, f.workers);
    std::ostringstream csv;
    csv.precision(17);
    csv << "frame";
    for (std::size_t k = 0; k < analysis.attention.blocks(); ++k) csv << ",k" << k;
    csv << "\n";
    for (std::size_t n = 0; n < analysis.attention.frames(); ++n) {
      csv << n;
      for (std::size_t k = 0; k < analysis.attention.blocks(); ++k) csv << "," << analysis.attention(n, k);
      csv << "\n";
    }
    emit(f, csv.str());
    return;
  }

  if (f.what == "energy") {
    // Mean per-frame unweighted DCT energy in each band, by class.
    double sum[2][3] = {};
    std::size_t count[2] = {};
    for (const auto& v : manifest.select(f.split)) {
      const auto maps = maps_for(v);
      const Spectrum s = dct2_batch(maps, f.workers);
      const WeightMatrix bands = build_weight_matrix(s.height(), s.width(), 1.0);
      const int cls = static_cast<int>(v.label);
      for (std::size_t n = 0; n < s.frames(); ++n)
        for (std::size_t c = 0; c < s.channels(); ++c)
          for (std::size_t u = 0; u < s.height(); ++u)
            for (std::size_t w = 0; w < s.width(); ++w) sum[cls][bands.exponent(u, w)] += s(n, c, u, w) * s(n, c, u, w);
      count[cls] += s.frames();
    }
    json report{{"fingerprint", cfg.fingerprint()}};
    for (int cls : {0, 1}) {
      json bands = json::array();
      for (int b = 0; b < 3; ++b) bands.push_back(count[cls] ? sum[cls][b] / count[cls] : 0.0);
      report[std::string(to_string(static_cast<Label>(cls)))] = {{"frames", count[cls]}, {"band_energy", bands}};
    }
    emit(f, dump(report));
    return;
  }
  throw Error(ErrorKind::kConfig, "unknown inspect target '" + f.what + "' (bands|attention|energy)");
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Frequency-domain forgery features for face videos"};
  app.require_subcommand(1);

  SynthFlags synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic real/fake texture corpus");
  s->add_option("--out", synth.out, "Output directory")->required();
  s->add_option("--count", synth.cfg.count_per_class, "Videos per class")->capture_default_str();
  s->add_option("--size", synth.cfg.size, "Frame side in pixels")->capture_default_str();
  s->add_option("--factor", synth.cfg.upsample_factor, "Fake upsampling factor (2 or 4)")->capture_default_str();
  s->add_option("--mode", synth.mode, "Upsampling mode: nearest|bilinear")->capture_default_str();
  s->add_option("--frames", synth.cfg.frames, "Frames per video")->capture_default_str();
  s->add_option("--smoothness", synth.cfg.smoothness, "Field blur sigma in pixels")->capture_default_str();
  s->add_option("--temporal", synth.cfg.temporal_correlation, "AR(1) frame correlation")->capture_default_str();
  s->add_option("--train-fraction", synth.cfg.train_fraction, "Per-class train share")->capture_default_str();
  s->add_option("--seed", synth.cfg.seed, "Random seed")->capture_default_str();
  s->add_option("--workers", synth.workers, "Worker threads");
  s->callback([&] { run_synth(synth); });

  PerturbFlags perturb;
  auto* p = app.add_subcommand("perturb", "Write a perturbed copy of a corpus");
  p->add_option("--manifest", perturb.manifest, "Input manifest")->required();
  p->add_option("--out", perturb.out, "Output directory")->required();
  p->add_option("--kind", perturb.kind, "blur|noise|jpeg|contrast")->required();
  p->add_option("--sigma", perturb.sigma, "Blur sigma (pixels) or noise sigma ([0,1] units)");
  p->add_option("--radius", perturb.radius, "Blur kernel radius (0 = ceil(3 sigma))");
  p->add_option("--quality", perturb.quality, "jpeg-like quality 1..100");
  p->add_option("--gain", perturb.gain, "Contrast gain");
  p->add_option("--seed", perturb.seed, "Noise seed")->capture_default_str();
  p->add_option("--split", perturb.split, "Only perturb this split (default: all)");
  p->add_option("--workers", perturb.workers, "Worker threads");
  p->callback([&] { run_perturb(perturb); });

  ExtractFlags extract;
  auto* e = app.add_subcommand("extract", "Extract fused frequency features");
  e->add_option("--manifest", extract.manifest, "Input manifest")->required();
  e->add_option("--out", extract.out, "Output JSON-lines feature file")->required();
  e->add_option("--binary", extract.binary, "Also write an FCF1 binary feature file");
  e->add_option("--split", extract.split, "Only extract this split (default: all)");
  e->add_option("--workers", extract.workers, "Videos processed concurrently");
  extract.pipeline.add_to(e);
  e->callback([&] { run_extract(extract); });

  TrainFlags trainf;
  auto* t = app.add_subcommand("train", "Fit the logistic head on extracted features");
  t->add_option("--features", trainf.features, "Feature file (JSON lines)")->required();
  t->add_option("--out", trainf.out, "Output head file")->required();
  t->add_option("--lr", trainf.cfg.learning_rate, "Initial learning rate")->capture_default_str();
  t->add_option("--epochs", trainf.cfg.epochs, "Epochs")->capture_default_str();
  t->add_option("--batch-size", trainf.cfg.batch_size, "Minibatch size")->capture_default_str();
  t->add_option("--patience", trainf.cfg.patience, "Epochs without improvement before decay")
      ->capture_default_str();
  t->add_option("--seed", trainf.cfg.seed, "Shuffle seed")->capture_default_str();
  t->add_option("--train-split", trainf.train_split, "Split used for fitting")->capture_default_str();
  t->add_option("--val-split", trainf.val_split, "Split monitored for decay (falls back to train)")
      ->capture_default_str();
  t->callback([&] { run_train(trainf); });

  EvalFlags evalf;
  auto* v = app.add_subcommand("eval", "Score features with a head and report accuracy and AUC");
  v->add_option("--head", evalf.head, "Head file")->required();
  v->add_option("--features", evalf.features, "Feature file (JSON lines)")->required();
  v->add_option("--out", evalf.out, "Also write the JSON report here");
  v->add_option("--split", evalf.split, "Split to evaluate (empty = all)")->capture_default_str();
  v->add_option("--threshold", evalf.threshold, "Decision threshold for accuracy")->capture_default_str();
  v->add_flag("--force", evalf.force, "Evaluate despite a config fingerprint mismatch");
  v->callback([&] { run_eval(evalf); });

  InspectFlags inspect;
  auto* i = app.add_subcommand("inspect", "Dump band maps, attention or band energy");
  i->add_option("what", inspect.what, "bands | attention | energy")->required();
  i->add_option("--height", inspect.height, "bands: spectrum height")->capture_default_str();
  i->add_option("--width", inspect.width, "bands: spectrum width")->capture_default_str();
  i->add_option("--base", inspect.beta, "bands: print weights for this base instead of band indices");
  i->add_option("--manifest", inspect.manifest, "attention/energy: input manifest");
  i->add_option("--id", inspect.id, "attention: video id");
  i->add_option("--split", inspect.split, "energy: only this split");
  i->add_option("--out", inspect.out, "Write to a file instead of stdout");
  i->add_option("--workers", inspect.workers, "Worker threads");
  inspect.pipeline.add_to(i);
  i->callback([&] { run_inspect(inspect); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kUsageExit;
  } catch (const Error& err) {
    spdlog::error("{}: {}", to_string(err.kind()), err.what());
    return exit_code(err.kind());
  } catch (const std::exception& err) {
    spdlog::error("{}", err.what());
    return 1;
  }
  return 0;
}
