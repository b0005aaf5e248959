#include "freqclue/backbone.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "freqclue/error.hpp"
#include "freqclue/fileutil.hpp"
#include "freqclue/parallel.hpp"

namespace freqclue {
namespace {

std::size_t parse_size(std::string_view text, std::string_view what) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::kConfig, "invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::size_t> parse_list(std::string_view text, std::string_view what) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find('/', start), text.size());
    out.push_back(parse_size(text.substr(start, end - start), what));
    start = end + 1;
  }
  return out;
}

std::string join(const std::vector<std::size_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += '/';
    out += std::to_string(values[i]);
  }
  return out;
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::size_t conv_out(std::size_t in, std::size_t stride) { return (in - 1) / stride + 1; }

}  // namespace

BackboneSpec BackboneSpec::parse(std::string_view text) {
  BackboneSpec spec;
  if (text == "identity") return spec;
  if (text.starts_with("file:")) {
    spec.kind = BackboneKind::kTensorFile;
    spec.path = std::string(text.substr(5));
    if (spec.path.empty()) throw Error(ErrorKind::kConfig, "file backbone needs a path");
    return spec;
  }
  if (!text.starts_with("randconv")) {
    throw Error(ErrorKind::kConfig, "unknown backbone '" + std::string(text) + "' (identity|randconv:...|file:...)");
  }
  spec.kind = BackboneKind::kRandConv;
  std::size_t layers = 2;
  std::vector<std::size_t> channels{8};
  std::vector<std::size_t> strides{2};
  std::string_view params = text.substr(std::string_view("randconv").size());
  if (!params.empty()) {
    if (params.front() != ':') throw Error(ErrorKind::kConfig, "expected 'randconv:<params>'");
    params.remove_prefix(1);
  }
  while (!params.empty()) {
    const auto comma = std::min(params.find(','), params.size());
    const auto item = params.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kConfig, "randconv parameter '" + std::string(item) + "' is not key=value");
    }
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if (key == "layers") {
      layers = parse_size(value, "layers");
    } else if (key == "channels") {
      channels = parse_list(value, "channels");
    } else if (key == "strides") {
      strides = parse_list(value, "strides");
    } else if (key == "seed") {
      std::uint64_t s = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), s);
      if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw Error(ErrorKind::kConfig, "invalid seed '" + std::string(value) + "'");
      }
      spec.seed = s;
    } else {
      throw Error(ErrorKind::kConfig, "unknown randconv parameter '" + std::string(key) + "'");
    }
    params.remove_prefix(std::min(comma + 1, params.size()));
  }
  if (layers == 0) throw Error(ErrorKind::kConfig, "randconv needs at least one layer");
  auto broadcast = [&](std::vector<std::size_t>& v, std::string_view what) {
    if (v.size() == 1) v.assign(layers, v.front());
    if (v.size() != layers) {
      throw Error(ErrorKind::kConfig, std::string(what) + " list length does not match layers=" +
                                          std::to_string(layers));
    }
    if (std::find(v.begin(), v.end(), 0) != v.end()) {
      throw Error(ErrorKind::kConfig, std::string(what) + " must be positive");
    }
  };
  broadcast(channels, "channels");
  broadcast(strides, "strides");
  spec.channels = channels;
  spec.strides = strides;
  return spec;
}

std::string BackboneSpec::to_string() const {
  switch (kind) {
    case BackboneKind::kIdentity: return "identity";
    case BackboneKind::kTensorFile: return "file:" + path;
    case BackboneKind::kRandConv:
      return "randconv:layers=" + std::to_string(layers()) + ",channels=" + join(channels) +
             ",strides=" + join(strides) + ",seed=" + std::to_string(seed);
  }
  return "identity";
}

Backbone::Backbone(BackboneSpec spec, std::size_t input_channels)
    : spec_(std::move(spec)), input_channels_(input_channels) {
  if (spec_.kind != BackboneKind::kRandConv) return;
  std::mt19937_64 rng(spec_.seed);
  std::size_t in = input_channels_;
  for (std::size_t l = 0; l < spec_.layers(); ++l) {
    ConvLayer layer{in, spec_.channels[l], spec_.strides[l], {}, {}};
    std::normal_distribution<double> weight(0.0, std::sqrt(2.0 / static_cast<double>(in * 9)));
    layer.weights.resize(layer.out_channels * in * 9);
    for (double& w : layer.weights) w = weight(rng);
    layer.bias.assign(layer.out_channels, 0.0);
    layers_.push_back(std::move(layer));
    in = spec_.channels[l];
  }
}

std::array<std::size_t, 4> Backbone::output_shape(const std::array<std::size_t, 4>& input) const {
  switch (spec_.kind) {
    case BackboneKind::kIdentity:
    case BackboneKind::kTensorFile:
      return input;
    case BackboneKind::kRandConv: {
      std::array<std::size_t, 4> s = input;
      for (const auto& layer : layers_) {
        s[1] = layer.out_channels;
        s[2] = conv_out(s[2], layer.stride);
        s[3] = conv_out(s[3], layer.stride);
      }
      return s;
    }
  }
  return input;
}

std::filesystem::path Backbone::tensor_path(std::string_view video_id) const {
  std::string p = spec_.path;
  const auto pos = p.find("{id}");
  if (pos != std::string::npos) p.replace(pos, 4, video_id);
  return p;
}

FeatureMapSequence Backbone::featurize(const Tensor4& frames, std::string_view video_id,
                                       std::size_t workers) const {
  switch (spec_.kind) {
    case BackboneKind::kIdentity:
      return frames;
    case BackboneKind::kTensorFile: {
      const auto path = tensor_path(video_id);
      Tensor4 t = read_tensor_file(path);
      if (frames.frames() != 0 && t.frames() != frames.frames()) {
        throw Error(ErrorKind::kFormat, "tensor file '" + path.string() + "' has N=" + std::to_string(t.frames()) +
                                            ", expected " + std::to_string(frames.frames()) + " frames");
      }
      return t;
    }
    case BackboneKind::kRandConv:
      break;
  }
  if (frames.channels() != input_channels_) {
    throw Error(ErrorKind::kShape, "randconv backbone expects " + std::to_string(input_channels_) +
                                       " input channels, got " + std::to_string(frames.channels()));
  }
  const auto out_shape = output_shape(frames.dims());
  Tensor4 result(out_shape[0], out_shape[1], out_shape[2], out_shape[3]);
  parallel_for(frames.frames(), workers, [&](std::size_t n) {
    // Single-frame activations, channel-major.
    std::size_t h = frames.height(), w = frames.width();
    std::vector<double> act(frames.plane(n, 0).data(), frames.plane(n, 0).data() + frames.channels() * h * w);
    for (const auto& layer : layers_) {
      const std::size_t oh = conv_out(h, layer.stride);
      const std::size_t ow = conv_out(w, layer.stride);
      std::vector<double> next(layer.out_channels * oh * ow, 0.0);
      for (std::size_t o = 0; o < layer.out_channels; ++o) {
        for (std::size_t y = 0; y < oh; ++y) {
          for (std::size_t x = 0; x < ow; ++x) {
            double acc = layer.bias[o];
            for (std::size_t i = 0; i < layer.in_channels; ++i) {
              const double* kernel = &layer.weights[(o * layer.in_channels + i) * 9];
              for (int dy = -1; dy <= 1; ++dy) {
                const long sy = static_cast<long>(y * layer.stride) + dy;
                if (sy < 0 || sy >= static_cast<long>(h)) continue;
                for (int dx = -1; dx <= 1; ++dx) {
                  const long sx = static_cast<long>(x * layer.stride) + dx;
                  if (sx < 0 || sx >= static_cast<long>(w)) continue;
                  acc += kernel[(dy + 1) * 3 + (dx + 1)] * act[(i * h + sy) * w + sx];
                }
              }
            }
            next[(o * oh + y) * ow + x] = std::max(acc, 0.0);
          }
        }
      }
      act = std::move(next);
      h = oh;
      w = ow;
    }
    std::copy(act.begin(), act.end(), result.plane(n, 0).data());
  });
  return result;
}

void write_tensor_file(const std::filesystem::path& path, const Tensor4& tensor) {
  std::string out = "FMT1";
  for (std::size_t d : tensor.dims()) put_u32(out, static_cast<std::uint32_t>(d));
  out.reserve(out.size() + tensor.size() * 4);
  for (double v : tensor.values()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  write_file_atomic(path, out);
}

Tensor4 read_tensor_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorKind::kIo, "tensor file not found: '" + path.string() + "'");
  const std::string bytes = read_file(path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 20 || std::memcmp(p, "FMT1", 4) != 0) {
    throw Error(ErrorKind::kFormat, "'" + path.string() + "' is not an FMT1 tensor file");
  }
  const std::size_t n = get_u32(p + 4), c = get_u32(p + 8), h = get_u32(p + 12), w = get_u32(p + 16);
  const std::size_t count = n * c * h * w;
  if (count == 0 || bytes.size() != 20 + 4 * count) {
    throw Error(ErrorKind::kFormat, "tensor file '" + path.string() + "' header " + std::to_string(n) + "x" +
                                        std::to_string(c) + "x" + std::to_string(h) + "x" + std::to_string(w) +
                                        " does not match payload of " + std::to_string(bytes.size() - 20) +
                                        " bytes (wrong shape or byte order?)");
  }
  Tensor4 t(n, c, h, w);
  auto values = t.values();
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = static_cast<double>(std::bit_cast<float>(get_u32(p + 20 + 4 * i)));
  }
  return t;
}

}  // namespace freqclue
