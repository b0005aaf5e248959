#include "freqclue/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>

#include "freqclue/error.hpp"
#include "freqclue/fileutil.hpp"

namespace freqclue {

using nlohmann::json;

Label parse_label(std::string_view text) {
  if (text == "real") return Label::kReal;
  if (text == "fake") return Label::kFake;
  throw Error(ErrorKind::kManifest, "label must be 'real' or 'fake', got '" + std::string(text) + "'");
}

std::string_view to_string(Label label) { return label == Label::kFake ? "fake" : "real"; }

std::optional<CropBox> VideoSample::crop_for(std::size_t index) const {
  if (crops.empty()) return std::nullopt;
  if (crops.size() == 1) return crops.front();
  return crops.at(index);
}

std::vector<VideoSample> DatasetManifest::select(std::string_view split) const {
  std::vector<VideoSample> out;
  for (const auto& s : samples) {
    if (split.empty() || s.split == split) out.push_back(s);
  }
  return out;
}

namespace {

CropBox parse_crop(const json& j) {
  if (j.is_array() && j.size() == 4) {
    return CropBox{j[0].get<std::size_t>(), j[1].get<std::size_t>(), j[2].get<std::size_t>(),
                   j[3].get<std::size_t>()};
  }
  return CropBox{j.at("x").get<std::size_t>(), j.at("y").get<std::size_t>(), j.at("w").get<std::size_t>(),
                 j.at("h").get<std::size_t>()};
}

json crop_to_json(const CropBox& c) { return json{{"x", c.x}, {"y", c.y}, {"w", c.w}, {"h", c.h}}; }

VideoSample parse_sample(const json& j, const std::filesystem::path& base) {
  VideoSample s;
  s.id = j.at("id").get<std::string>();
  s.label = parse_label(j.at("label").get<std::string>());
  for (const auto& f : j.at("frames")) {
    std::filesystem::path p = f.get<std::string>();
    s.frames.push_back((p.is_absolute() ? p : base / p).lexically_normal());
  }
  if (s.frames.empty()) throw Error(ErrorKind::kManifest, "video '" + s.id + "' lists no frames");
  if (auto it = j.find("crop"); it != j.end() && !it->is_null()) {
    // A single box (object or [x,y,w,h]) or an array of per-frame boxes.
    if (it->is_object() || (it->is_array() && !it->empty() && it->front().is_number())) {
      s.crops.push_back(parse_crop(*it));
    } else {
      for (const auto& c : *it) s.crops.push_back(parse_crop(c));
      if (s.crops.size() != s.frames.size()) {
        throw Error(ErrorKind::kManifest, "video '" + s.id + "' has " + std::to_string(s.crops.size()) +
                                              " crop boxes for " + std::to_string(s.frames.size()) + " frames");
      }
    }
    for (const auto& c : s.crops) {
      if (c.w == 0 || c.h == 0) throw Error(ErrorKind::kManifest, "video '" + s.id + "' has an empty crop box");
    }
  }
  if (auto it = j.find("split"); it != j.end() && !it->is_null()) s.split = it->get<std::string>();
  return s;
}

}  // namespace

DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open manifest '" + path.string() + "'");
  const auto base = path.parent_path();
  DatasetManifest manifest;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      if (!j.contains("id") && j.contains("provenance")) {
        manifest.provenance = j.at("provenance").get<std::string>();
        continue;
      }
      VideoSample s = parse_sample(j, base);
      if (!seen.insert(s.id).second) throw Error(ErrorKind::kManifest, "duplicate video id '" + s.id + "'");
      manifest.samples.push_back(std::move(s));
    } catch (const Error& e) {
      throw Error(ErrorKind::kManifest, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kManifest, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return manifest;
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  const auto base = std::filesystem::absolute(path).parent_path();
  std::string text;
  if (!manifest.provenance.empty()) text += json{{"provenance", manifest.provenance}}.dump() + "\n";
  for (const auto& s : manifest.samples) {
    json frames = json::array();
    for (const auto& f : s.frames) {
      auto rel = std::filesystem::absolute(f).lexically_relative(base);
      frames.push_back((rel.empty() ? f : rel).generic_string());
    }
    json j{{"id", s.id}, {"label", to_string(s.label)}, {"frames", frames}, {"split", s.split}};
    if (s.crops.size() == 1) {
      j["crop"] = crop_to_json(s.crops.front());
    } else if (!s.crops.empty()) {
      json crops = json::array();
      for (const auto& c : s.crops) crops.push_back(crop_to_json(c));
      j["crop"] = crops;
    }
    text += j.dump() + "\n";
  }
  write_file_atomic(path, text);
}

std::vector<std::size_t> sample_frames(std::size_t total, std::size_t n) {
  if (total == 0) throw Error(ErrorKind::kIngestion, "cannot sample frames from an empty video");
  if (n == 0) throw Error(ErrorKind::kConfig, "frame count must be >= 1");
  std::vector<std::size_t> idx(n);
  for (std::size_t j = 0; j < n; ++j) idx[j] = j * total / n;
  return idx;
}

std::vector<std::filesystem::path> sample_frames(const VideoSample& video, std::size_t n) {
  if (video.frames.empty()) throw Error(ErrorKind::kIngestion, "video '" + video.id + "' has no frames");
  std::vector<std::filesystem::path> out;
  for (std::size_t i : sample_frames(video.frames.size(), n)) out.push_back(video.frames[i]);
  return out;
}

Image resize_bilinear(const Image& image, std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) throw Error(ErrorKind::kGeometry, "resize target must be nonempty");
  if (image.height() == height && image.width() == width) return image;
  Image out(image.channels(), height, width);
  const double sy = static_cast<double>(image.height()) / height;
  const double sx = static_cast<double>(image.width()) / width;
  const auto last_y = static_cast<double>(image.height() - 1);
  const auto last_x = static_cast<double>(image.width() - 1);
  for (std::size_t y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, last_y);
    const auto y0 = static_cast<std::size_t>(fy);
    const std::size_t y1 = std::min(y0 + 1, image.height() - 1);
    const double wy = fy - y0;
    for (std::size_t x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, last_x);
      const auto x0 = static_cast<std::size_t>(fx);
      const std::size_t x1 = std::min(x0 + 1, image.width() - 1);
      const double wx = fx - x0;
      for (std::size_t c = 0; c < image.channels(); ++c) {
        const double top = image.at(c, y0, x0) * (1 - wx) + image.at(c, y0, x1) * wx;
        const double bottom = image.at(c, y1, x0) * (1 - wx) + image.at(c, y1, x1) * wx;
        out.at(c, y, x) = top * (1 - wy) + bottom * wy;
      }
    }
  }
  return out;
}

void preprocess(const Image& frame, const std::optional<CropBox>& crop, std::size_t target, Tensor4& out,
                std::size_t n) {
  if (frame.channels() != 1 && frame.channels() != 3) {
    throw Error(ErrorKind::kIngestion, "frames must have 1 or 3 channels");
  }
  if (out.channels() != 3 || out.height() != target || out.width() != target || n >= out.frames()) {
    throw Error(ErrorKind::kShape, "preprocess output tensor has the wrong shape");
  }
  Image region = frame;
  if (crop) {
    if (crop->w == 0 || crop->h == 0 || crop->x + crop->w > frame.width() || crop->y + crop->h > frame.height()) {
      throw Error(ErrorKind::kGeometry, "crop box (" + std::to_string(crop->x) + "," + std::to_string(crop->y) +
                                            "," + std::to_string(crop->w) + "," + std::to_string(crop->h) +
                                            ") outside frame " + std::to_string(frame.width()) + "x" +
                                            std::to_string(frame.height()));
    }
    region = Image(frame.channels(), crop->h, crop->w);
    for (std::size_t c = 0; c < frame.channels(); ++c) {
      for (std::size_t y = 0; y < crop->h; ++y) {
        for (std::size_t x = 0; x < crop->w; ++x) region.at(c, y, x) = frame.at(c, crop->y + y, crop->x + x);
      }
    }
  }
  const Image sized = resize_bilinear(region, target, target);
  for (std::size_t c = 0; c < 3; ++c) {
    const std::size_t src_c = sized.channels() == 1 ? 0 : c;
    for (std::size_t y = 0; y < target; ++y) {
      for (std::size_t x = 0; x < target; ++x) {
        out(n, c, y, x) = (sized.at(src_c, y, x) - kImageNetMean[c]) / kImageNetStd[c];
      }
    }
  }
}

Tensor4 preprocess(const Image& frame, const std::optional<CropBox>& crop, std::size_t target) {
  Tensor4 out(1, 3, target, target);
  preprocess(frame, crop, target, out, 0);
  return out;
}

Tensor4 load_video(const VideoSample& video, std::size_t n, std::size_t target) {
  if (video.frames.empty()) throw Error(ErrorKind::kIngestion, "video '" + video.id + "' has no frames");
  const auto indices = sample_frames(video.frames.size(), n);
  Tensor4 out(n, 3, target, target);
  for (std::size_t j = 0; j < n; ++j) {
    try {
      preprocess(read_image(video.frames[indices[j]]), video.crop_for(indices[j]), target, out, j);
    } catch (const Error& e) {
      throw Error(e.kind(), "video '" + video.id + "' frame " + std::to_string(indices[j]) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace freqclue
