#include "freqclue/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "freqclue/error.hpp"

namespace freqclue {
namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return ext;
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

// Skips whitespace and '#' comments in a netpbm header.
void skip_header_space(std::istream& in) {
  while (in) {
    const int ch = in.peek();
    if (ch == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else if (std::isspace(ch)) {
      in.get();
    } else {
      break;
    }
  }
}

Image read_netpbm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open image '" + path.string() + "'");
  std::string magic;
  in >> magic;
  if (magic != "P5" && magic != "P6" && magic != "P2") {
    throw Error(ErrorKind::kFormat, "unsupported netpbm magic '" + magic + "' in '" + path.string() + "'");
  }
  std::size_t width = 0, height = 0;
  int maxval = 0;
  skip_header_space(in);
  in >> width;
  skip_header_space(in);
  in >> height;
  skip_header_space(in);
  in >> maxval;
  if (!in || width == 0 || height == 0 || maxval <= 0 || maxval > 255) {
    throw Error(ErrorKind::kFormat, "bad netpbm header in '" + path.string() + "' (8-bit only)");
  }
  const std::size_t channels = magic == "P6" ? 3 : 1;
  Image img(channels, height, width);
  const double scale = maxval;
  if (magic == "P2") {
    for (std::size_t y = 0; y < height; ++y) {
      for (std::size_t x = 0; x < width; ++x) {
        int v = 0;
        if (!(in >> v)) throw Error(ErrorKind::kFormat, "truncated image data in '" + path.string() + "'");
        img.at(0, y, x) = v / scale;
      }
    }
    return img;
  }
  in.get();  // single whitespace after maxval
  std::vector<std::uint8_t> raw(channels * width * height);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw Error(ErrorKind::kFormat, "truncated image data in '" + path.string() + "'");
  }
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      for (std::size_t c = 0; c < channels; ++c) {
        img.at(c, y, x) = raw[(y * width + x) * channels + c] / scale;
      }
    }
  }
  return img;
}

Image read_png(const std::filesystem::path& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    const bool missing = !std::filesystem::exists(path);
    throw Error(missing ? ErrorKind::kIo : ErrorKind::kFormat,
                "cannot read PNG '" + path.string() + "': " + png.message);
  }
  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const std::size_t channels = color ? 3 : 1;
  std::vector<std::uint8_t> raw(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, raw.data(), 0, nullptr)) {
    png_image_free(&png);
    throw Error(ErrorKind::kFormat, "cannot decode PNG '" + path.string() + "': " + png.message);
  }
  Image img(channels, png.height, png.width);
  for (std::size_t y = 0; y < png.height; ++y) {
    for (std::size_t x = 0; x < png.width; ++x) {
      for (std::size_t c = 0; c < channels; ++c) {
        img.at(c, y, x) = raw[(y * png.width + x) * channels + c] / 255.0;
      }
    }
  }
  return img;
}

std::vector<std::uint8_t> interleave(const Image& image) {
  std::vector<std::uint8_t> raw(image.values().size());
  const std::size_t ch = image.channels();
  for (std::size_t y = 0; y < image.height(); ++y) {
    for (std::size_t x = 0; x < image.width(); ++x) {
      for (std::size_t c = 0; c < ch; ++c) raw[(y * image.width() + x) * ch + c] = to_byte(image.at(c, y, x));
    }
  }
  return raw;
}

}  // namespace

Image read_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorKind::kIo, "image not found: '" + path.string() + "'");
  const std::string ext = lower_extension(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return read_netpbm(path);
  throw Error(ErrorKind::kFormat, "unsupported image extension '" + ext + "' for '" + path.string() + "'");
}

void write_image(const std::filesystem::path& path, const Image& image) {
  if (image.channels() != 1 && image.channels() != 3) {
    throw Error(ErrorKind::kFormat, "only 1- or 3-channel images can be written");
  }
  const std::string ext = lower_extension(path);
  const auto raw = interleave(image);
  if (ext == ".png") {
    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(image.width());
    png.height = static_cast<png_uint_32>(image.height());
    png.format = image.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&png, path.c_str(), 0, raw.data(), 0, nullptr)) {
      throw Error(ErrorKind::kIo, "cannot write PNG '" + path.string() + "': " + png.message);
    }
    return;
  }
  if (ext != ".pgm" && ext != ".ppm" && ext != ".pnm") {
    throw Error(ErrorKind::kFormat, "unsupported image extension '" + ext + "' for '" + path.string() + "'");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write image '" + path.string() + "'");
  out << (image.channels() == 3 ? "P6" : "P5") << '\n' << image.width() << ' ' << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw Error(ErrorKind::kIo, "cannot write image '" + path.string() + "'");
}

Image quantize_8bit(const Image& image) {
  Image out = image;
  for (double& v : out.values()) v = to_byte(v) / 255.0;
  return out;
}

}  // namespace freqclue
