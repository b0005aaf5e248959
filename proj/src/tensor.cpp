#include "freqclue/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "freqclue/error.hpp"

namespace freqclue {

Plane::Plane(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorKind::kShape, "plane " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                                       " given " + std::to_string(data_.size()) + " values");
  }
}

bool Plane::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Plane Tensor4::copy_plane(std::size_t n, std::size_t c) const {
  auto src = plane(n, c);
  return Plane(height(), width(), std::vector<double>(src.begin(), src.end()));
}

void Tensor4::set_plane(std::size_t n, std::size_t c, const Plane& p) {
  if (p.rows() != height() || p.cols() != width()) {
    throw Error(ErrorKind::kShape, "plane shape does not match tensor trailing dims");
  }
  std::copy(p.values().begin(), p.values().end(), plane(n, c).begin());
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kPartition: return "partition";
    case ErrorKind::kDegenerateBand: return "degenerate-band";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kManifest: return "manifest";
    case ErrorKind::kIngestion: return "ingestion";
    case ErrorKind::kGeometry: return "geometry";
    case ErrorKind::kDegenerateData: return "degenerate-data";
    case ErrorKind::kUndefinedMetric: return "undefined-metric";
    case ErrorKind::kFingerprint: return "fingerprint";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return 3;
    case ErrorKind::kManifest: return 4;
    case ErrorKind::kFormat: return 5;
    case ErrorKind::kShape: return 6;
    case ErrorKind::kPartition: return 7;
    case ErrorKind::kConfig: return 8;
    case ErrorKind::kInvalidInput: return 9;
    case ErrorKind::kDegenerateBand: return 10;
    case ErrorKind::kIngestion: return 11;
    case ErrorKind::kGeometry: return 12;
    case ErrorKind::kDegenerateData: return 13;
    case ErrorKind::kUndefinedMetric: return 14;
    case ErrorKind::kFingerprint: return 15;
  }
  return 1;
}

}  // namespace freqclue
