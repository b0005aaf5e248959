#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace freqclue {

enum class ErrorKind {
  kInvalidInput,    // non-finite values, malformed arguments
  kShape,           // tensor dimensions disagree
  kPartition,       // block grid does not divide the plane
  kDegenerateBand,  // weight matrix too small for three bands
  kConfig,          // invalid configuration or unknown kind
  kFormat,          // file magic / layout mismatch
  kIo,              // missing or unreadable file
  kManifest,        // malformed manifest entry
  kIngestion,       // empty video, unusable frames
  kGeometry,        // crop box outside the frame
  kDegenerateData,  // e.g. single-class training set
  kUndefinedMetric, // e.g. AUC without both classes
  kFingerprint,     // mismatched config fingerprints
};

std::string_view to_string(ErrorKind kind);

/// Process exit code used by the CLI for each error kind. Distinct per kind.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace freqclue
