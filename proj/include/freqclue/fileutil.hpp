#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace freqclue {

/// Writes `content` to a sibling temp file and renames it over `path`, so
/// readers never observe a partial file. Creates parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// Hex fingerprint of a canonical settings string.
std::string fingerprint(std::string_view canonical);

}  // namespace freqclue
