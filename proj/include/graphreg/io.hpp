#pragma once

#include "graphreg/types.hpp"

#include <filesystem>
#include <string>

namespace graphreg {

/// 16-bit binary PGM (P5, maxval 65535). Values are clamped to [0, 1] and
/// mapped linearly, so the round trip error is at most 0.5 / 65535.
void write_pgm16(const Image& image, const std::filesystem::path& path);
[[nodiscard]] Image read_pgm16(const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double ("%.17g"); "inf"/"-inf"/"nan"
/// for non-finite values.
[[nodiscard]] std::string format_double(double x);

/// Sinogram as CSV text, one line per angle.
void write_sinogram_csv(const Sinogram& s, const std::filesystem::path& path);
[[nodiscard]] Sinogram read_sinogram_csv(const std::filesystem::path& path);

/// Writes `content` to `path`, creating parent directories. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace graphreg
