#pragma once

#include <filesystem>
#include <stdexcept>

#include "patchset/image.hpp"

namespace patchset::io {

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decodes PNG, JPEG or binary PPM/PGM (P5/P6) by content sniffing.
/// Grayscale is promoted to RGB by channel replication; alpha is composited
/// onto black. Throws DecodeError.
RgbImage read_image(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const RgbImage& img);
void write_ppm(const std::filesystem::path& path, const RgbImage& img);

}  // namespace patchset::io
