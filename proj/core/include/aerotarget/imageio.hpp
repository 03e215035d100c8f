#pragma once

#include <filesystem>

#include "aerotarget/image.hpp"

namespace aerotarget {

/// Decodes an 8-bit PNG or JPEG file (detected by magic bytes) to RGB.
/// Gray, palette and alpha inputs are expanded/flattened to 3 channels.
ImageRgb load_image(const std::filesystem::path& path);

void save_png(const ImageRgb& img, const std::filesystem::path& path);
void save_jpeg(const ImageRgb& img, const std::filesystem::path& path, int quality = 92);

}  // namespace aerotarget
