#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "amrf/image.hpp"

namespace amrf {

/// Decode an 8-bit PNG as RGB. Grayscale and palette images are promoted to
/// RGB, alpha is stripped. 16-bit files are rejected.
ImageBuffer load_image(const std::filesystem::path& path);

/// Decode an 8-bit single-channel PNG as a mask. Pixel values must be
/// exactly 0 or 255.
BinaryMask load_mask(const std::filesystem::path& path);

void save_image(const ImageBuffer& image, const std::filesystem::path& path);
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

// In-memory encoders; file writes go through write_file_atomic.
std::vector<std::uint8_t> encode_image_png(const ImageBuffer& image);
std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask);

}  // namespace amrf
