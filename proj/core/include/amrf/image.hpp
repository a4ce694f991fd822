#pragma once

#include <cstdint>
#include <vector>

#include "amrf/error.hpp"

namespace amrf {

/// 8-bit RGB raster, row-major, interleaved channels.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // width * height * 3 bytes

  ImageBuffer() = default;
  ImageBuffer(int w, int h, std::uint8_t fill = 0);

  std::uint8_t& at(int x, int y, int c) { return data[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
  std::uint8_t at(int x, int y, int c) const { return data[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
  std::int64_t pixel_count() const { return static_cast<std::int64_t>(width) * height; }
  bool empty() const { return width == 0 || height == 0; }

  bool operator==(const ImageBuffer&) const = default;
};

/// Row-major boolean raster; values are strictly 0 or 1.
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;  // width * height entries, each 0/1

  BinaryMask() = default;
  BinaryMask(int w, int h, bool fill = false);

  bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
  std::int64_t popcount() const;
  bool empty() const { return width == 0 || height == 0; }

  bool operator==(const BinaryMask&) const = default;
};

/// Rec. 601 luma of one pixel.
inline double gray_value(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

/// Luma plane rounded to 8 bits.
std::vector<std::uint8_t> to_gray_u8(const ImageBuffer& image);

/// Mean luma over all pixels.
double mean_gray(const ImageBuffer& image);

/// Variance of the 3x3 Laplacian response over interior pixels; the
/// sharpness statistic used by crop screening. 0 for images smaller than 3x3.
double laplacian_variance(const ImageBuffer& image);

void require_same_size(const ImageBuffer& image, const BinaryMask& mask);
void require_same_size(const BinaryMask& a, const BinaryMask& b);

}  // namespace amrf
