#include "amrf/image.hpp"

#include <cmath>
#include <numeric>

namespace amrf {

ImageBuffer::ImageBuffer(int w, int h, std::uint8_t fill)
    : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, fill) {
  if (w < 1 || h < 1) raise(ErrorCode::ValueOutOfRange, "image dimensions must be >= 1");
}

BinaryMask::BinaryMask(int w, int h, bool fill)
    : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {
  if (w < 1 || h < 1) raise(ErrorCode::ValueOutOfRange, "mask dimensions must be >= 1");
}

std::int64_t BinaryMask::popcount() const {
  return std::accumulate(bits.begin(), bits.end(), std::int64_t{0},
                         [](std::int64_t acc, std::uint8_t b) { return acc + (b != 0 ? 1 : 0); });
}

std::vector<std::uint8_t> to_gray_u8(const ImageBuffer& image) {
  std::vector<std::uint8_t> gray(static_cast<std::size_t>(image.width) * image.height);
  const std::uint8_t* p = image.data.data();
  for (std::size_t i = 0; i < gray.size(); ++i, p += 3) {
    gray[i] = static_cast<std::uint8_t>(std::lround(gray_value(p[0], p[1], p[2])));
  }
  return gray;
}

double mean_gray(const ImageBuffer& image) {
  double sum = 0.0;
  const std::uint8_t* p = image.data.data();
  const std::int64_t n = image.pixel_count();
  for (std::int64_t i = 0; i < n; ++i, p += 3) sum += gray_value(p[0], p[1], p[2]);
  return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

double laplacian_variance(const ImageBuffer& image) {
  const int w = image.width;
  const int h = image.height;
  if (w < 3 || h < 3) return 0.0;

  std::vector<double> gray(static_cast<std::size_t>(w) * h);
  const std::uint8_t* p = image.data.data();
  for (std::size_t i = 0; i < gray.size(); ++i, p += 3) gray[i] = gray_value(p[0], p[1], p[2]);

  double sum = 0.0, sum_sq = 0.0;
  const std::int64_t n = static_cast<std::int64_t>(w - 2) * (h - 2);
  for (int y = 1; y + 1 < h; ++y) {
    const double* row = gray.data() + static_cast<std::size_t>(y) * w;
    for (int x = 1; x + 1 < w; ++x) {
      const double lap = row[x - w] + row[x + w] + row[x - 1] + row[x + 1] - 4.0 * row[x];
      sum += lap;
      sum_sq += lap * lap;
    }
  }
  const double mean = sum / static_cast<double>(n);
  return sum_sq / static_cast<double>(n) - mean * mean;
}

void require_same_size(const ImageBuffer& image, const BinaryMask& mask) {
  if (image.width != mask.width || image.height != mask.height) {
    raise(ErrorCode::DimensionMismatch, "image and mask dimensions differ");
  }
}

void require_same_size(const BinaryMask& a, const BinaryMask& b) {
  if (a.width != b.width || a.height != b.height) {
    raise(ErrorCode::DimensionMismatch, "mask dimensions differ");
  }
}

}  // namespace amrf
