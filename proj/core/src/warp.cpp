#include "amrf/warp.hpp"

#include <cmath>

namespace amrf {
namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

struct InverseRigid {
  // Maps output pixel (x, y) to source coordinates.
  double cos_t, sin_t, cx, cy, ox, oy;

  void map(double x, double y, double& sx, double& sy) const {
    const double dx = x + ox - cx;
    const double dy = y + oy - cy;
    sx = cos_t * dx + sin_t * dy + cx;
    sy = -sin_t * dx + cos_t * dy + cy;
  }
};

inline bool in_range(double s, int n) { return s >= 0.0 && s <= static_cast<double>(n - 1); }

inline void sample_bilinear(const ImageBuffer& src, double sx, double sy, std::uint8_t* out) {
  if (!in_range(sx, src.width) || !in_range(sy, src.height)) {
    out[0] = out[1] = out[2] = 0;
    return;
  }
  const int x0 = static_cast<int>(std::floor(sx));
  const int y0 = static_cast<int>(std::floor(sy));
  const int x1 = std::min(x0 + 1, src.width - 1);
  const int y1 = std::min(y0 + 1, src.height - 1);
  const double fx = sx - x0;
  const double fy = sy - y0;
  const double w00 = (1.0 - fx) * (1.0 - fy);
  const double w10 = fx * (1.0 - fy);
  const double w01 = (1.0 - fx) * fy;
  const double w11 = fx * fy;
  for (int c = 0; c < 3; ++c) {
    const double v = w00 * src.at(x0, y0, c) + w10 * src.at(x1, y0, c) +
                     w01 * src.at(x0, y1, c) + w11 * src.at(x1, y1, c);
    out[c] = static_cast<std::uint8_t>(std::lround(std::min(255.0, std::max(0.0, v))));
  }
}

inline bool sample_nearest(const BinaryMask& src, double sx, double sy) {
  const long xi = std::lround(sx);
  const long yi = std::lround(sy);
  if (xi < 0 || yi < 0 || xi >= src.width || yi >= src.height) return false;
  return src.at(static_cast<int>(xi), static_cast<int>(yi));
}

}  // namespace

ImageBuffer rotate_image(const ImageBuffer& src, double angle_deg, double cx, double cy,
                         int out_w, int out_h, double ox, double oy) {
  const double t = angle_deg * kDegToRad;
  const InverseRigid inv{std::cos(t), std::sin(t), cx, cy, ox, oy};
  ImageBuffer out(out_w, out_h);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double sx, sy;
      inv.map(x, y, sx, sy);
      sample_bilinear(src, sx, sy, &out.at(x, y, 0));
    }
  }
  return out;
}

BinaryMask rotate_mask(const BinaryMask& src, double angle_deg, double cx, double cy,
                       int out_w, int out_h, double ox, double oy) {
  const double t = angle_deg * kDegToRad;
  const InverseRigid inv{std::cos(t), std::sin(t), cx, cy, ox, oy};
  BinaryMask out(out_w, out_h);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double sx, sy;
      inv.map(x, y, sx, sy);
      if (sample_nearest(src, sx, sy)) out.set(x, y, true);
    }
  }
  return out;
}

ImageBuffer rotate_image_centered(const ImageBuffer& src, double angle_deg) {
  return rotate_image(src, angle_deg, (src.width - 1) / 2.0, (src.height - 1) / 2.0, src.width,
                      src.height);
}

BinaryMask rotate_mask_centered(const BinaryMask& src, double angle_deg) {
  return rotate_mask(src, angle_deg, (src.width - 1) / 2.0, (src.height - 1) / 2.0, src.width,
                     src.height);
}

ImageBuffer zoom_image(const ImageBuffer& src, double factor) {
  const double cx = (src.width - 1) / 2.0;
  const double cy = (src.height - 1) / 2.0;
  ImageBuffer out(src.width, src.height);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      const double sx = (x - cx) / factor + cx;
      const double sy = (y - cy) / factor + cy;
      sample_bilinear(src, sx, sy, &out.at(x, y, 0));
    }
  }
  return out;
}

BinaryMask zoom_mask(const BinaryMask& src, double factor) {
  const double cx = (src.width - 1) / 2.0;
  const double cy = (src.height - 1) / 2.0;
  BinaryMask out(src.width, src.height);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      const double sx = (x - cx) / factor + cx;
      const double sy = (y - cy) / factor + cy;
      if (sample_nearest(src, sx, sy)) out.set(x, y, true);
    }
  }
  return out;
}

std::vector<double> gaussian_kernel(int ksize) {
  const int radius = (ksize - 1) / 2;
  const double sigma = 0.3 * (radius - 1) + 0.8;
  std::vector<double> kernel(static_cast<std::size_t>(ksize));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
    kernel[static_cast<std::size_t>(i + radius)] = w;
    sum += w;
  }
  for (double& w : kernel) w /= sum;
  return kernel;
}

namespace {

inline int reflect101(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

}  // namespace

ImageBuffer gaussian_blur(const ImageBuffer& src, int ksize) {
  if (ksize == 1) return src;
  const auto kernel = gaussian_kernel(ksize);
  const int radius = (ksize - 1) / 2;
  const int w = src.width;
  const int h = src.height;

  std::vector<double> tmp(static_cast<std::size_t>(w) * h * 3);
  // Horizontal pass.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (int k = -radius; k <= radius; ++k) {
        const int xs = reflect101(x + k, w);
        const double kw = kernel[static_cast<std::size_t>(k + radius)];
        for (int c = 0; c < 3; ++c) acc[c] += kw * src.at(xs, y, c);
      }
      for (int c = 0; c < 3; ++c) tmp[(static_cast<std::size_t>(y) * w + x) * 3 + c] = acc[c];
    }
  }
  // Vertical pass.
  ImageBuffer out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (int k = -radius; k <= radius; ++k) {
        const int ys = reflect101(y + k, h);
        const double kw = kernel[static_cast<std::size_t>(k + radius)];
        for (int c = 0; c < 3; ++c) acc[c] += kw * tmp[(static_cast<std::size_t>(ys) * w + x) * 3 + c];
      }
      for (int c = 0; c < 3; ++c) {
        out.at(x, y, c) =
            static_cast<std::uint8_t>(std::lround(std::min(255.0, std::max(0.0, acc[c]))));
      }
    }
  }
  return out;
}

}  // namespace amrf
