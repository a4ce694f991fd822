#include "amrf/moments.hpp"

#include <algorithm>
#include <cmath>

#include "amrf/warp.hpp"

namespace amrf {
namespace {

constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

double normalize_half_turn(double deg) {
  while (deg <= -90.0) deg += 180.0;
  while (deg > 90.0) deg -= 180.0;
  return deg;
}

// Derotated-pixel bounding box for a fixed angle.
void derotated_bbox(const BinaryMask& mask, double mu_x, double mu_y, double alpha_deg,
                    double& x_min, double& y_min, double& x_max, double& y_max) {
  const double t = -alpha_deg * kDegToRad;
  const double c = std::cos(t);
  const double s = std::sin(t);
  x_min = y_min = 1e300;
  x_max = y_max = -1e300;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      const double dx = x - mu_x;
      const double dy = y - mu_y;
      const double rx = c * dx - s * dy + mu_x;
      const double ry = s * dx + c * dy + mu_y;
      x_min = std::min(x_min, rx);
      x_max = std::max(x_max, rx);
      y_min = std::min(y_min, ry);
      y_max = std::max(y_max, ry);
    }
  }
}

}  // namespace

MomentSet compute_moments(const BinaryMask& mask) {
  MomentSet m;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      const double fx = x;
      const double fy = y;
      m.m00 += 1.0;
      m.m10 += fx;
      m.m01 += fy;
      m.m11 += fx * fy;
      m.m20 += fx * fx;
      m.m02 += fy * fy;
    }
  }
  if (m.m00 == 0.0) raise(ErrorCode::EmptyMask, "mask has no true pixels");
  m.mu_x = m.m10 / m.m00;
  m.mu_y = m.m01 / m.m00;
  m.cmu11 = m.m11 / m.m00 - m.mu_x * m.mu_y;
  m.cmu20 = m.m20 / m.m00 - m.mu_x * m.mu_x;
  m.cmu02 = m.m02 / m.m00 - m.mu_y * m.mu_y;
  return m;
}

double orientation_angle(const MomentSet& moments) {
  if (moments.m00 <= 0.0) raise(ErrorCode::EmptyMask, "moments of an empty mask");
  const double angle = 0.5 * std::atan2(2.0 * moments.cmu11, moments.cmu20 - moments.cmu02);
  return normalize_half_turn(angle * kRadToDeg);
}

OrientedRegion analyze_region(const BinaryMask& mask) {
  const MomentSet m = compute_moments(mask);
  OrientedRegion region;
  region.mu_x = m.mu_x;
  region.mu_y = m.mu_y;
  region.alpha_deg = orientation_angle(m);
  derotated_bbox(mask, m.mu_x, m.mu_y, region.alpha_deg, region.x_min, region.y_min,
                 region.x_max, region.y_max);
  // Codes are wider than tall; fold the axis if derotation left the content
  // vertical.
  if (region.y_max - region.y_min > region.x_max - region.x_min) {
    region.alpha_deg = normalize_half_turn(region.alpha_deg + 90.0);
    derotated_bbox(mask, m.mu_x, m.mu_y, region.alpha_deg, region.x_min, region.y_min,
                   region.x_max, region.y_max);
  }
  return region;
}

CropResult angle_adaptive_crop(const ImageBuffer& image, const BinaryMask& mask, int margin) {
  require_same_size(image, mask);
  if (margin < 0) raise(ErrorCode::ValueOutOfRange, "margin must be >= 0");
  const OrientedRegion region = analyze_region(mask);  // EmptyMask if blank

  // Expanded canvas: rotate the source canvas corners by -alpha about the
  // centroid, so every source pixel keeps a home.
  const double t = -region.alpha_deg * kDegToRad;
  const double c = std::cos(t);
  const double s = std::sin(t);
  double gx_min = 1e300, gy_min = 1e300, gx_max = -1e300, gy_max = -1e300;
  const double corners[4][2] = {{0.0, 0.0},
                                {static_cast<double>(image.width - 1), 0.0},
                                {0.0, static_cast<double>(image.height - 1)},
                                {static_cast<double>(image.width - 1),
                                 static_cast<double>(image.height - 1)}};
  for (const auto& corner : corners) {
    const double dx = corner[0] - region.mu_x;
    const double dy = corner[1] - region.mu_y;
    const double rx = c * dx - s * dy + region.mu_x;
    const double ry = s * dx + c * dy + region.mu_y;
    gx_min = std::min(gx_min, rx);
    gx_max = std::max(gx_max, rx);
    gy_min = std::min(gy_min, ry);
    gy_max = std::max(gy_max, ry);
  }
  const double ox = std::floor(gx_min);
  const double oy = std::floor(gy_min);
  const int out_w = static_cast<int>(std::ceil(gx_max) - ox) + 1;
  const int out_h = static_cast<int>(std::ceil(gy_max) - oy) + 1;

  const ImageBuffer rotated = rotate_image(image, -region.alpha_deg, region.mu_x, region.mu_y,
                                           out_w, out_h, ox, oy);
  const BinaryMask rotated_mask = rotate_mask(mask, -region.alpha_deg, region.mu_x, region.mu_y,
                                              out_w, out_h, ox, oy);

  int bx0 = out_w, by0 = out_h, bx1 = -1, by1 = -1;
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      if (!rotated_mask.at(x, y)) continue;
      bx0 = std::min(bx0, x);
      bx1 = std::max(bx1, x);
      by0 = std::min(by0, y);
      by1 = std::max(by1, y);
    }
  }
  if (bx1 < 0) raise(ErrorCode::EmptyMask, "mask vanished during derotation");

  bx0 = std::max(0, bx0 - margin);
  by0 = std::max(0, by0 - margin);
  bx1 = std::min(out_w - 1, bx1 + margin);
  by1 = std::min(out_h - 1, by1 + margin);

  CropResult result;
  result.applied_angle_deg = region.alpha_deg;
  result.margin = margin;
  result.pre_crop_mask_area = rotated_mask.popcount();
  result.crop = ImageBuffer(bx1 - bx0 + 1, by1 - by0 + 1);
  result.crop_mask = BinaryMask(bx1 - bx0 + 1, by1 - by0 + 1);
  for (int y = by0; y <= by1; ++y) {
    for (int x = bx0; x <= bx1; ++x) {
      for (int ch = 0; ch < 3; ++ch) {
        result.crop.at(x - bx0, y - by0, ch) = rotated.at(x, y, ch);
      }
      if (rotated_mask.at(x, y)) result.crop_mask.set(x - bx0, y - by0, true);
    }
  }
  return result;
}

}  // namespace amrf
