#pragma once

#include "amrf/image.hpp"

namespace amrf {

/// Raw and central image moments of a binary mask. x indexes columns,
/// y indexes rows, origin top-left. Raw moments are exact integer sums over
/// true pixels (stored as doubles; values stay well below 2^53).
struct MomentSet {
  double m00 = 0;  // area
  double m10 = 0, m01 = 0;            // first-order raw moments
  double m11 = 0, m20 = 0, m02 = 0;   // second-order raw moments
  double mu_x = 0, mu_y = 0;          // centroid
  double cmu11 = 0, cmu20 = 0, cmu02 = 0;  // central second moments
};

MomentSet compute_moments(const BinaryMask& mask);

/// Principal-axis angle in degrees, normalized to (-90, 90]:
/// 0.5 * atan2(2 * cmu11, cmu20 - cmu02). Positive angles rotate from +x
/// towards +y (y grows downward); an isotropic mask measures 0 by the
/// atan2(0, 0) = 0 convention.
double orientation_angle(const MomentSet& moments);

/// Orientation analysis of a mask: centroid, axis angle and the bounding box
/// of the mask after derotating every true pixel by -alpha about the
/// centroid. If that box comes out taller than wide, alpha is folded by 90
/// degrees so the derotated content lands horizontal.
struct OrientedRegion {
  double mu_x = 0, mu_y = 0;
  double alpha_deg = 0;
  double x_min = 0, y_min = 0, x_max = 0, y_max = 0;  // derotated coordinates
};

OrientedRegion analyze_region(const BinaryMask& mask);

struct CropResult {
  ImageBuffer crop;
  BinaryMask crop_mask;
  double applied_angle_deg = 0;
  int margin = 0;
  std::int64_t pre_crop_mask_area = 0;  // rotated-mask popcount before cropping
};

/// Derotate image and mask by -alpha about the mask centroid (bilinear for
/// the image, nearest for the mask, canvas expanded so no mask pixel is
/// lost), then crop the bounding box of the rotated mask expanded by margin
/// and clipped to the canvas.
CropResult angle_adaptive_crop(const ImageBuffer& image, const BinaryMask& mask, int margin);

}  // namespace amrf
