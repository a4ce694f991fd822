#pragma once

#include "amrf/image.hpp"

namespace amrf {

// Geometric resampling shared by the augmentation pipeline, the
// angle-adaptive crop and the synthetic generator.
//
// Angle convention used throughout: angles are in degrees and rotate content
// from the +x axis towards the +y axis (y grows downward). A horizontal
// feature rotated by +30 measures +30 with orientation_angle().

/// Rotate content by angle_deg about (cx, cy). The output canvas is
/// out_w x out_h and output pixel (x, y) corresponds to global position
/// (x + ox, y + oy). Out-of-canvas samples are black. Bilinear resampling.
ImageBuffer rotate_image(const ImageBuffer& src, double angle_deg, double cx, double cy,
                         int out_w, int out_h, double ox = 0.0, double oy = 0.0);

/// Mask counterpart of rotate_image; nearest-neighbor, fill false.
BinaryMask rotate_mask(const BinaryMask& src, double angle_deg, double cx, double cy,
                       int out_w, int out_h, double ox = 0.0, double oy = 0.0);

/// Rotate about the image center, canvas size preserved.
ImageBuffer rotate_image_centered(const ImageBuffer& src, double angle_deg);
BinaryMask rotate_mask_centered(const BinaryMask& src, double angle_deg);

/// Scale content about the image center; canvas size preserved. factor > 1
/// enlarges (edges crop away), factor < 1 shrinks (borders fill black/false).
ImageBuffer zoom_image(const ImageBuffer& src, double factor);
BinaryMask zoom_mask(const BinaryMask& src, double factor);

/// Separable Gaussian blur with odd kernel size k and
/// sigma = 0.3 * ((k - 1) / 2 - 1) + 0.8, reflect-101 borders. k = 1 is a
/// no-op copy.
ImageBuffer gaussian_blur(const ImageBuffer& src, int ksize);

/// The normalized 1-D kernel used by gaussian_blur.
std::vector<double> gaussian_kernel(int ksize);

}  // namespace amrf
