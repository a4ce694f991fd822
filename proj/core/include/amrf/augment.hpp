#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amrf/image.hpp"

namespace amrf {

/// Augmentation kinds, listed in canonical pipeline order (geometric before
/// photometric).
enum class AugKind {
  Zoom,
  Rotation,
  GaussianBlur,
  Brightness,
  Contrast,
  Saturation,
  Hue,
};

inline constexpr std::array<AugKind, 7> kPipelineOrder = {
    AugKind::Zoom,       AugKind::Rotation, AugKind::GaussianBlur, AugKind::Brightness,
    AugKind::Contrast,   AugKind::Saturation, AugKind::Hue,
};

const char* to_string(AugKind kind);
std::optional<AugKind> aug_kind_from_string(std::string_view name);
bool is_geometric(AugKind kind);

/// One augmentation method with its parameter range. Units: degrees for
/// Rotation, unitless factor for Zoom/Brightness/Saturation/Contrast,
/// fraction of the hue circle for Hue, odd kernel size for GaussianBlur.
struct AugmentationMethod {
  AugKind kind = AugKind::Rotation;
  double min_value = 0.0;
  double max_value = 0.0;

  bool operator==(const AugmentationMethod&) const = default;
};

void validate(const AugmentationMethod& method);

/// Ordered, versioned pool of methods; at most one method per kind.
struct AugmentationPool {
  int version = 1;
  std::vector<AugmentationMethod> methods;

  const AugmentationMethod* find(AugKind kind) const;

  bool operator==(const AugmentationPool&) const = default;
};

void validate(const AugmentationPool& pool);

/// Initial pool contents: rotation [-180, 180]; brightness, saturation and
/// contrast [0.5, 1.5]; hue [-0.5, 0.5]. Version 1.
AugmentationPool default_pool();

/// One sampled scalar per method, kept in canonical pipeline order.
struct AugmentationParams {
  std::vector<std::pair<AugKind, double>> values;

  std::optional<double> value_of(AugKind kind) const;
};

/// One independent uniform draw per method in the pool (GaussianBlur draws
/// uniformly over the odd integers in range). Draws depend only on
/// (seed, kind), not on pool ordering.
AugmentationParams sample_params(const AugmentationPool& pool, std::uint64_t seed);

/// A single draw from one method's range.
double sample_value(const AugmentationMethod& method, std::uint64_t seed);

/// Apply one method at a fixed parameter value. Geometric kinds transform
/// image and mask identically; photometric kinds pass the mask through
/// untouched. Identity parameters are exact no-ops.
std::pair<ImageBuffer, std::optional<BinaryMask>> apply(const AugmentationMethod& method,
                                                        double value, const ImageBuffer& image,
                                                        const BinaryMask* mask = nullptr);

struct PipelineResult {
  ImageBuffer image;
  BinaryMask mask;
  AugmentationParams params;
};

/// Sample parameters and apply every pool method in canonical order.
PipelineResult apply_pipeline(const AugmentationPool& pool, std::uint64_t seed,
                              const ImageBuffer& image, const BinaryMask& mask);

// Canonical JSON serialization: {"version": n, "methods": [{"kind", "min", "max"}]}.
std::string pool_to_json(const AugmentationPool& pool);
AugmentationPool pool_from_json(const std::string& text);
void save_pool(const AugmentationPool& pool, const std::filesystem::path& path);
AugmentationPool load_pool(const std::filesystem::path& path);

// Single-method photometric helpers reused by the synthetic generator.
ImageBuffer adjust_contrast(const ImageBuffer& image, double factor);

}  // namespace amrf
