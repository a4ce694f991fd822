#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "amrf/manifest.hpp"

namespace amrf {

/// Parameters for the synthetic code-image generator. Each sample renders one
/// dotted code block (dot box, glyph row, dot lines) dark on a value-noise
/// background, rotated by a per-sample angle and scaled by a per-sample zoom,
/// with the exact code rectangle as ground-truth mask.
struct SynthSpec {
  int count = 1;
  int width = 512;
  int height = 512;
  double angle_min = -60.0, angle_max = 60.0;  // degrees
  double zoom_min = 1.0, zoom_max = 1.0;       // content scale
  double contrast_min = 1.0, contrast_max = 1.0;
  int blur_min = 1, blur_max = 1;  // odd kernel sizes
  double style_mix = 0.5;          // fraction of F1 samples
  std::uint64_t seed = 0;
  std::string name = "synth";
  std::string split = "train";
};

void validate(const SynthSpec& spec);

/// Ground-truth sidecar written next to each image as <id>.meta.json.
struct SampleMeta {
  double angle_deg = 0.0;
  double zoom = 1.0;
  std::string style;  // "F1" | "F2"
  std::uint64_t seed = 0;
};

SampleMeta load_meta(const std::filesystem::path& path);

/// Generate spec.count samples under out_dir (images/, masks/, manifest.jsonl)
/// and return the manifest. Output is a pure function of the spec; two runs
/// produce byte-identical files.
DatasetManifest generate_synthetic(const SynthSpec& spec, const std::filesystem::path& out_dir,
                                   int jobs = 1);

// Code-rectangle extent in layout units at zoom 1; one layout unit spans
// width/256 pixels. Tests use these to check metadata consistency.
inline constexpr double kCodeUnitsWidth = 105.0;
inline constexpr double kCodeUnitsHeight = 30.0;
inline constexpr double kCanvasReference = 256.0;

}  // namespace amrf
