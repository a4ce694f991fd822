#include "amrf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "amrf/augment.hpp"
#include "amrf/fsutil.hpp"
#include "amrf/parallel.hpp"
#include "amrf/png_io.hpp"
#include "amrf/rng.hpp"
#include "amrf/warp.hpp"

namespace amrf {
namespace {

using json = nlohmann::ordered_json;

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

// 3x5 digit font, one row per byte triple.
constexpr std::uint8_t kDigitFont[10][5] = {
    {0b111, 0b101, 0b101, 0b101, 0b111},  // 0
    {0b010, 0b110, 0b010, 0b010, 0b111},  // 1
    {0b111, 0b001, 0b111, 0b100, 0b111},  // 2
    {0b111, 0b001, 0b111, 0b001, 0b111},  // 3
    {0b101, 0b101, 0b111, 0b001, 0b001},  // 4
    {0b111, 0b100, 0b111, 0b001, 0b111},  // 5
    {0b111, 0b100, 0b111, 0b101, 0b111},  // 6
    {0b111, 0b001, 0b010, 0b010, 0b010},  // 7
    {0b111, 0b101, 0b111, 0b101, 0b111},  // 8
    {0b111, 0b101, 0b111, 0b001, 0b111},  // 9
};

// Position-hash noise in [0, 1); pure in (seed, tag, x, y).
double hash_noise(std::uint64_t seed, std::uint64_t tag, std::int64_t x, std::int64_t y) {
  const std::uint64_t h =
      mix64(seed ^ tag ^ (static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ull) ^
            (static_cast<std::uint64_t>(y) * 0xC2B2AE3D27D4EB4Full));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// One octave of lattice value noise.
double value_noise(std::uint64_t seed, std::uint64_t tag, double u, double v) {
  const double fu = std::floor(u);
  const double fv = std::floor(v);
  const auto iu = static_cast<std::int64_t>(fu);
  const auto iv = static_cast<std::int64_t>(fv);
  const double tu = smoothstep(u - fu);
  const double tv = smoothstep(v - fv);
  const double c00 = hash_noise(seed, tag, iu, iv);
  const double c10 = hash_noise(seed, tag, iu + 1, iv);
  const double c01 = hash_noise(seed, tag, iu, iv + 1);
  const double c11 = hash_noise(seed, tag, iu + 1, iv + 1);
  const double a = c00 + (c10 - c00) * tu;
  const double b = c01 + (c11 - c01) * tu;
  return a + (b - a) * tv;
}

struct Capsule {
  // Axis-aligned capsule in layout units (horizontal or vertical axis).
  double s_c, t_c, half_len, radius;
  bool horizontal;
  double gray;

  double distance(double s, double t) const {
    double ds, dt;
    if (horizontal) {
      ds = std::max(0.0, std::abs(s - s_c) - half_len);
      dt = t - t_c;
    } else {
      ds = s - s_c;
      dt = std::max(0.0, std::abs(t - t_c) - half_len);
    }
    return std::sqrt(ds * ds + dt * dt);
  }
};

struct Blob {
  double s_c, t_c, rs, rt, gray;
};

// Everything needed to rasterize one sample; all choices drawn up front so
// the per-pixel evaluation stays pure.
struct SampleLayout {
  double angle_deg, zoom, contrast;
  int blur_k;
  bool f1;
  double unit;          // layout unit in pixels
  double cx, cy;        // code center in canvas pixels
  double cos_a, sin_a;  // of angle_deg
  double dot_r;         // dot radius, layout units
  double base_dark;
  int digits[3];
  double glyph_s0[3], glyph_cell[3], glyph_t0[3];
  double line_s0;  // first line-dot center
  std::vector<Capsule> streaks;
  std::vector<Blob> blobs;
  std::uint64_t noise_seed;
};

constexpr double kPitch = 7.0;
constexpr double kBoxC0 = 4.5;  // first dot center along both axes

SampleLayout plan_sample(const SynthSpec& spec, std::uint64_t sample_seed) {
  SplitMix64 rng(sample_seed);
  SampleLayout L;
  L.noise_seed = sample_seed;
  L.angle_deg = rng.uniform(spec.angle_min, spec.angle_max);
  L.zoom = rng.uniform(spec.zoom_min, spec.zoom_max);
  L.contrast = rng.uniform(spec.contrast_min, spec.contrast_max);
  const int blur_steps = (spec.blur_max - spec.blur_min) / 2 + 1;
  L.blur_k = spec.blur_min + 2 * static_cast<int>(rng.below(static_cast<std::uint64_t>(blur_steps)));
  L.f1 = rng.unit() < spec.style_mix;
  L.unit = L.zoom * spec.width / kCanvasReference;
  L.cos_a = std::cos(L.angle_deg * kDegToRad);
  L.sin_a = std::sin(L.angle_deg * kDegToRad);

  // Style geometry: same pitch, different dot radius and element spacing, so
  // the largest intra-code gap is style-dependent.
  L.dot_r = L.f1 ? 3.0 : 2.2;
  const double gap_e = L.f1 ? 2.0 : 2.5;
  L.base_dark = rng.uniform(38.0, 55.0);
  const double heights[3] = {20.0, 14.0, 20.0};
  double cursor = kBoxC0 + 3.0 * kPitch + L.dot_r + gap_e;  // after the dot box
  for (int i = 0; i < 3; ++i) {
    L.digits[i] = static_cast<int>(rng.below(10));
    L.glyph_cell[i] = heights[i] / 5.0;
    L.glyph_s0[i] = cursor;
    L.glyph_t0[i] = (kCodeUnitsHeight - heights[i]) / 2.0;
    cursor += 3.0 * L.glyph_cell[i] + gap_e;
  }
  L.line_s0 = cursor + L.dot_r;

  // Surface-texture streaks hugging the code edges (they rotate and scale
  // with the code).
  const int n_streaks = 2 + static_cast<int>(rng.below(3));
  for (int i = 0; i < n_streaks; ++i) {
    Capsule cap{};
    cap.radius = rng.uniform(1.0, 1.8);
    const double gap = rng.uniform(4.5, 9.0) + cap.radius;
    const int side = static_cast<int>(rng.below(4));
    cap.horizontal = side < 2;
    if (cap.horizontal) {
      cap.t_c = side == 0 ? -gap : kCodeUnitsHeight + gap;
      cap.s_c = rng.uniform(10.0, kCodeUnitsWidth - 10.0);
      cap.half_len = rng.uniform(8.0, 20.0);
    } else {
      cap.s_c = side == 2 ? -gap : kCodeUnitsWidth + gap;
      cap.t_c = rng.uniform(5.0, kCodeUnitsHeight - 5.0);
      cap.half_len = rng.uniform(4.0, 10.0);
    }
    cap.gray = rng.uniform(75.0, 125.0);
    L.streaks.push_back(cap);
  }

  // Far clutter blobs.
  const int n_blobs = 2 + static_cast<int>(rng.below(2));
  for (int i = 0; i < n_blobs; ++i) {
    Blob blob{};
    for (int attempt = 0; attempt < 16; ++attempt) {
      blob.s_c = rng.uniform(-90.0, kCodeUnitsWidth + 90.0);
      blob.t_c = rng.uniform(-90.0, kCodeUnitsHeight + 90.0);
      const double ds = blob.s_c - std::clamp(blob.s_c, 0.0, kCodeUnitsWidth);
      const double dt = blob.t_c - std::clamp(blob.t_c, 0.0, kCodeUnitsHeight);
      if (ds * ds + dt * dt >= 25.0 * 25.0) break;
      blob.s_c = -1e9;  // discard if no valid spot found
    }
    blob.rs = rng.uniform(2.5, 6.0);
    blob.rt = rng.uniform(2.5, 6.0);
    blob.gray = rng.uniform(85.0, 140.0);
    if (blob.s_c > -1e8) L.blobs.push_back(blob);
  }

  // Placement: keep the rotated code fully inside the canvas (plus a small
  // border) so sidecar angle/zoom stay measurable.
  const double half_w = kCodeUnitsWidth / 2.0 * L.unit;
  const double half_h = kCodeUnitsHeight / 2.0 * L.unit;
  const double ext_x = half_w * std::abs(L.cos_a) + half_h * std::abs(L.sin_a);
  const double ext_y = half_w * std::abs(L.sin_a) + half_h * std::abs(L.cos_a);
  const double jx = std::max(0.0, std::min(0.05 * spec.width, spec.width / 2.0 - ext_x - 3.0));
  const double jy = std::max(0.0, std::min(0.05 * spec.height, spec.height / 2.0 - ext_y - 3.0));
  L.cx = spec.width / 2.0 + rng.uniform(-jx, jx);
  L.cy = spec.height / 2.0 + rng.uniform(-jy, jy);
  return L;
}

// Dark code element test at layout coordinates (s, t) in
// [0, kCodeUnitsWidth] x [0, kCodeUnitsHeight].
bool code_dark(const SampleLayout& L, double s, double t) {
  auto dot_at = [&](double c_s, double c_t) {
    const double ds = s - c_s;
    const double dt = t - c_t;
    return ds * ds + dt * dt <= L.dot_r * L.dot_r;
  };

  // Dot box: 4x4 grid.
  if (s < kBoxC0 + 3.0 * kPitch + L.dot_r + 1.0) {
    const int i = std::clamp(static_cast<int>(std::lround((s - kBoxC0) / kPitch)), 0, 3);
    const int j = std::clamp(static_cast<int>(std::lround((t - kBoxC0) / kPitch)), 0, 3);
    if (dot_at(kBoxC0 + i * kPitch, kBoxC0 + j * kPitch)) return true;
  }

  // Glyph row.
  for (int g = 0; g < 3; ++g) {
    const double cell = L.glyph_cell[g];
    const double ls = (s - L.glyph_s0[g]) / cell;
    const double lt = (t - L.glyph_t0[g]) / cell;
    if (ls < 0.0 || ls >= 3.0 || lt < 0.0 || lt >= 5.0) continue;
    const int col = static_cast<int>(ls);
    const int row = static_cast<int>(lt);
    if (kDigitFont[L.digits[g]][row] & (0b100 >> col)) return true;
  }

  // Dot lines.
  if (s >= L.line_s0 - L.dot_r) {
    const int j = std::clamp(static_cast<int>(std::lround((s - L.line_s0) / kPitch)), 0, 4);
    const int i = std::clamp(static_cast<int>(std::lround((t - kBoxC0) / kPitch)), 0, 3);
    if (dot_at(L.line_s0 + j * kPitch, kBoxC0 + i * kPitch)) return true;
  }
  return false;
}

void render_sample(const SynthSpec& spec, const SampleLayout& L, ImageBuffer& image,
                   BinaryMask& mask) {
  image = ImageBuffer(spec.width, spec.height);
  mask = BinaryMask(spec.width, spec.height);
  const double noise_scale = spec.width / kCanvasReference;

  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      // Background: two octaves of value noise plus per-pixel grain.
      const double fbm =
          0.65 * value_noise(L.noise_seed, 0xA1, x / (24.0 * noise_scale), y / (24.0 * noise_scale)) +
          0.35 * value_noise(L.noise_seed, 0xB2, x / (9.0 * noise_scale), y / (9.0 * noise_scale));
      double gray = 157.0 + 56.0 * fbm + 10.0 * hash_noise(L.noise_seed, 0xC3, x, y) - 5.0;

      // Code-space coordinates.
      const double dx = x - L.cx;
      const double dy = y - L.cy;
      const double s = (L.cos_a * dx + L.sin_a * dy) / L.unit + kCodeUnitsWidth / 2.0;
      const double t = (-L.sin_a * dx + L.cos_a * dy) / L.unit + kCodeUnitsHeight / 2.0;
      const bool inside =
          s >= 0.0 && s <= kCodeUnitsWidth && t >= 0.0 && t <= kCodeUnitsHeight;

      if (inside) {
        mask.set(x, y, true);
        if (code_dark(L, s, t)) {
          gray = L.base_dark + 18.0 * hash_noise(L.noise_seed, 0xD4, x, y) - 9.0;
          gray = std::max(25.0, gray);
        }
      } else {
        for (const auto& cap : L.streaks) {
          if (cap.distance(s, t) <= cap.radius) {
            gray = cap.gray + 16.0 * hash_noise(L.noise_seed, 0xE5, x, y) - 8.0;
            break;
          }
        }
        for (const auto& blob : L.blobs) {
          const double ds = (s - blob.s_c) / blob.rs;
          const double dt = (t - blob.t_c) / blob.rt;
          if (ds * ds + dt * dt <= 1.0) {
            gray = blob.gray + 16.0 * hash_noise(L.noise_seed, 0xF6, x, y) - 8.0;
            break;
          }
        }
      }

      const auto v = static_cast<std::uint8_t>(std::lround(std::clamp(gray, 0.0, 255.0)));
      // Warm-tinted gray keeps the RGB channels distinct.
      image.at(x, y, 0) = v;
      image.at(x, y, 1) = static_cast<std::uint8_t>(std::max(0, v - 6));
      image.at(x, y, 2) = static_cast<std::uint8_t>(std::max(0, v - 12));
    }
  }

  if (L.contrast != 1.0) image = adjust_contrast(image, L.contrast);
  if (L.blur_k > 1) image = gaussian_blur(image, L.blur_k);
}

}  // namespace

void validate(const SynthSpec& spec) {
  if (spec.count < 1) raise(ErrorCode::ValueOutOfRange, "count must be >= 1");
  if (spec.width < 64 || spec.height < 64) {
    raise(ErrorCode::ValueOutOfRange, "canvas must be at least 64x64");
  }
  if (spec.angle_min > spec.angle_max || spec.zoom_min > spec.zoom_max ||
      spec.contrast_min > spec.contrast_max || spec.blur_min > spec.blur_max) {
    raise(ErrorCode::ValueOutOfRange, "degenerate range in spec");
  }
  if (spec.zoom_min <= 0.0 || spec.contrast_min <= 0.0) {
    raise(ErrorCode::ValueOutOfRange, "zoom and contrast must be > 0");
  }
  if (spec.blur_min < 1 || spec.blur_min % 2 == 0 || spec.blur_max % 2 == 0) {
    raise(ErrorCode::ValueOutOfRange, "blur range must be odd integers >= 1");
  }
  if (spec.style_mix < 0.0 || spec.style_mix > 1.0) {
    raise(ErrorCode::ValueOutOfRange, "style_mix must be in [0, 1]");
  }
  if (spec.split != "train" && spec.split != "val" && spec.split != "test") {
    raise(ErrorCode::ValueOutOfRange, "unknown split " + spec.split);
  }
}

SampleMeta load_meta(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    raise(ErrorCode::ConfigError, std::string("meta JSON: ") + e.what());
  }
  SampleMeta meta;
  meta.angle_deg = j.at("angle_deg").get<double>();
  meta.zoom = j.at("zoom").get<double>();
  meta.style = j.at("style").get<std::string>();
  meta.seed = j.at("seed").get<std::uint64_t>();
  return meta;
}

DatasetManifest generate_synthetic(const SynthSpec& spec, const std::filesystem::path& out_dir,
                                   int jobs) {
  validate(spec);
  const auto images_dir = out_dir / "images";
  const auto masks_dir = out_dir / "masks";
  std::error_code ec;
  std::filesystem::create_directories(images_dir, ec);
  std::filesystem::create_directories(masks_dir, ec);
  if (ec) raise(ErrorCode::IoError, "cannot create " + out_dir.string());

  DatasetManifest manifest;
  manifest.name = spec.name;
  manifest.records.resize(static_cast<std::size_t>(spec.count));

  parallel_for(static_cast<std::size_t>(spec.count), jobs, [&](std::size_t i) {
    char suffix[16];
    std::snprintf(suffix, sizeof(suffix), "-%05zu", i);
    const std::string id = spec.name + suffix;
    const std::uint64_t sample_seed = derive_seed(spec.seed, id);
    const SampleLayout layout = plan_sample(spec, sample_seed);

    ImageBuffer image;
    BinaryMask mask;
    render_sample(spec, layout, image, mask);

    SampleRecord rec;
    rec.id = id;
    rec.image_path = images_dir / (id + ".png");
    rec.mask_path = masks_dir / (id + ".png");
    rec.factory = layout.f1 ? "F1" : "F2";
    rec.split = spec.split;

    save_image(image, rec.image_path);
    save_mask(mask, *rec.mask_path);

    json meta;
    meta["angle_deg"] = layout.angle_deg;
    meta["zoom"] = layout.zoom;
    meta["style"] = rec.factory;
    meta["seed"] = sample_seed;
    write_file_atomic(images_dir / (id + ".meta.json"), meta.dump(2) + "\n");

    manifest.records[i] = std::move(rec);
  });

  save_manifest(manifest, out_dir / "manifest.jsonl");
  return manifest;
}

}  // namespace amrf
