#include "amrf/augment.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "amrf/fsutil.hpp"
#include "amrf/rng.hpp"
#include "amrf/warp.hpp"

namespace amrf {
namespace {

using json = nlohmann::ordered_json;

inline std::uint8_t clamp_u8(double v) {
  return static_cast<std::uint8_t>(std::lround(std::min(255.0, std::max(0.0, v))));
}

bool is_odd_integer(double v) {
  const double r = std::round(v);
  return std::abs(v - r) < 1e-9 && static_cast<long long>(r) % 2 != 0;
}

ImageBuffer adjust_brightness(const ImageBuffer& image, double factor) {
  ImageBuffer out = image;
  for (auto& v : out.data) v = clamp_u8(v * factor);
  return out;
}

ImageBuffer adjust_saturation(const ImageBuffer& image, double factor) {
  ImageBuffer out(image.width, image.height);
  const std::uint8_t* src = image.data.data();
  std::uint8_t* dst = out.data.data();
  const std::int64_t n = image.pixel_count();
  for (std::int64_t i = 0; i < n; ++i, src += 3, dst += 3) {
    const double gray = gray_value(src[0], src[1], src[2]);
    for (int c = 0; c < 3; ++c) dst[c] = clamp_u8(gray + (src[c] - gray) * factor);
  }
  return out;
}

void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v) {
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double d = mx - mn;
  v = mx;
  s = mx == 0.0 ? 0.0 : d / mx;
  if (d == 0.0) {
    h = 0.0;
  } else if (mx == r) {
    h = 60.0 * std::fmod((g - b) / d, 6.0);
  } else if (mx == g) {
    h = 60.0 * ((b - r) / d + 2.0);
  } else {
    h = 60.0 * ((r - g) / d + 4.0);
  }
  if (h < 0.0) h += 360.0;
}

void hsv_to_rgb(double h, double s, double v, double& r, double& g, double& b) {
  const double c = v * s;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r1 = 0, g1 = 0, b1 = 0;
  if (hp < 1.0) {
    r1 = c; g1 = x;
  } else if (hp < 2.0) {
    r1 = x; g1 = c;
  } else if (hp < 3.0) {
    g1 = c; b1 = x;
  } else if (hp < 4.0) {
    g1 = x; b1 = c;
  } else if (hp < 5.0) {
    r1 = x; b1 = c;
  } else {
    r1 = c; b1 = x;
  }
  const double m = v - c;
  r = r1 + m;
  g = g1 + m;
  b = b1 + m;
}

ImageBuffer rotate_hue(const ImageBuffer& image, double fraction) {
  ImageBuffer out(image.width, image.height);
  const double shift = fraction * 360.0;
  const std::uint8_t* src = image.data.data();
  std::uint8_t* dst = out.data.data();
  const std::int64_t n = image.pixel_count();
  for (std::int64_t i = 0; i < n; ++i, src += 3, dst += 3) {
    double h, s, v;
    rgb_to_hsv(src[0] / 255.0, src[1] / 255.0, src[2] / 255.0, h, s, v);
    h = std::fmod(h + shift + 360.0, 360.0);
    double r, g, b;
    hsv_to_rgb(h, s, v, r, g, b);
    dst[0] = clamp_u8(r * 255.0);
    dst[1] = clamp_u8(g * 255.0);
    dst[2] = clamp_u8(b * 255.0);
  }
  return out;
}

bool is_identity(AugKind kind, double value) {
  switch (kind) {
    case AugKind::Zoom:
    case AugKind::Brightness:
    case AugKind::Contrast:
    case AugKind::Saturation:
      return value == 1.0;
    case AugKind::Rotation:
      return value == 0.0;
    case AugKind::Hue:
      return value == 0.0;
    case AugKind::GaussianBlur:
      return value == 1.0;
  }
  return false;
}

}  // namespace

const char* to_string(AugKind kind) {
  switch (kind) {
    case AugKind::Zoom: return "zoom";
    case AugKind::Rotation: return "rotation";
    case AugKind::GaussianBlur: return "gaussian_blur";
    case AugKind::Brightness: return "brightness";
    case AugKind::Contrast: return "contrast";
    case AugKind::Saturation: return "saturation";
    case AugKind::Hue: return "hue";
  }
  return "unknown";
}

std::optional<AugKind> aug_kind_from_string(std::string_view name) {
  for (AugKind kind : kPipelineOrder) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

bool is_geometric(AugKind kind) { return kind == AugKind::Zoom || kind == AugKind::Rotation; }

void validate(const AugmentationMethod& method) {
  if (method.min_value > method.max_value) {
    raise(ErrorCode::ValueOutOfRange, std::string(to_string(method.kind)) + " range inverted");
  }
  switch (method.kind) {
    case AugKind::Zoom:
    case AugKind::Brightness:
    case AugKind::Saturation:
    case AugKind::Contrast:
      if (method.min_value <= 0.0) {
        raise(ErrorCode::ValueOutOfRange, std::string(to_string(method.kind)) + " must be > 0");
      }
      break;
    case AugKind::GaussianBlur:
      if (!is_odd_integer(method.min_value) || !is_odd_integer(method.max_value) ||
          method.min_value < 1.0) {
        raise(ErrorCode::ValueOutOfRange, "gaussian_blur range must be odd integers >= 1");
      }
      break;
    case AugKind::Rotation:
    case AugKind::Hue:
      break;
  }
}

const AugmentationMethod* AugmentationPool::find(AugKind kind) const {
  for (const auto& m : methods) {
    if (m.kind == kind) return &m;
  }
  return nullptr;
}

void validate(const AugmentationPool& pool) {
  if (pool.version < 1) raise(ErrorCode::ValueOutOfRange, "pool version must be >= 1");
  for (std::size_t i = 0; i < pool.methods.size(); ++i) {
    validate(pool.methods[i]);
    for (std::size_t j = i + 1; j < pool.methods.size(); ++j) {
      if (pool.methods[i].kind == pool.methods[j].kind) {
        raise(ErrorCode::ValueOutOfRange,
              std::string("duplicate method kind ") + to_string(pool.methods[i].kind));
      }
    }
  }
}

AugmentationPool default_pool() {
  AugmentationPool pool;
  pool.version = 1;
  pool.methods = {
      {AugKind::Rotation, -180.0, 180.0},
      {AugKind::Brightness, 0.5, 1.5},
      {AugKind::Saturation, 0.5, 1.5},
      {AugKind::Contrast, 0.5, 1.5},
      {AugKind::Hue, -0.5, 0.5},
  };
  return pool;
}

std::optional<double> AugmentationParams::value_of(AugKind kind) const {
  for (const auto& [k, v] : values) {
    if (k == kind) return v;
  }
  return std::nullopt;
}

double sample_value(const AugmentationMethod& method, std::uint64_t seed) {
  SplitMix64 rng(mix64(seed ^ fnv1a64(to_string(method.kind))));
  if (method.kind == AugKind::GaussianBlur) {
    const long long lo = static_cast<long long>(std::llround(method.min_value));
    const long long hi = static_cast<long long>(std::llround(method.max_value));
    const std::uint64_t count = static_cast<std::uint64_t>((hi - lo) / 2) + 1;
    return static_cast<double>(lo + 2 * static_cast<long long>(rng.below(count)));
  }
  return rng.uniform(method.min_value, method.max_value);
}

AugmentationParams sample_params(const AugmentationPool& pool, std::uint64_t seed) {
  validate(pool);
  AugmentationParams params;
  for (AugKind kind : kPipelineOrder) {
    if (const AugmentationMethod* method = pool.find(kind)) {
      params.values.emplace_back(kind, sample_value(*method, seed));
    }
  }
  return params;
}

ImageBuffer adjust_contrast(const ImageBuffer& image, double factor) {
  const double pivot = mean_gray(image);
  ImageBuffer out = image;
  for (auto& v : out.data) v = clamp_u8((v - pivot) * factor + pivot);
  return out;
}

std::pair<ImageBuffer, std::optional<BinaryMask>> apply(const AugmentationMethod& method,
                                                        double value, const ImageBuffer& image,
                                                        const BinaryMask* mask) {
  validate(method);
  if (method.kind == AugKind::GaussianBlur) {
    if (!is_odd_integer(value) || value < method.min_value - 1e-9 ||
        value > method.max_value + 1e-9) {
      raise(ErrorCode::ValueOutOfRange, "blur kernel size outside method range");
    }
  } else if (value < method.min_value || value > method.max_value) {
    raise(ErrorCode::ValueOutOfRange, std::string(to_string(method.kind)) + " value " +
                                          std::to_string(value) + " outside range");
  }
  if (mask) require_same_size(image, *mask);

  std::optional<BinaryMask> out_mask;
  if (mask) out_mask = *mask;

  if (is_identity(method.kind, value)) {
    return {image, std::move(out_mask)};
  }

  switch (method.kind) {
    case AugKind::Zoom: {
      ImageBuffer img = zoom_image(image, value);
      if (mask) out_mask = zoom_mask(*mask, value);
      return {std::move(img), std::move(out_mask)};
    }
    case AugKind::Rotation: {
      ImageBuffer img = rotate_image_centered(image, value);
      if (mask) out_mask = rotate_mask_centered(*mask, value);
      return {std::move(img), std::move(out_mask)};
    }
    case AugKind::GaussianBlur:
      return {gaussian_blur(image, static_cast<int>(std::llround(value))), std::move(out_mask)};
    case AugKind::Brightness:
      return {adjust_brightness(image, value), std::move(out_mask)};
    case AugKind::Contrast:
      return {adjust_contrast(image, value), std::move(out_mask)};
    case AugKind::Saturation:
      return {adjust_saturation(image, value), std::move(out_mask)};
    case AugKind::Hue:
      return {rotate_hue(image, value), std::move(out_mask)};
  }
  raise(ErrorCode::ValueOutOfRange, "unknown augmentation kind");
}

PipelineResult apply_pipeline(const AugmentationPool& pool, std::uint64_t seed,
                              const ImageBuffer& image, const BinaryMask& mask) {
  require_same_size(image, mask);
  PipelineResult result{image, mask, sample_params(pool, seed)};
  for (const auto& [kind, value] : result.params.values) {
    auto [img, msk] = apply(*pool.find(kind), value, result.image, &result.mask);
    result.image = std::move(img);
    result.mask = std::move(*msk);
  }
  return result;
}

std::string pool_to_json(const AugmentationPool& pool) {
  json j;
  j["version"] = pool.version;
  j["methods"] = json::array();
  for (const auto& m : pool.methods) {
    j["methods"].push_back({{"kind", to_string(m.kind)}, {"min", m.min_value}, {"max", m.max_value}});
  }
  return j.dump(2) + "\n";
}

AugmentationPool pool_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    raise(ErrorCode::ConfigError, std::string("pool JSON: ") + e.what());
  }
  AugmentationPool pool;
  try {
    pool.version = j.at("version").get<int>();
    for (const auto& jm : j.at("methods")) {
      const auto kind = aug_kind_from_string(jm.at("kind").get<std::string>());
      if (!kind) {
        raise(ErrorCode::ConfigError, "unknown method kind " + jm.at("kind").get<std::string>());
      }
      pool.methods.push_back(
          {*kind, jm.at("min").get<double>(), jm.at("max").get<double>()});
    }
  } catch (const json::exception& e) {
    raise(ErrorCode::ConfigError, std::string("pool JSON: ") + e.what());
  }
  validate(pool);
  return pool;
}

void save_pool(const AugmentationPool& pool, const std::filesystem::path& path) {
  write_file_atomic(path, pool_to_json(pool));
}

AugmentationPool load_pool(const std::filesystem::path& path) {
  return pool_from_json(read_text_file(path));
}

}  // namespace amrf
