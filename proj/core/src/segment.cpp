#include "amrf/segment.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <nlohmann/json.hpp>

#include "amrf/metrics.hpp"
#include "amrf/parallel.hpp"
#include "amrf/png_io.hpp"
#include "amrf/rng.hpp"

namespace amrf {
namespace {

using json = nlohmann::ordered_json;

// --- fill guards -----------------------------------------------------------

// Border-connected constant-color regions (geometric-augmentation fill).
// Marked pixels are excluded from histogram and foreground.
std::vector<std::uint8_t> detect_fill(const ImageBuffer& image) {
  const int w = image.width;
  const int h = image.height;
  const std::int64_t n = static_cast<std::int64_t>(w) * h;
  const std::int64_t min_area = std::max<std::int64_t>(64, n / 200);

  std::vector<std::uint8_t> fill(static_cast<std::size_t>(n), 0);
  std::vector<std::uint8_t> visited(static_cast<std::size_t>(n), 0);
  std::vector<std::int64_t> stack;
  std::vector<std::int64_t> component;

  auto flood = [&](std::int64_t start) {
    const std::uint8_t* base = &image.data[static_cast<std::size_t>(start) * 3];
    component.clear();
    stack.assign(1, start);
    visited[static_cast<std::size_t>(start)] = 1;
    while (!stack.empty()) {
      const std::int64_t idx = stack.back();
      stack.pop_back();
      component.push_back(idx);
      const int x = static_cast<int>(idx % w);
      const int y = static_cast<int>(idx / w);
      const std::array<std::int64_t, 4> neighbors = {
          x > 0 ? idx - 1 : -1,
          x + 1 < w ? idx + 1 : -1,
          y > 0 ? idx - w : -1,
          y + 1 < h ? idx + w : -1,
      };
      for (std::int64_t nb : neighbors) {
        if (nb < 0 || visited[static_cast<std::size_t>(nb)]) continue;
        const std::uint8_t* p = &image.data[static_cast<std::size_t>(nb) * 3];
        if (p[0] != base[0] || p[1] != base[1] || p[2] != base[2]) continue;
        visited[static_cast<std::size_t>(nb)] = 1;
        stack.push_back(nb);
      }
    }
    if (static_cast<std::int64_t>(component.size()) >= min_area) {
      for (std::int64_t idx : component) fill[static_cast<std::size_t>(idx)] = 1;
    }
  };

  for (int x = 0; x < w; ++x) {
    if (!visited[static_cast<std::size_t>(x)]) flood(x);
    const std::int64_t bottom = static_cast<std::int64_t>(h - 1) * w + x;
    if (!visited[static_cast<std::size_t>(bottom)]) flood(bottom);
  }
  for (int y = 0; y < h; ++y) {
    const std::int64_t left = static_cast<std::int64_t>(y) * w;
    const std::int64_t right = left + w - 1;
    if (!visited[static_cast<std::size_t>(left)]) flood(left);
    if (!visited[static_cast<std::size_t>(right)]) flood(right);
  }
  return fill;
}

// --- thresholding ----------------------------------------------------------

// Otsu over the 256-bin histogram; classes are g <= t and g > t. Returns -1
// when no split separates anything (single gray level).
int otsu_threshold(const std::array<std::int64_t, 256>& hist) {
  std::int64_t total = 0;
  double weighted_total = 0.0;
  for (int v = 0; v < 256; ++v) {
    total += hist[static_cast<std::size_t>(v)];
    weighted_total += static_cast<double>(v) * hist[static_cast<std::size_t>(v)];
  }
  if (total == 0) return -1;

  std::int64_t count0 = 0;
  double sum0 = 0.0;
  double best_var = 0.0;
  int best_t = -1;
  for (int t = 0; t < 255; ++t) {
    count0 += hist[static_cast<std::size_t>(t)];
    sum0 += static_cast<double>(t) * hist[static_cast<std::size_t>(t)];
    if (count0 == 0 || count0 == total) continue;
    const double w0 = static_cast<double>(count0);
    const double w1 = static_cast<double>(total - count0);
    const double mean0 = sum0 / w0;
    const double mean1 = (weighted_total - sum0) / w1;
    const double between = w0 * w1 * (mean0 - mean1) * (mean0 - mean1);
    if (between > best_var) {
      best_var = between;
      best_t = t;
    }
  }
  return best_var > 0.0 ? best_t : -1;
}

// --- connected components --------------------------------------------------

struct Component {
  std::vector<std::int64_t> pixels;
  bool touches_border = false;
};

std::vector<Component> label_components(const BinaryMask& mask) {
  const int w = mask.width;
  const int h = mask.height;
  std::vector<std::int32_t> label(mask.bits.size(), -1);
  std::vector<Component> components;
  std::vector<std::int64_t> stack;

  for (std::int64_t start = 0; start < static_cast<std::int64_t>(mask.bits.size()); ++start) {
    if (!mask.bits[static_cast<std::size_t>(start)] || label[static_cast<std::size_t>(start)] >= 0) {
      continue;
    }
    const auto id = static_cast<std::int32_t>(components.size());
    components.emplace_back();
    Component& comp = components.back();
    stack.assign(1, start);
    label[static_cast<std::size_t>(start)] = id;
    while (!stack.empty()) {
      const std::int64_t idx = stack.back();
      stack.pop_back();
      comp.pixels.push_back(idx);
      const int x = static_cast<int>(idx % w);
      const int y = static_cast<int>(idx / w);
      if (x == 0 || y == 0 || x == w - 1 || y == h - 1) comp.touches_border = true;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::int64_t nb = static_cast<std::int64_t>(ny) * w + nx;
          if (!mask.bits[static_cast<std::size_t>(nb)] || label[static_cast<std::size_t>(nb)] >= 0) {
            continue;
          }
          label[static_cast<std::size_t>(nb)] = id;
          stack.push_back(nb);
        }
      }
    }
  }
  return components;
}

}  // namespace

void validate(const SegmenterConfig& config) {
  if (config.close_kernel < 1 || config.close_kernel % 2 == 0) {
    raise(ErrorCode::ValueOutOfRange, "close_kernel must be odd >= 1");
  }
  if (config.min_region_area < 1) {
    raise(ErrorCode::ValueOutOfRange, "min_region_area must be >= 1");
  }
  if (config.fixed_value < 0 || config.fixed_value > 255) {
    raise(ErrorCode::ValueOutOfRange, "fixed_value must be an 8-bit level");
  }
}

BinaryMask dilate(const BinaryMask& mask, int ksize) {
  if (ksize <= 1) return mask;
  const int r = (ksize - 1) / 2;
  const int w = mask.width;
  const int h = mask.height;
  BinaryMask tmp(w, h);
  for (int y = 0; y < h; ++y) {
    int count = 0;
    for (int x = -r; x <= r && x < w; ++x) {
      if (x >= 0 && mask.at(x, y)) ++count;
    }
    for (int x = 0; x < w; ++x) {
      if (count > 0) tmp.set(x, y, true);
      const int add = x + r + 1;
      const int drop = x - r;
      if (add < w && mask.at(add, y)) ++count;
      if (drop >= 0 && mask.at(drop, y)) --count;
    }
  }
  BinaryMask out(w, h);
  for (int x = 0; x < w; ++x) {
    int count = 0;
    for (int y = -r; y <= r && y < h; ++y) {
      if (y >= 0 && tmp.at(x, y)) ++count;
    }
    for (int y = 0; y < h; ++y) {
      if (count > 0) out.set(x, y, true);
      const int add = y + r + 1;
      const int drop = y - r;
      if (add < h && tmp.at(x, add)) ++count;
      if (drop >= 0 && tmp.at(x, drop)) --count;
    }
  }
  return out;
}

BinaryMask erode(const BinaryMask& mask, int ksize) {
  if (ksize <= 1) return mask;
  const int r = (ksize - 1) / 2;
  const int w = mask.width;
  const int h = mask.height;
  // Out-of-canvas counts as true: the window requirement shrinks at borders.
  BinaryMask tmp(w, h);
  for (int y = 0; y < h; ++y) {
    int count = 0;
    for (int x = -r; x <= r && x < w; ++x) {
      if (x >= 0 && mask.at(x, y)) ++count;
    }
    for (int x = 0; x < w; ++x) {
      const int lo = std::max(0, x - r);
      const int hi = std::min(w - 1, x + r);
      if (count == hi - lo + 1) tmp.set(x, y, true);
      const int add = x + r + 1;
      const int drop = x - r;
      if (add < w && mask.at(add, y)) ++count;
      if (drop >= 0 && mask.at(drop, y)) --count;
    }
  }
  BinaryMask out(w, h);
  for (int x = 0; x < w; ++x) {
    int count = 0;
    for (int y = -r; y <= r && y < h; ++y) {
      if (y >= 0 && tmp.at(x, y)) ++count;
    }
    for (int y = 0; y < h; ++y) {
      const int lo = std::max(0, y - r);
      const int hi = std::min(h - 1, y + r);
      if (count == hi - lo + 1) out.set(x, y, true);
      const int add = y + r + 1;
      const int drop = y - r;
      if (add < h && tmp.at(x, add)) ++count;
      if (drop >= 0 && tmp.at(x, drop)) --count;
    }
  }
  return out;
}

BinaryMask baseline_segment(const SegmenterConfig& config, const ImageBuffer& image) {
  validate(config);
  const int w = image.width;
  const int h = image.height;
  const std::vector<std::uint8_t> gray = to_gray_u8(image);
  const std::vector<std::uint8_t> fill = detect_fill(image);

  BinaryMask fg(w, h);
  const bool dark = config.polarity == SegmenterConfig::Polarity::DarkOnLight;
  if (config.threshold_mode == SegmenterConfig::ThresholdMode::Otsu) {
    std::array<std::int64_t, 256> hist{};
    for (std::size_t i = 0; i < gray.size(); ++i) {
      if (!fill[i]) ++hist[gray[i]];
    }
    const int t = otsu_threshold(hist);
    if (t >= 0) {
      for (std::size_t i = 0; i < gray.size(); ++i) {
        if (fill[i]) continue;
        fg.bits[i] = dark ? (gray[i] <= t ? 1 : 0) : (gray[i] > t ? 1 : 0);
      }
    }
  } else {
    const int v = config.fixed_value;
    for (std::size_t i = 0; i < gray.size(); ++i) {
      if (fill[i]) continue;
      fg.bits[i] = dark ? (gray[i] < v ? 1 : 0) : (gray[i] >= v ? 1 : 0);
    }
  }

  // Morphological close.
  if (config.close_kernel > 1) {
    fg = erode(dilate(fg, config.close_kernel), config.close_kernel);
  }

  auto components = label_components(fg);
  const std::int64_t border_area_limit = static_cast<std::int64_t>(w) * h / 50;
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (components[i].touches_border &&
        static_cast<std::int64_t>(components[i].pixels.size()) >= border_area_limit) {
      continue;  // residual augmentation fill
    }
    candidates.push_back(i);
  }

  std::size_t best = components.size();
  for (std::size_t i : candidates) {
    if (static_cast<std::int64_t>(components[i].pixels.size()) < config.min_region_area) continue;
    if (best == components.size() || components[i].pixels.size() > components[best].pixels.size()) {
      best = i;
    }
  }
  if (best == components.size()) {
    raise(ErrorCode::NoRegionFound, "no component above min_region_area");
  }

  BinaryMask region(w, h);
  for (std::int64_t idx : components[best].pixels) region.bits[static_cast<std::size_t>(idx)] = 1;

  // Pull in satellites within reach of the main region (detached trailing
  // code parts).
  const BinaryMask reach = dilate(region, config.close_kernel);
  for (std::size_t i : candidates) {
    if (i == best) continue;
    bool touches = false;
    for (std::int64_t idx : components[i].pixels) {
      if (reach.bits[static_cast<std::size_t>(idx)]) {
        touches = true;
        break;
      }
    }
    if (touches) {
      for (std::int64_t idx : components[i].pixels) region.bits[static_cast<std::size_t>(idx)] = 1;
    }
  }
  return region;
}

SegmenterConfig baseline_fit(const SegmenterConfig& base, const std::vector<TrainingPair>& pairs,
                             int jobs) {
  if (pairs.empty()) raise(ErrorCode::EmptyTrainingSet, "baseline_fit requires training pairs");
  validate(base);

  std::vector<SegmenterConfig> grid;
  for (auto mode : {SegmenterConfig::ThresholdMode::Otsu, SegmenterConfig::ThresholdMode::Fixed}) {
    for (int kernel : {1, 3, 5, 7}) {
      for (int area : {50, 200, 800}) {
        SegmenterConfig config = base;
        config.threshold_mode = mode;
        config.close_kernel = kernel;
        config.min_region_area = area;
        grid.push_back(config);
      }
    }
  }

  std::vector<double> scores(grid.size(), 0.0);
  parallel_for(grid.size(), jobs, [&](std::size_t g) {
    double total = 0.0;
    for (const auto& [image, gt] : pairs) {
      try {
        total += iou(baseline_segment(grid[g], image), gt);
      } catch (const Error&) {
        // NoRegionFound scores zero.
      }
    }
    scores[g] = total / static_cast<double>(pairs.size());
  });

  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (scores[g] > scores[best]) best = g;  // ties keep the earlier cell
  }
  return grid[best];
}

std::unique_ptr<SegmenterAdapter> SegmenterAdapter::fit(const std::vector<TrainingPair>& pairs,
                                                        int /*jobs*/) const {
  if (pairs.empty()) raise(ErrorCode::EmptyTrainingSet, "fit requires training pairs");
  return clone();
}

BaselineSegmenter::BaselineSegmenter(SegmenterConfig config) : config_(config) {
  validate(config_);
}

BinaryMask BaselineSegmenter::segment(const ImageBuffer& image, const std::string&) const {
  return baseline_segment(config_, image);
}

std::unique_ptr<SegmenterAdapter> BaselineSegmenter::fit(const std::vector<TrainingPair>& pairs,
                                                         int jobs) const {
  return std::make_unique<BaselineSegmenter>(baseline_fit(config_, pairs, jobs));
}

std::unique_ptr<SegmenterAdapter> BaselineSegmenter::clone() const {
  return std::make_unique<BaselineSegmenter>(config_);
}

OracleSegmenter::OracleSegmenter(std::filesystem::path mask_dir, int perturb_px,
                                 std::uint64_t seed)
    : mask_dir_(std::move(mask_dir)), perturb_px_(perturb_px), seed_(seed) {
  if (perturb_px_ < 0) raise(ErrorCode::ValueOutOfRange, "perturb_px must be >= 0");
}

OracleSegmenter OracleSegmenter::from_manifests(const std::vector<DatasetManifest>& manifests,
                                                int perturb_px, std::uint64_t seed) {
  OracleSegmenter oracle(std::filesystem::path(), perturb_px, seed);
  for (const auto& manifest : manifests) {
    for (const auto& rec : manifest.records) {
      if (rec.mask_path) oracle.mask_paths_[rec.id] = *rec.mask_path;
    }
  }
  return oracle;
}

BinaryMask OracleSegmenter::load_for(const std::string& sample_id) const {
  std::filesystem::path path;
  if (!mask_paths_.empty()) {
    const auto it = mask_paths_.find(sample_id);
    if (it == mask_paths_.end()) {
      raise(ErrorCode::MaskNotFound, "no stored mask for '" + sample_id + "'");
    }
    path = it->second;
  } else {
    path = mask_dir_ / (sample_id + ".png");
  }
  if (!std::filesystem::exists(path)) {
    raise(ErrorCode::MaskNotFound, "no stored mask for '" + sample_id + "' at " + path.string());
  }
  BinaryMask mask = load_mask(path);
  if (perturb_px_ > 0) {
    SplitMix64 rng(derive_seed(seed_, sample_id));
    const int d = rng.uniform_int(-perturb_px_, perturb_px_);
    if (d > 0) mask = dilate(mask, 2 * d + 1);
    if (d < 0) mask = erode(mask, 2 * (-d) + 1);
  }
  return mask;
}

BinaryMask OracleSegmenter::segment(const ImageBuffer& image, const std::string& sample_id) const {
  BinaryMask mask = load_for(sample_id);
  if (mask.width != image.width || mask.height != image.height) {
    raise(ErrorCode::DimensionMismatch, "stored mask size differs for '" + sample_id + "'");
  }
  return mask;
}

std::unique_ptr<SegmenterAdapter> OracleSegmenter::clone() const {
  return std::make_unique<OracleSegmenter>(*this);
}

BinaryMask oracle_segment(const std::filesystem::path& mask_dir, const std::string& sample_id) {
  const auto path = mask_dir / (sample_id + ".png");
  if (!std::filesystem::exists(path)) {
    raise(ErrorCode::MaskNotFound, "no stored mask for '" + sample_id + "' at " + path.string());
  }
  return load_mask(path);
}

std::string segmenter_config_to_json(const SegmenterConfig& config) {
  json j;
  j["threshold"] = config.threshold_mode == SegmenterConfig::ThresholdMode::Otsu ? "otsu" : "fixed";
  j["fixed_value"] = config.fixed_value;
  j["polarity"] =
      config.polarity == SegmenterConfig::Polarity::DarkOnLight ? "dark_on_light" : "light_on_dark";
  j["close_kernel"] = config.close_kernel;
  j["min_region_area"] = config.min_region_area;
  return j.dump(2) + "\n";
}

SegmenterConfig segmenter_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    raise(ErrorCode::ConfigError, std::string("segmenter config: ") + e.what());
  }
  SegmenterConfig config;
  try {
    if (j.contains("threshold")) {
      const auto mode = j["threshold"].get<std::string>();
      if (mode == "otsu") {
        config.threshold_mode = SegmenterConfig::ThresholdMode::Otsu;
      } else if (mode == "fixed") {
        config.threshold_mode = SegmenterConfig::ThresholdMode::Fixed;
      } else {
        raise(ErrorCode::ConfigError, "unknown threshold mode " + mode);
      }
    }
    if (j.contains("fixed_value")) config.fixed_value = j["fixed_value"].get<int>();
    if (j.contains("polarity")) {
      const auto pol = j["polarity"].get<std::string>();
      if (pol == "dark_on_light") {
        config.polarity = SegmenterConfig::Polarity::DarkOnLight;
      } else if (pol == "light_on_dark") {
        config.polarity = SegmenterConfig::Polarity::LightOnDark;
      } else {
        raise(ErrorCode::ConfigError, "unknown polarity " + pol);
      }
    }
    if (j.contains("close_kernel")) config.close_kernel = j["close_kernel"].get<int>();
    if (j.contains("min_region_area")) config.min_region_area = j["min_region_area"].get<int>();
  } catch (const json::exception& e) {
    raise(ErrorCode::ConfigError, std::string("segmenter config: ") + e.what());
  }
  validate(config);
  return config;
}

}  // namespace amrf
