#include "amrf/classify.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace amrf {
namespace {

using json = nlohmann::ordered_json;

constexpr double kWindowFraction = 0.6;

}  // namespace

void validate(const StubClassifierConfig& config) {
  if (config.density_threshold <= 0.0 || config.density_threshold >= 1.0) {
    raise(ErrorCode::ValueOutOfRange, "density_threshold must be in (0, 1)");
  }
  if (config.dark_cutoff < 0 || config.dark_cutoff > 255) {
    raise(ErrorCode::ValueOutOfRange, "dark_cutoff must be an 8-bit level");
  }
}

double dark_density(const ImageBuffer& crop, int dark_cutoff) {
  if (crop.empty()) raise(ErrorCode::EmptyCrop, "cannot classify an empty crop");
  const int x0 = static_cast<int>(std::floor(crop.width * (1.0 - kWindowFraction) / 2.0));
  const int y0 = static_cast<int>(std::floor(crop.height * (1.0 - kWindowFraction) / 2.0));
  const int x1 = crop.width - 1 - x0;
  const int y1 = crop.height - 1 - y0;
  std::int64_t dark = 0, total = 0;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double g = gray_value(crop.at(x, y, 0), crop.at(x, y, 1), crop.at(x, y, 2));
      if (g < dark_cutoff) ++dark;
      ++total;
    }
  }
  return total > 0 ? static_cast<double>(dark) / static_cast<double>(total) : 0.0;
}

std::string stub_classify(const StubClassifierConfig& config, const ImageBuffer& crop) {
  validate(config);
  return dark_density(crop, config.dark_cutoff) >= config.density_threshold ? "F1" : "F2";
}

StubClassifierConfig stub_fit(const std::vector<std::pair<ImageBuffer, std::string>>& labeled_crops,
                              int dark_cutoff) {
  double sum_f1 = 0.0, sum_f2 = 0.0;
  std::int64_t n_f1 = 0, n_f2 = 0;
  for (const auto& [crop, label] : labeled_crops) {
    const double density = dark_density(crop, dark_cutoff);
    if (label == "F1") {
      sum_f1 += density;
      ++n_f1;
    } else {
      sum_f2 += density;
      ++n_f2;
    }
  }
  if (n_f1 == 0 || n_f2 == 0) {
    raise(ErrorCode::SingleClassTrainingSet, "stub_fit needs both factory labels");
  }
  StubClassifierConfig config;
  config.dark_cutoff = dark_cutoff;
  config.density_threshold = (sum_f1 / n_f1 + sum_f2 / n_f2) / 2.0;
  validate(config);
  return config;
}

StubClassifier::StubClassifier(StubClassifierConfig config) : config_(config) {
  validate(config_);
}

std::string StubClassifier::classify(const ImageBuffer& crop) const {
  return stub_classify(config_, crop);
}

std::string classifier_config_to_json(const StubClassifierConfig& config) {
  json j;
  j["density_threshold"] = config.density_threshold;
  j["dark_cutoff"] = config.dark_cutoff;
  return j.dump(2) + "\n";
}

StubClassifierConfig classifier_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    raise(ErrorCode::ConfigError, std::string("classifier config: ") + e.what());
  }
  StubClassifierConfig config;
  try {
    config.density_threshold = j.at("density_threshold").get<double>();
    config.dark_cutoff = j.at("dark_cutoff").get<int>();
  } catch (const json::exception& e) {
    raise(ErrorCode::ConfigError, std::string("classifier config: ") + e.what());
  }
  validate(config);
  return config;
}

}  // namespace amrf
