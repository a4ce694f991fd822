#pragma once

#include <string>
#include <utility>
#include <vector>

#include "amrf/image.hpp"

namespace amrf {

/// One-feature factory classifier: thresholds the dark-pixel density of the
/// crop's code region (the central window of the crop, which the margin
/// keeps inside the code for any zoom).
struct StubClassifierConfig {
  double density_threshold = 0.385;
  int dark_cutoff = 110;

  bool operator==(const StubClassifierConfig&) const = default;
};

void validate(const StubClassifierConfig& config);
std::string classifier_config_to_json(const StubClassifierConfig& config);
StubClassifierConfig classifier_config_from_json(const std::string& text);

/// Fraction of the crop's central window (60% per axis) whose gray level is
/// below dark_cutoff.
double dark_density(const ImageBuffer& crop, int dark_cutoff);

/// F1 when density >= threshold (F1 is the denser style), else F2.
std::string stub_classify(const StubClassifierConfig& config, const ImageBuffer& crop);

/// Midpoint between class-mean densities. Both labels must be present.
StubClassifierConfig stub_fit(const std::vector<std::pair<ImageBuffer, std::string>>& labeled_crops,
                              int dark_cutoff = 110);

class ClassifierAdapter {
 public:
  virtual ~ClassifierAdapter() = default;
  virtual std::string name() const = 0;
  virtual std::string classify(const ImageBuffer& crop) const = 0;
};

class StubClassifier final : public ClassifierAdapter {
 public:
  explicit StubClassifier(StubClassifierConfig config = {});

  const StubClassifierConfig& config() const { return config_; }
  std::string name() const override { return "stub"; }
  std::string classify(const ImageBuffer& crop) const override;

 private:
  StubClassifierConfig config_;
};

}  // namespace amrf
