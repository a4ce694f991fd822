#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "amrf/image.hpp"
#include "amrf/manifest.hpp"

namespace amrf {

/// Classical threshold-morphology segmenter configuration.
struct SegmenterConfig {
  enum class ThresholdMode { Otsu, Fixed };
  enum class Polarity { DarkOnLight, LightOnDark };

  ThresholdMode threshold_mode = ThresholdMode::Otsu;
  int fixed_value = 128;
  Polarity polarity = Polarity::DarkOnLight;
  int close_kernel = 5;       // odd, >= 1
  int min_region_area = 200;  // pixels

  bool operator==(const SegmenterConfig&) const = default;
};

void validate(const SegmenterConfig& config);
std::string segmenter_config_to_json(const SegmenterConfig& config);
SegmenterConfig segmenter_config_from_json(const std::string& text);

/// Grayscale threshold -> morphological close -> largest connected component
/// (8-connectivity) of sufficient area, plus any component whose dilated
/// footprint touches it. Throws NoRegionFound when nothing qualifies.
///
/// Two guards make the pipeline usable on geometrically augmented inputs,
/// whose out-of-canvas areas are filled with constant black: border-connected
/// constant-color regions are excluded from both histogram and foreground,
/// and thresholded components that touch the border while covering >= 2% of
/// the canvas are dropped from region candidacy.
BinaryMask baseline_segment(const SegmenterConfig& config, const ImageBuffer& image);

using TrainingPair = std::pair<ImageBuffer, BinaryMask>;

/// Grid search over {Otsu, Fixed(base.fixed_value)} x close_kernel {1,3,5,7}
/// x min_region_area {50,200,800} maximizing mean IoU against the pair masks.
/// Ties resolve to the earliest grid cell in that enumeration order.
SegmenterConfig baseline_fit(const SegmenterConfig& base, const std::vector<TrainingPair>& pairs,
                             int jobs = 1);

/// Pluggable segmenter contract. sample_id is context for adapters that
/// resolve stored masks; image-driven adapters ignore it.
class SegmenterAdapter {
 public:
  virtual ~SegmenterAdapter() = default;
  virtual std::string name() const = 0;
  virtual BinaryMask segment(const ImageBuffer& image, const std::string& sample_id) const = 0;
  virtual bool trainable() const { return false; }
  /// Returns the re-fitted adapter; the original is never mutated.
  virtual std::unique_ptr<SegmenterAdapter> fit(const std::vector<TrainingPair>& pairs,
                                                int jobs = 1) const;
  virtual std::unique_ptr<SegmenterAdapter> clone() const = 0;
};

class BaselineSegmenter final : public SegmenterAdapter {
 public:
  explicit BaselineSegmenter(SegmenterConfig config = {});

  const SegmenterConfig& config() const { return config_; }
  std::string name() const override { return "baseline"; }
  BinaryMask segment(const ImageBuffer& image, const std::string& sample_id) const override;
  bool trainable() const override { return true; }
  std::unique_ptr<SegmenterAdapter> fit(const std::vector<TrainingPair>& pairs,
                                        int jobs = 1) const override;
  std::unique_ptr<SegmenterAdapter> clone() const override;

 private:
  SegmenterConfig config_;
};

/// Frozen adapter returning stored masks; stands in for an external
/// reference segmenter. perturb_px > 0 applies a seeded boundary
/// erosion/dilation of up to that many pixels per sample.
class OracleSegmenter final : public SegmenterAdapter {
 public:
  explicit OracleSegmenter(std::filesystem::path mask_dir, int perturb_px = 0,
                           std::uint64_t seed = 0);
  /// Resolves mask paths through manifest records instead of a directory.
  static OracleSegmenter from_manifests(const std::vector<DatasetManifest>& manifests,
                                        int perturb_px = 0, std::uint64_t seed = 0);

  std::string name() const override { return "oracle"; }
  BinaryMask segment(const ImageBuffer& image, const std::string& sample_id) const override;
  std::unique_ptr<SegmenterAdapter> clone() const override;

 private:
  BinaryMask load_for(const std::string& sample_id) const;

  std::filesystem::path mask_dir_;
  std::map<std::string, std::filesystem::path> mask_paths_;
  int perturb_px_ = 0;
  std::uint64_t seed_ = 0;
};

/// Stored-mask lookup without an image context (perturbation off).
BinaryMask oracle_segment(const std::filesystem::path& mask_dir, const std::string& sample_id);

// Binary morphology with a k x k square structuring element (k odd).
// Dilation treats out-of-canvas as false, erosion as true.
BinaryMask dilate(const BinaryMask& mask, int ksize);
BinaryMask erode(const BinaryMask& mask, int ksize);

}  // namespace amrf
