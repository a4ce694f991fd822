#pragma once

#include <optional>
#include <string>
#include <vector>

#include "amrf/classify.hpp"
#include "amrf/image.hpp"
#include "amrf/manifest.hpp"
#include "amrf/moments.hpp"
#include "amrf/segment.hpp"

namespace amrf {

/// Intersection over union; 1.0 when both masks are empty.
double iou(const BinaryMask& a, const BinaryMask& b);
/// Dice coefficient; 1.0 when both masks are empty.
double dice(const BinaryMask& a, const BinaryMask& b);

/// Thresholds for the crop screening surrogate (alignment, completeness,
/// clarity). The sharpness default was calibrated on the synthetic fixture:
/// blurred code crops stay well above it, texture-only crops fall below.
struct ScreeningThresholds {
  double align_deg = 2.0;
  double completeness = 0.99;
  double sharpness = 60.0;
};

struct ScreeningResult {
  bool pass = false;
  bool alignment_ok = false;
  bool completeness_ok = false;
  bool clarity_ok = false;
  double residual_angle_deg = 0.0;
  double completeness = 0.0;
  double sharpness = 0.0;
};

/// Screen a crop: residual orientation of the crop mask within align_deg,
/// crop retains >= completeness of the pre-crop mask pixels with none on the
/// outermost pixel ring, and Laplacian variance of the crop >= sharpness.
ScreeningResult screen_crop(const CropResult& crop, const ScreeningThresholds& thresholds = {});

/// Per-dataset fail counts and the dual metric (crop accuracy,
/// classification accuracy).
struct EvaluationReport {
  std::string dataset;
  std::int64_t fail_f1 = 0, total_f1 = 0;
  std::int64_t fail_f2 = 0, total_f2 = 0;
  double crop_accuracy = 0.0;  // 100 * (1 - total fails / total samples)
  double cls_accuracy = 0.0;
  int pool_version = 0;
  std::vector<std::string> failures;  // sorted sample ids

  static EvaluationReport from_counts(std::string dataset, std::int64_t fail_f1,
                                      std::int64_t total_f1, std::int64_t fail_f2,
                                      std::int64_t total_f2, double cls_accuracy = 0.0,
                                      int pool_version = 0);
};

std::string report_to_json(const EvaluationReport& report);
/// One fail/total row per factory, table style.
std::string report_table_row(const EvaluationReport& report);

struct EvalOptions {
  int margin = 8;
  ScreeningThresholds screening;
  /// When a ground-truth mask is present, IoU below this additionally counts
  /// as a failure. Negative disables the rule.
  double iou_fail_threshold = 0.5;
  /// Classification accuracy over all samples instead of passing crops only.
  bool cls_over_all = false;
  int jobs = 1;
};

struct SampleOutcome {
  std::string id;
  bool failed = false;
  bool screen_pass = false;
  double gt_iou = -1.0;         // -1 when no ground truth
  std::string predicted_label;  // empty when the crop was never classified
  bool cls_evaluated = false;
  bool cls_correct = false;
  std::string reason;  // "", "screening", "iou", "segmenter:<code>"
};

/// In-memory evaluation unit.
struct EvalSample {
  std::string id;
  ImageBuffer image;
  std::optional<BinaryMask> gt_mask;
  std::string factory;
};

struct SampleSetMetrics {
  double crop_accuracy = 0.0;
  double cls_accuracy = 0.0;
  std::int64_t passing = 0;
  std::int64_t total = 0;
};

/// Segment -> angle-adaptive crop -> screen each sample; classification runs
/// on passing crops. Deterministic and order-independent under any jobs
/// setting.
SampleSetMetrics evaluate_samples(const SegmenterAdapter& segmenter,
                                  const ClassifierAdapter& classifier,
                                  const std::vector<EvalSample>& samples,
                                  const EvalOptions& options = {},
                                  std::vector<SampleOutcome>* outcomes = nullptr);

/// Manifest-level evaluation with per-factory aggregation.
EvaluationReport evaluate_dataset(const SegmenterAdapter& segmenter,
                                  const ClassifierAdapter& classifier,
                                  const DatasetManifest& manifest, int pool_version,
                                  const EvalOptions& options = {},
                                  std::vector<SampleOutcome>* outcomes = nullptr);

}  // namespace amrf
