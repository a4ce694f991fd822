#include "amrf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "amrf/parallel.hpp"
#include "amrf/png_io.hpp"

namespace amrf {
namespace {

using json = nlohmann::ordered_json;

struct Overlap {
  std::int64_t intersection = 0;
  std::int64_t count_a = 0;
  std::int64_t count_b = 0;
};

Overlap overlap(const BinaryMask& a, const BinaryMask& b) {
  require_same_size(a, b);
  Overlap o;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    const bool va = a.bits[i] != 0;
    const bool vb = b.bits[i] != 0;
    o.count_a += va;
    o.count_b += vb;
    o.intersection += va && vb;
  }
  return o;
}

}  // namespace

double iou(const BinaryMask& a, const BinaryMask& b) {
  const Overlap o = overlap(a, b);
  const std::int64_t uni = o.count_a + o.count_b - o.intersection;
  if (uni == 0) return 1.0;  // both empty
  return static_cast<double>(o.intersection) / static_cast<double>(uni);
}

double dice(const BinaryMask& a, const BinaryMask& b) {
  const Overlap o = overlap(a, b);
  if (o.count_a + o.count_b == 0) return 1.0;
  return 2.0 * static_cast<double>(o.intersection) /
         static_cast<double>(o.count_a + o.count_b);
}

ScreeningResult screen_crop(const CropResult& crop, const ScreeningThresholds& thresholds) {
  ScreeningResult result;

  const std::int64_t kept = crop.crop_mask.popcount();
  if (kept > 0) {
    result.residual_angle_deg = orientation_angle(compute_moments(crop.crop_mask));
  } else {
    result.residual_angle_deg = 90.0;  // nothing to align
  }
  result.alignment_ok = std::abs(result.residual_angle_deg) <= thresholds.align_deg;

  result.completeness = crop.pre_crop_mask_area > 0
                            ? static_cast<double>(kept) /
                                  static_cast<double>(crop.pre_crop_mask_area)
                            : 0.0;
  bool ring_clear = true;
  const int w = crop.crop_mask.width;
  const int h = crop.crop_mask.height;
  for (int x = 0; x < w && ring_clear; ++x) {
    if (crop.crop_mask.at(x, 0) || crop.crop_mask.at(x, h - 1)) ring_clear = false;
  }
  for (int y = 0; y < h && ring_clear; ++y) {
    if (crop.crop_mask.at(0, y) || crop.crop_mask.at(w - 1, y)) ring_clear = false;
  }
  result.completeness_ok = result.completeness >= thresholds.completeness && ring_clear;

  result.sharpness = laplacian_variance(crop.crop);
  result.clarity_ok = result.sharpness >= thresholds.sharpness;

  result.pass = result.alignment_ok && result.completeness_ok && result.clarity_ok;
  return result;
}

EvaluationReport EvaluationReport::from_counts(std::string dataset, std::int64_t fail_f1,
                                               std::int64_t total_f1, std::int64_t fail_f2,
                                               std::int64_t total_f2, double cls_accuracy,
                                               int pool_version) {
  EvaluationReport report;
  report.dataset = std::move(dataset);
  report.fail_f1 = fail_f1;
  report.total_f1 = total_f1;
  report.fail_f2 = fail_f2;
  report.total_f2 = total_f2;
  const std::int64_t total = total_f1 + total_f2;
  report.crop_accuracy =
      total > 0 ? 100.0 * (1.0 - static_cast<double>(fail_f1 + fail_f2) /
                                     static_cast<double>(total))
                : 0.0;
  report.cls_accuracy = cls_accuracy;
  report.pool_version = pool_version;
  return report;
}

SampleSetMetrics evaluate_samples(const SegmenterAdapter& segmenter,
                                  const ClassifierAdapter& classifier,
                                  const std::vector<EvalSample>& samples,
                                  const EvalOptions& options,
                                  std::vector<SampleOutcome>* outcomes) {
  std::vector<SampleOutcome> results(samples.size());

  parallel_for(samples.size(), options.jobs, [&](std::size_t i) {
    const EvalSample& sample = samples[i];
    SampleOutcome& out = results[i];
    out.id = sample.id;

    BinaryMask predicted;
    try {
      predicted = segmenter.segment(sample.image, sample.id);
    } catch (const Error& e) {
      out.failed = true;
      out.reason = std::string("segmenter:") + to_string(e.code());
      return;
    }

    CropResult crop;
    try {
      crop = angle_adaptive_crop(sample.image, predicted, options.margin);
    } catch (const Error& e) {
      out.failed = true;
      out.reason = std::string("segmenter:") + to_string(e.code());
      return;
    }

    const ScreeningResult screening = screen_crop(crop, options.screening);
    out.screen_pass = screening.pass;
    if (!screening.pass) {
      out.failed = true;
      out.reason = "screening";
    }

    if (sample.gt_mask) {
      out.gt_iou = iou(predicted, *sample.gt_mask);
      if (!out.failed && options.iou_fail_threshold >= 0.0 &&
          out.gt_iou < options.iou_fail_threshold) {
        out.failed = true;
        out.reason = "iou";
      }
    }

    if (!out.failed || options.cls_over_all) {
      out.predicted_label = classifier.classify(crop.crop);
      out.cls_evaluated = true;
      out.cls_correct = out.predicted_label == sample.factory;
    }
  });

  SampleSetMetrics metrics;
  metrics.total = static_cast<std::int64_t>(samples.size());
  std::int64_t cls_total = 0, cls_correct = 0;
  for (const auto& out : results) {
    if (!out.failed) ++metrics.passing;
    if (out.cls_evaluated) {
      ++cls_total;
      if (out.cls_correct) ++cls_correct;
    }
  }
  metrics.crop_accuracy =
      metrics.total > 0
          ? 100.0 * static_cast<double>(metrics.passing) / static_cast<double>(metrics.total)
          : 0.0;
  metrics.cls_accuracy =
      cls_total > 0 ? 100.0 * static_cast<double>(cls_correct) / static_cast<double>(cls_total)
                    : 0.0;

  if (outcomes) *outcomes = std::move(results);
  return metrics;
}

EvaluationReport evaluate_dataset(const SegmenterAdapter& segmenter,
                                  const ClassifierAdapter& classifier,
                                  const DatasetManifest& manifest, int pool_version,
                                  const EvalOptions& options,
                                  std::vector<SampleOutcome>* outcomes) {
  validate(manifest);

  std::vector<EvalSample> samples(manifest.records.size());
  parallel_for(manifest.records.size(), options.jobs, [&](std::size_t i) {
    const SampleRecord& rec = manifest.records[i];
    EvalSample& sample = samples[i];
    sample.id = rec.id;
    sample.factory = rec.factory;
    try {
      sample.image = load_image(rec.image_path);
      if (rec.mask_path) sample.gt_mask = load_mask(*rec.mask_path);
    } catch (const Error& e) {
      raise(e.code(), "sample '" + rec.id + "': " + e.what());
    }
  });

  std::vector<SampleOutcome> results;
  const SampleSetMetrics metrics =
      evaluate_samples(segmenter, classifier, samples, options, &results);

  EvaluationReport report;
  report.dataset = manifest.name;
  report.pool_version = pool_version;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const bool f1 = manifest.records[i].factory == "F1";
    (f1 ? report.total_f1 : report.total_f2) += 1;
    if (results[i].failed) {
      (f1 ? report.fail_f1 : report.fail_f2) += 1;
      report.failures.push_back(results[i].id);
    }
  }
  std::sort(report.failures.begin(), report.failures.end());
  const std::int64_t total = report.total_f1 + report.total_f2;
  report.crop_accuracy =
      100.0 * (1.0 - static_cast<double>(report.fail_f1 + report.fail_f2) /
                         static_cast<double>(total));
  report.cls_accuracy = metrics.cls_accuracy;

  if (outcomes) *outcomes = std::move(results);
  return report;
}

std::string report_to_json(const EvaluationReport& report) {
  json j;
  j["dataset"] = report.dataset;
  j["fail_f1"] = report.fail_f1;
  j["total_f1"] = report.total_f1;
  j["fail_f2"] = report.fail_f2;
  j["total_f2"] = report.total_f2;
  j["crop_accuracy"] = report.crop_accuracy;
  j["cls_accuracy"] = report.cls_accuracy;
  j["pool_version"] = report.pool_version;
  j["failures"] = report.failures;
  return j.dump(2) + "\n";
}

std::string report_table_row(const EvaluationReport& report) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%-12s F1 %lld/%lld  F2 %lld/%lld  crop %.2f  cls %.2f  (pool v%d)",
                report.dataset.c_str(), static_cast<long long>(report.fail_f1),
                static_cast<long long>(report.total_f1), static_cast<long long>(report.fail_f2),
                static_cast<long long>(report.total_f2), report.crop_accuracy,
                report.cls_accuracy, report.pool_version);
  return buf;
}

}  // namespace amrf
