#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "amrf/augment.hpp"
#include "amrf/classify.hpp"
#include "amrf/metrics.hpp"
#include "amrf/segment.hpp"

namespace amrf {

/// A candidate augmentation for the pool: either a kind the pool lacks or a
/// strict range expansion of an existing kind.
struct CandidateSpec {
  AugmentationMethod method;

  bool operator==(const CandidateSpec&) const = default;
};

bool candidate_eligible(const CandidateSpec& candidate, const AugmentationPool& pool);

/// The explored candidates: Gaussian blur [1, 11], contrast [0.1, 1.5],
/// zoom [0.5, 2].
std::vector<CandidateSpec> default_candidate_menu();

struct CandidateVerdict {
  CandidateSpec candidate;
  double baseline_crop = 0.0, baseline_cls = 0.0;
  double with_crop = 0.0, with_cls = 0.0;
  double delta_crop = 0.0, delta_cls = 0.0;
  bool reference_ok = true;
  bool qualified = false;
  int pool_version = 0;
};

/// Dual-metric admission rule: both margins must exceed epsilon.
bool margins_qualify(double delta_crop, double delta_cls, double epsilon);

/// ceil(fraction * |failures|) ids drawn uniformly without replacement,
/// deterministic in seed and independent of input order. Empty input gives
/// an empty selection.
std::vector<std::string> select_failures(std::vector<std::string> failure_ids, double fraction,
                                         std::uint64_t seed);

struct ReadaptOptions {
  int trials_per_candidate = 8;
  double epsilon = 0.5;  // percentage points, on both metrics
  EvalOptions eval;
};

/// Probe candidates on the selected failure samples: each sample is
/// augmented trials_per_candidate times per candidate, the trained adapter's
/// dual metric over the variants is compared against its metric on the
/// un-augmented samples, and the frozen reference vetoes candidates that
/// lock it out of samples it could previously assess. The reference is
/// treated as equivariant: its prediction on the original image is carried
/// through each variant's geometric transform.
std::vector<CandidateVerdict> pseudo_readapt(const std::vector<EvalSample>& selected,
                                             const std::vector<CandidateSpec>& candidates,
                                             const SegmenterAdapter& trained,
                                             const SegmenterAdapter& reference,
                                             const ClassifierAdapter& classifier,
                                             int pool_version, const ReadaptOptions& options,
                                             std::uint64_t seed);

/// Admit the best qualified candidate (highest delta_crop, then delta_cls,
/// then kind name); range expansions replace the old range. Bumps the
/// version only when something changed. admit_all admits every qualified
/// candidate in one expansion step.
AugmentationPool expand_pool(const AugmentationPool& pool,
                             const std::vector<CandidateVerdict>& verdicts,
                             bool admit_all = false);

struct RunSettings {
  std::filesystem::path train_manifest;
  std::vector<std::filesystem::path> test_manifests;
  SegmenterConfig adapter_base;
  std::string reference_kind = "oracle";  // "oracle" | "baseline"
  int reference_perturb_px = 0;
  SegmenterConfig reference_config;                // used by the baseline reference
  std::optional<StubClassifierConfig> classifier;  // nullopt: fit on the train split
  AugmentationPool initial_pool = default_pool();
  std::vector<CandidateSpec> candidate_menu = default_candidate_menu();
  double fraction = 0.05;
  double epsilon = 0.5;
  int max_iterations = 4;
  int trials_per_candidate = 8;
  std::uint64_t seed = 0;
  EvalOptions eval;
  bool admit_all = false;
};

void validate(const RunSettings& settings);

struct HistoryEntry {
  AugmentationPool pool;
  SegmenterConfig fitted_config;
  std::vector<EvaluationReport> reports;            // one per test manifest
  std::vector<std::string> selected_failures;       // "<dataset>/<id>"
  std::vector<CandidateVerdict> verdicts;
};

struct EvolutionHistory {
  std::string config_json;  // the settings the run was produced from
  std::vector<HistoryEntry> entries;
  bool non_improving = false;
};

/// The full loop: fit the adapter on pool-augmented training pairs, evaluate
/// on the test manifests, and while failures remain and candidates qualify,
/// select failures, run pseudo re-adaptation and expand the pool. At most
/// max_iterations expansions; history length <= max_iterations + 1.
EvolutionHistory run_amrf(const RunSettings& settings);

// Aggregates across a history entry's reports (pooled fail counts for crop,
// mean for classification).
double pooled_crop_accuracy(const HistoryEntry& entry);
double mean_cls_accuracy(const HistoryEntry& entry);

std::string history_to_json(const EvolutionHistory& history);
std::string settings_to_json(const RunSettings& settings);
RunSettings settings_from_json(const std::string& text, const std::filesystem::path& base_dir);

}  // namespace amrf
