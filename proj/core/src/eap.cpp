#include "amrf/eap.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "amrf/parallel.hpp"
#include "amrf/png_io.hpp"
#include "amrf/rng.hpp"

namespace amrf {
namespace {

using json = nlohmann::ordered_json;

// Adapter over a fixed list of masks, keyed by the numeric sample id it is
// queried with. Lets candidate probes reuse the evaluate_samples path.
class FixedMaskAdapter final : public SegmenterAdapter {
 public:
  explicit FixedMaskAdapter(std::vector<BinaryMask> masks) : masks_(std::move(masks)) {}

  std::string name() const override { return "fixed"; }

  BinaryMask segment(const ImageBuffer&, const std::string& sample_id) const override {
    const std::size_t index = std::stoul(sample_id);
    return masks_.at(index);
  }

  std::unique_ptr<SegmenterAdapter> clone() const override {
    return std::make_unique<FixedMaskAdapter>(masks_);
  }

 private:
  std::vector<BinaryMask> masks_;
};

bool strict_superset(const AugmentationMethod& wide, const AugmentationMethod& narrow) {
  return wide.min_value <= narrow.min_value && wide.max_value >= narrow.max_value &&
         (wide.min_value < narrow.min_value || wide.max_value > narrow.max_value);
}

}  // namespace

bool candidate_eligible(const CandidateSpec& candidate, const AugmentationPool& pool) {
  validate(candidate.method);
  const AugmentationMethod* existing = pool.find(candidate.method.kind);
  if (!existing) return true;
  return strict_superset(candidate.method, *existing);
}

std::vector<CandidateSpec> default_candidate_menu() {
  return {
      {{AugKind::GaussianBlur, 1.0, 11.0}},
      {{AugKind::Contrast, 0.1, 1.5}},
      {{AugKind::Zoom, 0.5, 2.0}},
  };
}

bool margins_qualify(double delta_crop, double delta_cls, double epsilon) {
  return delta_crop > epsilon && delta_cls > epsilon;
}

std::vector<std::string> select_failures(std::vector<std::string> failure_ids, double fraction,
                                         std::uint64_t seed) {
  if (fraction <= 0.0 || fraction > 1.0) {
    raise(ErrorCode::ValueOutOfRange, "fraction must be in (0, 1]");
  }
  if (failure_ids.empty()) return {};
  std::sort(failure_ids.begin(), failure_ids.end());

  const auto n = failure_ids.size();
  const auto k = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(n) - 1e-12));
  const std::size_t take = std::max<std::size_t>(1, std::min(k, n));

  SplitMix64 rng(mix64(seed));
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(failure_ids[i], failure_ids[j]);
  }
  failure_ids.resize(take);
  std::sort(failure_ids.begin(), failure_ids.end());
  return failure_ids;
}

std::vector<CandidateVerdict> pseudo_readapt(const std::vector<EvalSample>& selected,
                                             const std::vector<CandidateSpec>& candidates,
                                             const SegmenterAdapter& trained,
                                             const SegmenterAdapter& reference,
                                             const ClassifierAdapter& classifier,
                                             int pool_version, const ReadaptOptions& options,
                                             std::uint64_t seed) {
  if (selected.empty()) raise(ErrorCode::ValueOutOfRange, "no samples selected");
  if (candidates.empty()) raise(ErrorCode::ValueOutOfRange, "no candidates given");
  if (options.trials_per_candidate < 1) {
    raise(ErrorCode::ValueOutOfRange, "trials_per_candidate must be >= 1");
  }

  // Baseline dual metric on the un-augmented selection.
  const SampleSetMetrics baseline =
      evaluate_samples(trained, classifier, selected, options.eval);

  // Reference predictions on the originals, and its per-sample pass flags.
  std::vector<BinaryMask> ref_masks(selected.size());
  std::vector<EvalSample> originals(selected.size());
  for (std::size_t i = 0; i < selected.size(); ++i) {
    ref_masks[i] = reference.segment(selected[i].image, selected[i].id);
    originals[i] = selected[i];
    originals[i].id = std::to_string(i);
  }
  std::vector<SampleOutcome> ref_orig_outcomes;
  evaluate_samples(FixedMaskAdapter(ref_masks), classifier, originals, options.eval,
                   &ref_orig_outcomes);
  std::int64_t ref_orig_pass = 0;
  for (const auto& o : ref_orig_outcomes) ref_orig_pass += o.failed ? 0 : 1;
  const double ref_orig_rate =
      static_cast<double>(ref_orig_pass) / static_cast<double>(selected.size());

  std::vector<CandidateVerdict> verdicts(candidates.size());
  const int trials = options.trials_per_candidate;

  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    const AugmentationMethod& method = candidates[ci].method;

    // Build the variants and the equivariantly transformed reference masks.
    std::vector<EvalSample> variants(selected.size() * static_cast<std::size_t>(trials));
    std::vector<BinaryMask> ref_variant_masks(variants.size());
    parallel_for(variants.size(), options.eval.jobs, [&](std::size_t v) {
      const std::size_t i = v / static_cast<std::size_t>(trials);
      const std::size_t t = v % static_cast<std::size_t>(trials);
      const std::uint64_t vseed =
          mix64(seed ^ (0x51ED2701ull * (ci + 1)) ^ (0xA24BAED4963EE407ull * (i + 1)) ^
                (0x9FB21C651E98DF25ull * (t + 1)));
      const double value = sample_value(method, vseed);

      const EvalSample& src = selected[i];
      const BinaryMask* gt = src.gt_mask ? &*src.gt_mask : nullptr;
      auto [aug_image, aug_gt] = apply(method, value, src.image, gt);

      EvalSample& variant = variants[v];
      variant.id = std::to_string(v);
      variant.factory = src.factory;
      variant.image = std::move(aug_image);
      if (aug_gt) variant.gt_mask = std::move(*aug_gt);

      auto [unused_image, ref_mask] = apply(method, value, src.image, &ref_masks[i]);
      ref_variant_masks[v] = std::move(*ref_mask);
    });

    // Trained adapter's dual metric over the variants.
    const SampleSetMetrics with_candidate =
        evaluate_samples(trained, classifier, variants, options.eval);

    // Reference gate: every previously assessable sample must keep at least
    // one variant the reference still passes.
    std::vector<SampleOutcome> ref_outcomes;
    evaluate_samples(FixedMaskAdapter(ref_variant_masks), classifier, variants, options.eval,
                     &ref_outcomes);
    std::int64_t samples_with_pass = 0;
    for (std::size_t i = 0; i < selected.size(); ++i) {
      bool any = false;
      for (int t = 0; t < trials && !any; ++t) {
        any = !ref_outcomes[i * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)]
                   .failed;
      }
      samples_with_pass += any ? 1 : 0;
    }
    const double ref_variant_rate =
        static_cast<double>(samples_with_pass) / static_cast<double>(selected.size());

    CandidateVerdict& verdict = verdicts[ci];
    verdict.candidate = candidates[ci];
    verdict.pool_version = pool_version;
    verdict.baseline_crop = baseline.crop_accuracy;
    verdict.baseline_cls = baseline.cls_accuracy;
    verdict.with_crop = with_candidate.crop_accuracy;
    verdict.with_cls = with_candidate.cls_accuracy;
    verdict.delta_crop = verdict.with_crop - verdict.baseline_crop;
    verdict.delta_cls = verdict.with_cls - verdict.baseline_cls;
    verdict.reference_ok = ref_variant_rate >= ref_orig_rate;
    verdict.qualified = verdict.reference_ok &&
                        margins_qualify(verdict.delta_crop, verdict.delta_cls, options.epsilon);
  }
  return verdicts;
}

AugmentationPool expand_pool(const AugmentationPool& pool,
                             const std::vector<CandidateVerdict>& verdicts, bool admit_all) {
  validate(pool);
  for (const auto& verdict : verdicts) {
    if (verdict.pool_version != pool.version) {
      raise(ErrorCode::StaleVerdicts,
            "verdict computed for pool v" + std::to_string(verdict.pool_version) +
                ", current v" + std::to_string(pool.version));
    }
  }

  std::vector<const CandidateVerdict*> qualified;
  for (const auto& verdict : verdicts) {
    if (verdict.qualified) qualified.push_back(&verdict);
  }
  if (qualified.empty()) return pool;

  std::stable_sort(qualified.begin(), qualified.end(),
                   [](const CandidateVerdict* a, const CandidateVerdict* b) {
                     if (a->delta_crop != b->delta_crop) return a->delta_crop > b->delta_crop;
                     if (a->delta_cls != b->delta_cls) return a->delta_cls > b->delta_cls;
                     return std::string_view(to_string(a->candidate.method.kind)) <
                            std::string_view(to_string(b->candidate.method.kind));
                   });
  if (!admit_all) qualified.resize(1);

  AugmentationPool next = pool;
  bool changed = false;
  for (const CandidateVerdict* verdict : qualified) {
    const AugmentationMethod& method = verdict->candidate.method;
    if (!candidate_eligible(verdict->candidate, next)) continue;
    if (AugmentationMethod* existing = const_cast<AugmentationMethod*>(next.find(method.kind))) {
      *existing = method;  // range expansion
    } else {
      next.methods.push_back(method);
    }
    changed = true;
  }
  if (changed) next.version = pool.version + 1;
  return next;
}

void validate(const RunSettings& settings) {
  if (settings.train_manifest.empty()) raise(ErrorCode::ConfigError, "train_manifest missing");
  if (settings.test_manifests.empty()) raise(ErrorCode::ConfigError, "test_manifests missing");
  if (settings.fraction <= 0.0 || settings.fraction > 1.0) {
    raise(ErrorCode::ConfigError, "fraction must be in (0, 1]");
  }
  if (settings.epsilon < 0.0) raise(ErrorCode::ConfigError, "epsilon must be >= 0");
  if (settings.max_iterations < 0) raise(ErrorCode::ConfigError, "max_iterations must be >= 0");
  if (settings.trials_per_candidate < 1) {
    raise(ErrorCode::ConfigError, "trials_per_candidate must be >= 1");
  }
  if (settings.reference_kind != "oracle" && settings.reference_kind != "baseline") {
    raise(ErrorCode::ConfigError, "reference_kind must be 'oracle' or 'baseline'");
  }
  validate(settings.adapter_base);
  validate(settings.initial_pool);
  for (const auto& candidate : settings.candidate_menu) validate(candidate.method);
}

double pooled_crop_accuracy(const HistoryEntry& entry) {
  std::int64_t fails = 0, total = 0;
  for (const auto& report : entry.reports) {
    fails += report.fail_f1 + report.fail_f2;
    total += report.total_f1 + report.total_f2;
  }
  return total > 0 ? 100.0 * (1.0 - static_cast<double>(fails) / static_cast<double>(total))
                   : 0.0;
}

double mean_cls_accuracy(const HistoryEntry& entry) {
  if (entry.reports.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& report : entry.reports) sum += report.cls_accuracy;
  return sum / static_cast<double>(entry.reports.size());
}

EvolutionHistory run_amrf(const RunSettings& settings) {
  validate(settings);

  const DatasetManifest train = load_manifest(settings.train_manifest);
  std::vector<DatasetManifest> tests;
  tests.reserve(settings.test_manifests.size());
  for (const auto& path : settings.test_manifests) tests.push_back(load_manifest(path));

  // Training pairs need ground truth regardless of the split label.
  for (const auto& rec : train.records) {
    if (!rec.mask_path) {
      raise(ErrorCode::ConfigError, "train record '" + rec.id + "' has no mask");
    }
  }

  const int jobs = settings.eval.jobs;
  std::vector<EvalSample> train_samples(train.records.size());
  parallel_for(train.records.size(), jobs, [&](std::size_t i) {
    const auto& rec = train.records[i];
    train_samples[i] = {rec.id, load_image(rec.image_path), load_mask(*rec.mask_path),
                        rec.factory};
  });

  std::vector<std::vector<EvalSample>> test_samples(tests.size());
  for (std::size_t m = 0; m < tests.size(); ++m) {
    test_samples[m].resize(tests[m].records.size());
    parallel_for(tests[m].records.size(), jobs, [&](std::size_t i) {
      const auto& rec = tests[m].records[i];
      EvalSample sample;
      sample.id = rec.id;
      sample.factory = rec.factory;
      sample.image = load_image(rec.image_path);
      if (rec.mask_path) sample.gt_mask = load_mask(*rec.mask_path);
      test_samples[m][i] = std::move(sample);
    });
  }

  // Classifier: provided config or fit on ground-truth training crops.
  StubClassifierConfig classifier_config;
  if (settings.classifier) {
    classifier_config = *settings.classifier;
  } else {
    std::vector<std::pair<ImageBuffer, std::string>> labeled(train_samples.size());
    parallel_for(train_samples.size(), jobs, [&](std::size_t i) {
      const auto crop =
          angle_adaptive_crop(train_samples[i].image, *train_samples[i].gt_mask,
                              settings.eval.margin);
      labeled[i] = {crop.crop, train_samples[i].factory};
    });
    classifier_config = stub_fit(labeled);
  }
  const StubClassifier classifier(classifier_config);

  std::unique_ptr<SegmenterAdapter> reference;
  if (settings.reference_kind == "baseline") {
    reference = std::make_unique<BaselineSegmenter>(settings.reference_config);
  } else {
    std::vector<DatasetManifest> all = tests;
    all.push_back(train);
    reference = std::make_unique<OracleSegmenter>(OracleSegmenter::from_manifests(
        all, settings.reference_perturb_px, settings.seed));
  }

  EvolutionHistory history;
  history.config_json = settings_to_json(settings);

  AugmentationPool pool = settings.initial_pool;
  for (int round = 0;; ++round) {
    // Fit on pool-augmented training pairs.
    const std::uint64_t round_seed =
        mix64(settings.seed ^ (0xF1EA5EED0BADF00Dull + static_cast<std::uint64_t>(round)));
    std::vector<TrainingPair> pairs(train_samples.size());
    parallel_for(train_samples.size(), jobs, [&](std::size_t i) {
      auto result = apply_pipeline(pool, derive_seed(round_seed, train_samples[i].id),
                                   train_samples[i].image, *train_samples[i].gt_mask);
      pairs[i] = {std::move(result.image), std::move(result.mask)};
    });
    const SegmenterConfig fitted = baseline_fit(settings.adapter_base, pairs, jobs);
    const BaselineSegmenter trained(fitted);

    HistoryEntry entry;
    entry.pool = pool;
    entry.fitted_config = fitted;

    std::vector<std::string> failure_keys;  // "<dataset>/<id>"
    for (std::size_t m = 0; m < tests.size(); ++m) {
      EvaluationReport report = evaluate_dataset(trained, classifier, tests[m], pool.version,
                                                 settings.eval);
      for (const auto& id : report.failures) failure_keys.push_back(tests[m].name + "/" + id);
      entry.reports.push_back(std::move(report));
    }

    const bool budget_left = round < settings.max_iterations;
    std::vector<CandidateSpec> eligible;
    for (const auto& candidate : settings.candidate_menu) {
      if (candidate_eligible(candidate, pool)) eligible.push_back(candidate);
    }

    if (!budget_left || failure_keys.empty() || eligible.empty()) {
      history.entries.push_back(std::move(entry));
      break;
    }

    const auto selected_keys =
        select_failures(failure_keys, settings.fraction,
                        mix64(settings.seed ^ (0xC0FFEE0000000000ull + static_cast<std::uint64_t>(round))));
    entry.selected_failures = selected_keys;

    std::vector<EvalSample> selected;
    for (const auto& key : selected_keys) {
      const auto slash = key.find('/');
      const std::string dataset = key.substr(0, slash);
      const std::string id = key.substr(slash + 1);
      for (std::size_t m = 0; m < tests.size(); ++m) {
        if (tests[m].name != dataset) continue;
        for (const auto& sample : test_samples[m]) {
          if (sample.id == id) {
            selected.push_back(sample);
            break;
          }
        }
      }
    }

    ReadaptOptions readapt;
    readapt.trials_per_candidate = settings.trials_per_candidate;
    readapt.epsilon = settings.epsilon;
    readapt.eval = settings.eval;
    entry.verdicts = pseudo_readapt(
        selected, eligible, trained, *reference, classifier, pool.version, readapt,
        mix64(settings.seed ^ (0xBADDCAFE00000000ull + static_cast<std::uint64_t>(round))));

    const AugmentationPool next = expand_pool(pool, entry.verdicts, settings.admit_all);
    history.entries.push_back(std::move(entry));
    if (next.version == pool.version) break;  // nothing qualified
    pool = next;
  }

  const HistoryEntry& first = history.entries.front();
  const HistoryEntry& last = history.entries.back();
  history.non_improving = pooled_crop_accuracy(last) < pooled_crop_accuracy(first) ||
                          mean_cls_accuracy(last) < mean_cls_accuracy(first);
  return history;
}

namespace {

json pool_json(const AugmentationPool& pool) {
  json j;
  j["version"] = pool.version;
  j["methods"] = json::array();
  for (const auto& m : pool.methods) {
    j["methods"].push_back(
        {{"kind", to_string(m.kind)}, {"min", m.min_value}, {"max", m.max_value}});
  }
  return j;
}

AugmentationPool pool_from(const json& j) {
  AugmentationPool pool;
  pool.version = j.at("version").get<int>();
  for (const auto& jm : j.at("methods")) {
    const auto kind = aug_kind_from_string(jm.at("kind").get<std::string>());
    if (!kind) raise(ErrorCode::ConfigError, "unknown method kind in pool");
    pool.methods.push_back({*kind, jm.at("min").get<double>(), jm.at("max").get<double>()});
  }
  validate(pool);
  return pool;
}

json report_json(const EvaluationReport& report) {
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
  return j;
}

json verdict_json(const CandidateVerdict& verdict) {
  json j;
  j["candidate"] = {{"kind", to_string(verdict.candidate.method.kind)},
                    {"min", verdict.candidate.method.min_value},
                    {"max", verdict.candidate.method.max_value}};
  j["baseline_crop"] = verdict.baseline_crop;
  j["baseline_cls"] = verdict.baseline_cls;
  j["with_crop"] = verdict.with_crop;
  j["with_cls"] = verdict.with_cls;
  j["delta_crop"] = verdict.delta_crop;
  j["delta_cls"] = verdict.delta_cls;
  j["reference_ok"] = verdict.reference_ok;
  j["qualified"] = verdict.qualified;
  j["pool_version"] = verdict.pool_version;
  return j;
}

json config_json(const SegmenterConfig& config) {
  return json::parse(segmenter_config_to_json(config));
}

}  // namespace

std::string settings_to_json(const RunSettings& settings) {
  json j;
  j["train_manifest"] = settings.train_manifest.generic_string();
  j["test_manifests"] = json::array();
  for (const auto& path : settings.test_manifests) {
    j["test_manifests"].push_back(path.generic_string());
  }
  j["adapter"] = {{"type", "baseline"}, {"config", config_json(settings.adapter_base)}};
  j["reference"] = {{"type", settings.reference_kind},
                    {"perturb_px", settings.reference_perturb_px}};
  if (settings.reference_kind == "baseline") {
    j["reference"]["config"] = config_json(settings.reference_config);
  }
  if (settings.classifier) {
    j["classifier"] = json::parse(classifier_config_to_json(*settings.classifier));
  } else {
    j["classifier"] = nullptr;  // fit on the train split
  }
  j["pool"] = pool_json(settings.initial_pool);
  j["candidates"] = json::array();
  for (const auto& candidate : settings.candidate_menu) {
    j["candidates"].push_back({{"kind", to_string(candidate.method.kind)},
                               {"min", candidate.method.min_value},
                               {"max", candidate.method.max_value}});
  }
  j["fraction"] = settings.fraction;
  j["epsilon"] = settings.epsilon;
  j["max_iterations"] = settings.max_iterations;
  j["trials_per_candidate"] = settings.trials_per_candidate;
  j["seed"] = settings.seed;
  j["admit_all"] = settings.admit_all;
  j["eval"] = {{"margin", settings.eval.margin},
               {"align_deg", settings.eval.screening.align_deg},
               {"completeness", settings.eval.screening.completeness},
               {"sharpness", settings.eval.screening.sharpness},
               {"iou_fail_threshold", settings.eval.iou_fail_threshold},
               {"cls_over_all", settings.eval.cls_over_all}};
  return j.dump(2) + "\n";
}

RunSettings settings_from_json(const std::string& text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    raise(ErrorCode::ConfigError, std::string("run config: ") + e.what());
  }

  RunSettings settings;
  try {
    auto resolve = [&](const std::string& p) {
      std::filesystem::path path(p);
      return path.is_relative() ? base_dir / path : path;
    };
    settings.train_manifest = resolve(j.at("train_manifest").get<std::string>());
    for (const auto& p : j.at("test_manifests")) {
      settings.test_manifests.push_back(resolve(p.get<std::string>()));
    }
    if (j.contains("adapter") && j["adapter"].contains("config")) {
      settings.adapter_base = segmenter_config_from_json(j["adapter"]["config"].dump());
    }
    if (j.contains("reference")) {
      settings.reference_kind = j["reference"].value("type", "oracle");
      settings.reference_perturb_px = j["reference"].value("perturb_px", 0);
      if (j["reference"].contains("config")) {
        settings.reference_config = segmenter_config_from_json(j["reference"]["config"].dump());
      }
    }
    if (j.contains("classifier") && !j["classifier"].is_null()) {
      settings.classifier = classifier_config_from_json(j["classifier"].dump());
    }
    if (j.contains("pool")) settings.initial_pool = pool_from(j["pool"]);
    if (j.contains("candidates")) {
      settings.candidate_menu.clear();
      for (const auto& jc : j["candidates"]) {
        const auto kind = aug_kind_from_string(jc.at("kind").get<std::string>());
        if (!kind) raise(ErrorCode::ConfigError, "unknown candidate kind");
        settings.candidate_menu.push_back(
            {{*kind, jc.at("min").get<double>(), jc.at("max").get<double>()}});
      }
    }
    settings.fraction = j.value("fraction", settings.fraction);
    settings.epsilon = j.value("epsilon", settings.epsilon);
    settings.max_iterations = j.value("max_iterations", settings.max_iterations);
    settings.trials_per_candidate =
        j.value("trials_per_candidate", settings.trials_per_candidate);
    settings.seed = j.value("seed", settings.seed);
    settings.admit_all = j.value("admit_all", settings.admit_all);
    if (j.contains("eval")) {
      const auto& je = j["eval"];
      settings.eval.margin = je.value("margin", settings.eval.margin);
      settings.eval.screening.align_deg =
          je.value("align_deg", settings.eval.screening.align_deg);
      settings.eval.screening.completeness =
          je.value("completeness", settings.eval.screening.completeness);
      settings.eval.screening.sharpness =
          je.value("sharpness", settings.eval.screening.sharpness);
      settings.eval.iou_fail_threshold =
          je.value("iou_fail_threshold", settings.eval.iou_fail_threshold);
      settings.eval.cls_over_all = je.value("cls_over_all", settings.eval.cls_over_all);
    }
  } catch (const json::exception& e) {
    raise(ErrorCode::ConfigError, std::string("run config: ") + e.what());
  }
  validate(settings);
  return settings;
}

std::string history_to_json(const EvolutionHistory& history) {
  json j;
  j["config"] = json::parse(history.config_json);
  j["non_improving"] = history.non_improving;
  j["entries"] = json::array();
  for (const auto& entry : history.entries) {
    json je;
    je["pool"] = pool_json(entry.pool);
    je["fitted_config"] = config_json(entry.fitted_config);
    je["reports"] = json::array();
    for (const auto& report : entry.reports) je["reports"].push_back(report_json(report));
    je["selected_failures"] = entry.selected_failures;
    je["verdicts"] = json::array();
    for (const auto& verdict : entry.verdicts) je["verdicts"].push_back(verdict_json(verdict));
    j["entries"].push_back(std::move(je));
  }
  return j.dump(2) + "\n";
}

}  // namespace amrf
