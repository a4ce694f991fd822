// amrf - synthetic data generation, segmentation, angle-adaptive cropping,
// dual-metric evaluation and the evolving-augmentation-pool loop behind one
// binary. Subcommands: gen-synth, segment, crop, evaluate, evolve.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "amrf/eap.hpp"
#include "amrf/fsutil.hpp"
#include "amrf/parallel.hpp"
#include "amrf/png_io.hpp"
#include "amrf/synth.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using json = nlohmann::ordered_json;

struct GenSynthArgs {
  amrf::SynthSpec spec;
  std::string out;
};

struct AdapterArgs {
  std::string adapter = "baseline";
  std::string config_path;
  std::string mask_dir;
  int perturb_px = 0;
  std::uint64_t oracle_seed = 0;
};

std::unique_ptr<amrf::SegmenterAdapter> make_adapter(const AdapterArgs& args,
                                                     const std::filesystem::path& manifest_path) {
  if (args.adapter == "baseline") {
    amrf::SegmenterConfig config;
    if (!args.config_path.empty()) {
      config = amrf::segmenter_config_from_json(amrf::read_text_file(args.config_path));
    }
    return std::make_unique<amrf::BaselineSegmenter>(config);
  }
  if (args.adapter == "oracle") {
    std::filesystem::path mask_dir = args.mask_dir;
    if (mask_dir.empty()) mask_dir = manifest_path.parent_path() / "masks";
    return std::make_unique<amrf::OracleSegmenter>(mask_dir, args.perturb_px, args.oracle_seed);
  }
  throw CLI::ValidationError("--adapter", "unknown adapter '" + args.adapter + "'");
}

amrf::StubClassifier make_classifier(const std::string& config_path) {
  if (config_path.empty()) return amrf::StubClassifier{};
  return amrf::StubClassifier(
      amrf::classifier_config_from_json(amrf::read_text_file(config_path)));
}

int run_gen_synth(const GenSynthArgs& args, int jobs) {
  const auto manifest = amrf::generate_synthetic(args.spec, args.out, jobs);
  std::printf("wrote %zu samples under %s (manifest.jsonl)\n", manifest.records.size(),
              args.out.c_str());
  return 0;
}

int run_segment(const AdapterArgs& adapter_args, const std::string& manifest_path,
                const std::string& out_dir, int jobs) {
  const auto manifest = amrf::load_manifest(manifest_path);
  const auto adapter = make_adapter(adapter_args, manifest_path);
  std::filesystem::create_directories(out_dir);
  amrf::parallel_for(manifest.records.size(), jobs, [&](std::size_t i) {
    const auto& rec = manifest.records[i];
    try {
      const auto image = amrf::load_image(rec.image_path);
      const auto mask = adapter->segment(image, rec.id);
      amrf::save_mask(mask, std::filesystem::path(out_dir) / (rec.id + ".png"));
    } catch (const amrf::Error& e) {
      throw amrf::Error(e.code(), "sample '" + rec.id + "': " + e.what());
    }
  });
  std::printf("wrote %zu masks to %s\n", manifest.records.size(), out_dir.c_str());
  return 0;
}

int run_crop(const std::string& image_path, const std::string& mask_path, int margin,
             const std::string& out_dir) {
  const auto image = amrf::load_image(image_path);
  const auto mask = amrf::load_mask(mask_path);
  const auto result = amrf::angle_adaptive_crop(image, mask, margin);

  const std::filesystem::path out(out_dir);
  amrf::save_image(result.crop, out / "crop.png");
  amrf::save_mask(result.crop_mask, out / "crop_mask.png");

  json report;
  report["alpha_deg"] = result.applied_angle_deg;
  report["bbox"] = {result.crop.width, result.crop.height};
  report["margin"] = result.margin;
  amrf::write_file_atomic(out / "report.json", report.dump(2) + "\n");
  std::printf("alpha %.3f deg, crop %dx%d -> %s\n", result.applied_angle_deg, result.crop.width,
              result.crop.height, out_dir.c_str());
  return 0;
}

int run_evaluate(const AdapterArgs& adapter_args, const std::string& classifier_config,
                 const std::string& manifest_path, const std::string& pool_path,
                 const std::string& out_path, const amrf::EvalOptions& options, bool cls_all) {
  const auto manifest = amrf::load_manifest(manifest_path);
  const auto adapter = make_adapter(adapter_args, manifest_path);
  const auto classifier = make_classifier(classifier_config);

  int pool_version = 0;
  if (!pool_path.empty()) pool_version = amrf::load_pool(pool_path).version;

  amrf::EvalOptions eval = options;
  eval.cls_over_all = cls_all;
  const auto report = amrf::evaluate_dataset(*adapter, classifier, manifest, pool_version, eval);
  amrf::write_file_atomic(out_path, amrf::report_to_json(report));
  std::printf("%s\n", amrf::report_table_row(report).c_str());
  return 0;
}

int run_evolve(const std::string& config_path, const std::string& out_path, bool summary,
               int jobs) {
  const std::filesystem::path config_file(config_path);
  auto settings = amrf::settings_from_json(amrf::read_text_file(config_file),
                                           config_file.parent_path());
  settings.eval.jobs = jobs;
  const auto history = amrf::run_amrf(settings);
  amrf::write_file_atomic(out_path, amrf::history_to_json(history));

  for (std::size_t i = 0; i < history.entries.size(); ++i) {
    const auto& entry = history.entries[i];
    std::printf("iteration %zu: pool v%d (%zu methods), crop %.2f, cls %.2f\n", i,
                entry.pool.version, entry.pool.methods.size(), amrf::pooled_crop_accuracy(entry),
                amrf::mean_cls_accuracy(entry));
  }
  if (summary) {
    std::printf("\nfail/total per pool version\n");
    for (const auto& entry : history.entries) {
      for (const auto& report : entry.reports) {
        std::printf("  v%-3d %s\n", entry.pool.version, amrf::report_table_row(report).c_str());
      }
    }
  }
  if (history.non_improving) std::printf("NON-IMPROVING run\n");
  std::printf("history -> %s\n", out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"augmentation-based model re-adaptation toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  int jobs = 0;  // 0: machine parallelism
  app.add_option("--jobs", jobs, "worker threads (default: machine parallelism)");

  // gen-synth
  GenSynthArgs gen;
  auto* cmd_gen = app.add_subcommand("gen-synth", "generate a synthetic labeled dataset");
  cmd_gen->add_option("--count", gen.spec.count, "number of samples")->required();
  cmd_gen->add_option("--size", gen.spec.width, "square canvas size (default 512)");
  cmd_gen->add_option("--angle-min", gen.spec.angle_min, "min content angle, degrees");
  cmd_gen->add_option("--angle-max", gen.spec.angle_max, "max content angle, degrees");
  cmd_gen->add_option("--zoom-min", gen.spec.zoom_min, "min content zoom");
  cmd_gen->add_option("--zoom-max", gen.spec.zoom_max, "max content zoom");
  cmd_gen->add_option("--contrast-min", gen.spec.contrast_min, "min rendered contrast");
  cmd_gen->add_option("--contrast-max", gen.spec.contrast_max, "max rendered contrast");
  cmd_gen->add_option("--blur-min", gen.spec.blur_min, "min blur kernel (odd)");
  cmd_gen->add_option("--blur-max", gen.spec.blur_max, "max blur kernel (odd)");
  cmd_gen->add_option("--style-mix", gen.spec.style_mix, "fraction of F1 samples");
  cmd_gen->add_option("--seed", gen.spec.seed, "64-bit seed");
  cmd_gen->add_option("--name", gen.spec.name, "dataset name / id prefix");
  cmd_gen->add_option("--split", gen.spec.split, "split label (train|val|test)");
  cmd_gen->add_option("--out", gen.out, "output directory")->required();

  // segment
  AdapterArgs seg_adapter;
  std::string seg_manifest, seg_out;
  auto* cmd_seg = app.add_subcommand("segment", "segment every record of a manifest");
  cmd_seg->add_option("--adapter", seg_adapter.adapter, "baseline|oracle");
  cmd_seg->add_option("--config", seg_adapter.config_path, "segmenter config JSON");
  cmd_seg->add_option("--mask-dir", seg_adapter.mask_dir, "stored-mask directory (oracle)");
  cmd_seg->add_option("--perturb", seg_adapter.perturb_px, "oracle boundary perturbation, px");
  cmd_seg->add_option("--oracle-seed", seg_adapter.oracle_seed, "oracle perturbation seed");
  cmd_seg->add_option("--in", seg_manifest, "dataset manifest (JSON Lines)")->required();
  cmd_seg->add_option("--out", seg_out, "output directory")->required();

  // crop
  std::string crop_image, crop_mask, crop_out;
  int crop_margin = 8;
  auto* cmd_crop = app.add_subcommand("crop", "angle-adaptive crop of one image/mask pair");
  cmd_crop->add_option("--image", crop_image, "input image PNG")->required();
  cmd_crop->add_option("--mask", crop_mask, "input mask PNG")->required();
  cmd_crop->add_option("--margin", crop_margin, "crop margin in pixels");
  cmd_crop->add_option("--out", crop_out, "output directory")->required();

  // evaluate
  AdapterArgs eval_adapter;
  std::string eval_classifier = "stub";
  std::string eval_classifier_config, eval_manifest, eval_pool;
  std::string eval_out = "report.json";
  amrf::EvalOptions eval_options;
  bool eval_cls_all = false;
  auto* cmd_eval = app.add_subcommand("evaluate", "dual-metric evaluation of a manifest");
  cmd_eval->add_option("--adapter", eval_adapter.adapter, "baseline|oracle");
  cmd_eval->add_option("--config", eval_adapter.config_path, "segmenter config JSON");
  cmd_eval->add_option("--mask-dir", eval_adapter.mask_dir, "stored-mask directory (oracle)");
  cmd_eval->add_option("--perturb", eval_adapter.perturb_px, "oracle boundary perturbation, px");
  cmd_eval->add_option("--classifier", eval_classifier, "classifier kind (stub)");
  cmd_eval->add_option("--classifier-config", eval_classifier_config, "classifier config JSON");
  cmd_eval->add_option("--in", eval_manifest, "dataset manifest")->required();
  cmd_eval->add_option("--pool", eval_pool, "pool JSON (records its version in the report)");
  cmd_eval->add_option("--out", eval_out, "report path");
  cmd_eval->add_option("--margin", eval_options.margin, "crop margin in pixels");
  cmd_eval->add_option("--iou-fail", eval_options.iou_fail_threshold,
                       "IoU failure threshold for ground-truth records (<0 disables)");
  cmd_eval->add_flag("--cls-all", eval_cls_all,
                     "classification accuracy over all samples, not passing crops only");

  // evolve
  std::string evolve_config, evolve_out = "history.json";
  bool evolve_summary = false;
  auto* cmd_evolve = app.add_subcommand("evolve", "run the pool-evolution loop");
  cmd_evolve->add_option("--config", evolve_config, "run config JSON")->required();
  cmd_evolve->add_option("--out", evolve_out, "history output path");
  cmd_evolve->add_flag("--summary", evolve_summary, "print a fail/total matrix per pool version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 1;
  }

  try {
    if (cmd_gen->parsed()) {
      gen.spec.height = gen.spec.width;
      return run_gen_synth(gen, jobs);
    }
    if (cmd_seg->parsed()) return run_segment(seg_adapter, seg_manifest, seg_out, jobs);
    if (cmd_crop->parsed()) return run_crop(crop_image, crop_mask, crop_margin, crop_out);
    if (cmd_eval->parsed()) {
      eval_options.jobs = jobs;
      if (eval_classifier != "stub") {
        std::fprintf(stderr, "unknown classifier '%s'\n", eval_classifier.c_str());
        return 1;
      }
      return run_evaluate(eval_adapter, eval_classifier_config, eval_manifest, eval_pool,
                          eval_out, eval_options, eval_cls_all);
    }
    if (cmd_evolve->parsed()) return run_evolve(evolve_config, evolve_out, evolve_summary, jobs);
  } catch (const amrf::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
