#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "amrf/error.hpp"

namespace amrf {

struct SampleRecord {
  std::string id;
  std::filesystem::path image_path;
  std::optional<std::filesystem::path> mask_path;
  std::string factory;  // "F1" | "F2"
  std::string split;    // "train" | "val" | "test"
};

struct DatasetManifest {
  std::string name;
  std::vector<SampleRecord> records;
};

/// Load a JSON Lines manifest (fields id, image, mask, factory, split).
/// Relative paths resolve against the manifest directory; every referenced
/// file must exist. Ids must be unique and train/val records must carry
/// masks.
DatasetManifest load_manifest(const std::filesystem::path& path);

/// Write JSON Lines; paths inside the manifest directory are stored
/// relative to it.
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

void validate(const DatasetManifest& manifest);

}  // namespace amrf
