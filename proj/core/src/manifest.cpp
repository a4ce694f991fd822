#include "amrf/manifest.hpp"

#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "amrf/fsutil.hpp"

namespace amrf {
namespace {

using json = nlohmann::ordered_json;

bool known_factory(const std::string& f) { return f == "F1" || f == "F2"; }
bool known_split(const std::string& s) { return s == "train" || s == "val" || s == "test"; }

std::filesystem::path relativize(const std::filesystem::path& p, const std::filesystem::path& base) {
  std::error_code ec;
  const auto rel = std::filesystem::relative(p, base, ec);
  if (ec || rel.empty() || rel.native().starts_with("..")) return p;
  return rel;
}

}  // namespace

void validate(const DatasetManifest& manifest) {
  if (manifest.records.empty()) {
    raise(ErrorCode::EmptyManifest, "manifest '" + manifest.name + "' has no records");
  }
  std::set<std::string> ids;
  for (const auto& rec : manifest.records) {
    if (!ids.insert(rec.id).second) {
      raise(ErrorCode::ConfigError, "duplicate sample id '" + rec.id + "'");
    }
    if (!known_factory(rec.factory)) {
      raise(ErrorCode::ConfigError, "unknown factory '" + rec.factory + "' for " + rec.id);
    }
    if (!known_split(rec.split)) {
      raise(ErrorCode::ConfigError, "unknown split '" + rec.split + "' for " + rec.id);
    }
    if ((rec.split == "train" || rec.split == "val") && !rec.mask_path) {
      raise(ErrorCode::ConfigError, "train/val record '" + rec.id + "' has no mask");
    }
  }
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");

  DatasetManifest manifest;
  manifest.name = path.stem().string();

  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      raise(ErrorCode::ConfigError,
            path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    SampleRecord rec;
    try {
      rec.id = j.at("id").get<std::string>();
      rec.image_path = std::filesystem::path(j.at("image").get<std::string>());
      if (!j.at("mask").is_null()) {
        rec.mask_path = std::filesystem::path(j.at("mask").get<std::string>());
      }
      rec.factory = j.at("factory").get<std::string>();
      rec.split = j.at("split").get<std::string>();
    } catch (const json::exception& e) {
      raise(ErrorCode::ConfigError,
            path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (rec.image_path.is_relative()) rec.image_path = base / rec.image_path;
    if (rec.mask_path && rec.mask_path->is_relative()) rec.mask_path = base / *rec.mask_path;
    manifest.records.push_back(std::move(rec));
  }

  validate(manifest);
  for (const auto& rec : manifest.records) {
    if (!std::filesystem::exists(rec.image_path)) {
      raise(ErrorCode::FileNotFound, "image for '" + rec.id + "': " + rec.image_path.string());
    }
    if (rec.mask_path && !std::filesystem::exists(*rec.mask_path)) {
      raise(ErrorCode::FileNotFound, "mask for '" + rec.id + "': " + rec.mask_path->string());
    }
  }
  return manifest;
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  validate(manifest);
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::string out;
  for (const auto& rec : manifest.records) {
    json j;
    j["id"] = rec.id;
    j["image"] = relativize(rec.image_path, base).generic_string();
    if (rec.mask_path) {
      j["mask"] = relativize(*rec.mask_path, base).generic_string();
    } else {
      j["mask"] = nullptr;
    }
    j["factory"] = rec.factory;
    j["split"] = rec.split;
    out += j.dump();
    out += '\n';
  }
  write_file_atomic(path, out);
}

}  // namespace amrf
