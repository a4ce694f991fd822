#include "amrf/fsutil.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "amrf/error.hpp"

namespace amrf {
namespace {

std::atomic<std::uint64_t> temp_counter{0};

std::filesystem::path temp_sibling(const std::filesystem::path& path) {
  const auto n = temp_counter.fetch_add(1);
  auto name = path.filename().string() + ".tmp" + std::to_string(n);
  return path.parent_path() / name;
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const void* data, std::size_t size) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  const auto tmp = temp_sibling(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::IoError, "cannot open " + tmp.string());
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) raise(ErrorCode::IoError, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    raise(ErrorCode::IoError, "rename to " + path.string() + " failed: " + ec.message());
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view text) {
  write_file_atomic(path, text.data(), text.size());
}

std::string read_text_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) raise(ErrorCode::FileNotFound, path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace amrf
