#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace amrf {

/// Write via a temp file in the target directory followed by rename, so
/// readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const void* data, std::size_t size);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace amrf
