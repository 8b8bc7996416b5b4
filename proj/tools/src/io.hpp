#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

namespace warp::cli {

/// Writes through a sibling temp file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fill);

std::string sha256_file(const std::filesystem::path& path);

/// Runs body(0..count-1) on up to `jobs` threads. Rethrows the exception of
/// the lowest failing index after all workers stop.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body);

/// Link ids become directory names; anything outside [A-Za-z0-9._-] turns into '_'.
std::string safe_name(std::string_view link_id);

}  // namespace warp::cli
