#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

namespace rankarena::util {

/// FNV-1a 64-bit over raw bytes. Stable across platforms, unlike std::hash.
std::uint64_t fnv1a64(const std::string& data);

/// Uniform draw in [0, n) by rejection sampling, so results do not depend on
/// the standard library's distribution implementation.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n);

/// Fixed-decimal formatting ("%.*f", C locale), used for all emitted numbers.
std::string fmt_fixed(double value, int decimals);

/// Run fn(0..n-1) on up to `workers` threads. Rethrows the first exception.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn);

/// Write via a temp file in the same directory, then rename into place.
void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content);

std::string read_file(const std::filesystem::path& path);

} // namespace rankarena::util
