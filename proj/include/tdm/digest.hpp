#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace tdm {

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

std::string sha256_file(const std::filesystem::path& path);

/// 64-bit FNV-1a. Stable across platforms, used to derive per-paper RNG streams.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace tdm
