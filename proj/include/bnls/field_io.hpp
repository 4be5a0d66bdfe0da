#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "bnls/grid.hpp"

namespace bnls {

/// Binary field layout, all little-endian:
///   "BNLS" | u32 version = 1 | u32 dim | u32 points_per_axis | f64 box_length |
///   points^dim f64 samples (row-major).
inline constexpr std::uint32_t field_format_version = 1;
inline constexpr std::size_t field_header_bytes = 4 + 4 + 4 + 4 + 8;

std::vector<std::uint8_t> encode_field(const Field& u);
/// Throws FormatError naming the byte offset where decoding failed.
Field decode_field(std::span<const std::uint8_t> bytes);

void write_field(const std::filesystem::path& path, const Field& u);
Field read_field(const std::filesystem::path& path);

}  // namespace bnls
