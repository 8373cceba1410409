#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hide/types.hpp"

namespace hide {

/// Magic bytes opening every attention bundle file.
inline constexpr char kBundleMagic[4] = {'H', 'A', 'B', '1'};

// Attention bundle (.hab) layout:
//   [0,4)      magic "HAB1"
//   [4,8)      uint32 LE header length N
//   [8,8+N)    UTF-8 JSON header
//   [8+N,...)  one plane per key token then per noise token, each
//              patch_rows*patch_cols float32 LE values in row-major order
// Nothing may follow the last plane.

std::vector<std::uint8_t> encode_bundle(const AttentionBundle& bundle);
AttentionBundle decode_bundle(std::span<const std::uint8_t> bytes);

/// Validates and writes `bundle`. Throws ValidationError before touching the
/// file if an invariant is violated, IoError if the write fails.
void write_bundle(const AttentionBundle& bundle, const std::filesystem::path& path);

/// Throws IoError (unreadable), FormatError (bad magic or header),
/// CorruptionError (plane data disagrees with the header) or ValidationError
/// (non-finite or otherwise invalid planes).
AttentionBundle read_bundle(const std::filesystem::path& path);

/// Header JSON exactly as it is stored in the file.
std::string bundle_header_json(const AttentionBundle& bundle);

std::string boxes_to_json(const BoxSet& boxes);
BoxSet boxes_from_json(const std::string& text);
void write_boxes(const BoxSet& boxes, const std::filesystem::path& path);
BoxSet read_boxes(const std::filesystem::path& path);

std::string provenance_to_json(std::span<const CellProvenance> cells);
std::vector<CellProvenance> provenance_from_json(const std::string& text);
void write_provenance(std::span<const CellProvenance> cells, const std::filesystem::path& path);

// Small file helpers shared by the tools.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(std::span<const std::uint8_t> bytes, const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::string& text, const std::filesystem::path& path);

}  // namespace hide
