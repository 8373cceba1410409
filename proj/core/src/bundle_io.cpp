#include "hide/bundle_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <nlohmann/json.hpp>

#include "hide/error.hpp"

namespace hide {
namespace {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

static_assert(std::numeric_limits<float>::is_iec559, "float32 planes require IEEE-754 floats");

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[at + i]) << (8 * i);
  return v;
}

ordered_json tokens_json(const std::vector<TokenMap>& maps) {
  auto arr = ordered_json::array();
  for (const auto& tm : maps) {
    arr.push_back(ordered_json{{"text", tm.token.text}, {"position", tm.token.position}});
  }
  return arr;
}

std::vector<TokenRef> parse_tokens(const json& header, const char* key) {
  if (!header.contains(key) || !header[key].is_array()) {
    throw FormatError(std::string("bundle header is missing the '") + key + "' array");
  }
  std::vector<TokenRef> out;
  for (const auto& t : header[key]) {
    if (!t.is_object() || !t.contains("text") || !t["text"].is_string() || !t.contains("position") ||
        !t["position"].is_number_integer()) {
      throw FormatError(std::string("malformed token entry in '") + key + "'");
    }
    out.push_back({t["text"].get<std::string>(), t["position"].get<std::int64_t>()});
  }
  return out;
}

int header_int(const json& header, const char* key) {
  if (!header.contains(key) || !header[key].is_number_integer()) {
    throw FormatError(std::string("bundle header field '") + key + "' missing or not an integer");
  }
  const auto v = header[key].get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw FormatError(std::string("bundle header field '") + key + "' out of range");
  }
  return static_cast<int>(v);
}

int box_int(const json& b, const char* key) {
  if (!b.contains(key) || !b[key].is_number_integer()) {
    throw FormatError(std::string("box field '") + key + "' missing or not an integer");
  }
  return b[key].get<int>();
}

}  // namespace

std::string bundle_header_json(const AttentionBundle& bundle) {
  ordered_json h;
  h["image_width"] = bundle.geometry.image_width;
  h["image_height"] = bundle.geometry.image_height;
  h["patch_rows"] = bundle.geometry.patch_rows;
  h["patch_cols"] = bundle.geometry.patch_cols;
  h["layer"] = bundle.layer;
  h["key_tokens"] = tokens_json(bundle.key_maps);
  h["noise_tokens"] = tokens_json(bundle.noise_maps);
  if (bundle.purified) h["purified"] = true;
  return h.dump();
}

std::vector<std::uint8_t> encode_bundle(const AttentionBundle& bundle) {
  validate(bundle);
  const std::string header = bundle_header_json(bundle);
  const std::size_t planes = bundle.key_maps.size() + bundle.noise_maps.size();
  std::vector<std::uint8_t> out;
  out.reserve(8 + header.size() + planes * bundle.geometry.grid().size() * 4);
  out.insert(out.end(), std::begin(kBundleMagic), std::end(kBundleMagic));
  put_u32(out, static_cast<std::uint32_t>(header.size()));
  out.insert(out.end(), header.begin(), header.end());
  auto put_plane = [&](const AttentionMap& m) {
    for (float v : m.values()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  };
  for (const auto& tm : bundle.key_maps) put_plane(tm.map);
  for (const auto& tm : bundle.noise_maps) put_plane(tm.map);
  return out;
}

AttentionBundle decode_bundle(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kBundleMagic, 4) != 0) {
    throw FormatError("not an attention bundle: bad magic bytes");
  }
  if (bytes.size() < 8) throw CorruptionError("bundle truncated inside the header length field");
  const std::uint32_t header_len = get_u32(bytes, 4);
  if (bytes.size() - 8 < header_len) {
    throw CorruptionError("bundle truncated: header declares " + std::to_string(header_len) +
                          " bytes but only " + std::to_string(bytes.size() - 8) + " follow");
  }
  json header;
  try {
    header = json::parse(bytes.begin() + 8, bytes.begin() + 8 + header_len);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("bundle header is not valid JSON: ") + e.what());
  }
  if (!header.is_object()) throw FormatError("bundle header is not a JSON object");

  AttentionBundle bundle;
  bundle.geometry.image_width = header_int(header, "image_width");
  bundle.geometry.image_height = header_int(header, "image_height");
  bundle.geometry.patch_rows = header_int(header, "patch_rows");
  bundle.geometry.patch_cols = header_int(header, "patch_cols");
  bundle.layer = header_int(header, "layer");
  if (header.contains("purified")) {
    if (!header["purified"].is_boolean()) throw FormatError("bundle header 'purified' must be a boolean");
    bundle.purified = header["purified"].get<bool>();
  }
  const auto key_tokens = parse_tokens(header, "key_tokens");
  const auto noise_tokens = parse_tokens(header, "noise_tokens");
  validate(bundle.geometry);

  const std::size_t plane_bytes = bundle.geometry.grid().size() * 4;
  const std::size_t n_planes = key_tokens.size() + noise_tokens.size();
  std::size_t at = 8 + header_len;
  const std::size_t available = bytes.size() - at;
  if (available != n_planes * plane_bytes) {
    const std::size_t complete = available / plane_bytes;
    if (available < n_planes * plane_bytes) {
      throw CorruptionError("bundle header declares " + std::to_string(n_planes) + " planes of " +
                            std::to_string(plane_bytes) + " bytes but plane " +
                            std::to_string(complete) + " is missing or truncated (" +
                            std::to_string(available) + " payload bytes)");
    }
    throw CorruptionError("bundle has " + std::to_string(available - n_planes * plane_bytes) +
                          " trailing bytes after plane " + std::to_string(n_planes - 1));
  }

  auto read_plane = [&] {
    AttentionMap m(bundle.geometry.grid());
    for (float& v : m.values()) {
      v = std::bit_cast<float>(get_u32(bytes, at));
      at += 4;
    }
    return m;
  };
  for (const auto& t : key_tokens) bundle.key_maps.push_back({t, read_plane()});
  for (const auto& t : noise_tokens) bundle.noise_maps.push_back({t, read_plane()});
  validate(bundle);
  return bundle;
}

void write_bundle(const AttentionBundle& bundle, const std::filesystem::path& path) {
  write_file_bytes(encode_bundle(bundle), path);
}

AttentionBundle read_bundle(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return decode_bundle(bytes);
}

std::string boxes_to_json(const BoxSet& set) {
  ordered_json j;
  j["image_width"] = set.image_width;
  j["image_height"] = set.image_height;
  j["boxes"] = ordered_json::array();
  for (const auto& b : set.boxes) {
    ordered_json o{{"x1", b.x1}, {"y1", b.y1}, {"x2", b.x2}, {"y2", b.y2},
                   {"token", b.tokens.empty() ? std::string() : b.tokens.front()}};
    if (b.tokens.size() > 1) o["tokens"] = b.tokens;
    j["boxes"].push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

BoxSet boxes_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("boxes file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("boxes") || !j["boxes"].is_array()) {
    throw FormatError("boxes file must be an object with a 'boxes' array");
  }
  BoxSet set;
  set.image_width = box_int(j, "image_width");
  set.image_height = box_int(j, "image_height");
  for (const auto& b : j["boxes"]) {
    if (!b.is_object()) throw FormatError("box entry is not an object");
    BoundingBox box(box_int(b, "x1"), box_int(b, "y1"), box_int(b, "x2"), box_int(b, "y2"));
    if (b.contains("tokens")) {
      if (!b["tokens"].is_array()) throw FormatError("box 'tokens' must be an array of strings");
      for (const auto& t : b["tokens"]) {
        if (!t.is_string()) throw FormatError("box 'tokens' must be an array of strings");
        box.tokens.push_back(t.get<std::string>());
      }
    } else if (b.contains("token")) {
      if (!b["token"].is_string()) throw FormatError("box 'token' must be a string");
      auto t = b["token"].get<std::string>();
      if (!t.empty()) box.tokens.push_back(std::move(t));
    }
    set.boxes.push_back(std::move(box));
  }
  validate(set);
  return set;
}

void write_boxes(const BoxSet& boxes, const std::filesystem::path& path) {
  validate(boxes);
  write_text_file(boxes_to_json(boxes), path);
}

BoxSet read_boxes(const std::filesystem::path& path) { return boxes_from_json(read_text_file(path)); }

std::string provenance_to_json(std::span<const CellProvenance> cells) {
  ordered_json j;
  j["cells"] = ordered_json::array();
  for (const auto& c : cells) {
    j["cells"].push_back(ordered_json{{"src", {c.src_x1, c.src_y1, c.src_x2, c.src_y2}},
                                      {"dst", {c.dst_x, c.dst_y}}});
  }
  return j.dump() + "\n";
}

std::vector<CellProvenance> provenance_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("provenance file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("cells") || !j["cells"].is_array()) {
    throw FormatError("provenance file must be an object with a 'cells' array");
  }
  std::vector<CellProvenance> out;
  for (const auto& c : j["cells"]) {
    const auto& s = c.at("src");
    const auto& d = c.at("dst");
    if (!s.is_array() || s.size() != 4 || !d.is_array() || d.size() != 2) {
      throw FormatError("provenance cell needs src[4] and dst[2]");
    }
    out.push_back({s[0].get<int>(), s[1].get<int>(), s[2].get<int>(), s[3].get<int>(),
                   d[0].get<int>(), d[1].get<int>()});
  }
  return out;
}

void write_provenance(std::span<const CellProvenance> cells, const std::filesystem::path& path) {
  write_text_file(provenance_to_json(cells), path);
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading " + path.string());
  return bytes;
}

void write_file_bytes(std::span<const std::uint8_t> bytes, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return {bytes.begin(), bytes.end()};
}

void write_text_file(const std::string& text, const std::filesystem::path& path) {
  write_file_bytes({reinterpret_cast<const std::uint8_t*>(text.data()), text.size()}, path);
}

}  // namespace hide
