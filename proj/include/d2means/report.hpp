#pragma once

#include <cstdint>
#include <iomanip>
#include <span>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "d2means/measure.hpp"

namespace d2means {

// Reports preserve insertion order so serialized output is stable.
using Json = nlohmann::ordered_json;

inline constexpr int report_schema_version = 1;

// FNV-1a over raw bytes, rendered as 16 lowercase hex digits.
inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

inline std::string fnv1a_hex(std::string_view bytes) {
  std::ostringstream out;
  out << std::hex << std::setfill('0') << std::setw(16) << fnv1a(bytes);
  return out.str();
}

// Digest of a dataset's exact coordinate bytes; stable across runs since the
// in-memory representation is fixed by the loader.
inline std::string dataset_digest(const Dataset& data) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  auto mix_bytes = [&hash](const void* ptr, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(ptr);
    for (std::size_t i = 0; i < len; ++i) {
      hash ^= bytes[i];
      hash *= 0x100000001b3ull;
    }
  };
  const std::uint64_t n = data.n();
  const std::uint64_t d = data.dim();
  mix_bytes(&n, sizeof n);
  mix_bytes(&d, sizeof d);
  for (const Point& p : data.points) mix_bytes(p.data(), p.size() * sizeof(double));
  std::ostringstream out;
  out << std::hex << std::setfill('0') << std::setw(16) << hash;
  return out.str();
}

inline Json centers_to_json(const CenterSet& centers) {
  Json out = Json::array();
  for (const Point& c : centers) out.push_back(c);
  return out;
}

}  // namespace d2means
