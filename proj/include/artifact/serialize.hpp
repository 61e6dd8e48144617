#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "artifact/complex.hpp"
#include "artifact/matrix.hpp"

namespace artifact {

// Binary formats, all integers little-endian.
//   matrix:  "AFFM" u32 version, u32 p, u32 e, u32 rows, u32 cols, u64 count, then per
//            nonzero entry in column-major order u32 row, u32 col, e x u32 digits over F_p.
//   complex: "AFNC" u32 version, u32 N, u32 p, u32 e, u32 length, length x u32 dims,
//            u8 has_keys, then per degree k: u32 k, u64 size, matrix d(k), and the keys
//            of degree k as u64 when present.
inline constexpr std::uint32_t kFormatVersion = 1;

std::string serialize(const FFMatrix& m);
FFMatrix deserialize_matrix(std::string_view bytes);
std::string serialize(const NComplex& C);
NComplex deserialize_complex(std::string_view bytes);

std::uint32_t crc32(std::string_view bytes);

// On-disk store of byte strings. An entry file holds "AFCA", u32 cache version,
// u32 crc32 of the payload, u64 key size, key, u64 payload size, payload. Entries
// with another version, another key or a bad checksum read as misses; a bad
// checksum also warns on stderr. Writes go through a temporary file and a rename,
// so concurrent writers of one key leave one complete entry (last write wins).
class Cache {
 public:
  static constexpr std::uint32_t kVersion = 1;
  explicit Cache(std::filesystem::path dir, std::uint32_t version = kVersion);
  // Directory from ARTIFACT_CACHE_DIR, if set.
  static std::optional<Cache> from_env();

  void put(const std::string& key, const std::string& bytes) const;
  std::optional<std::string> get(const std::string& key) const;
  // Cached value, or compute() stored under key.
  std::string get_or_compute(const std::string& key, const std::function<std::string()>& compute) const;
  std::filesystem::path path_for(const std::string& key) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::uint32_t version_;
};

}  // namespace artifact
