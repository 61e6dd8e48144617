#include "artifact/serialize.hpp"

#include <boost/crc.hpp>

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace artifact {

namespace {

void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }
void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::string_view b) : b_(b) {}
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(b_[pos_++]);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }
  std::string_view bytes(std::size_t n) {
    need(n);
    auto s = b_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  void magic(const char* m) {
    if (bytes(4) != std::string_view(m, 4)) throw std::runtime_error(std::string("bad magic, expected ") + m);
  }
  bool done() const { return pos_ == b_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > b_.size()) throw std::runtime_error("truncated data");
  }
  std::string_view b_;
  std::size_t pos_ = 0;
};

void version_check(Reader& r) {
  const std::uint32_t v = r.u32();
  if (v != kFormatVersion) throw std::runtime_error("unsupported format version " + std::to_string(v));
}

}  // namespace

std::string serialize(const FFMatrix& m) {
  const Field& F = *m.field();
  std::string out = "AFFM";
  put_u32(out, kFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(F.p()));
  put_u32(out, static_cast<std::uint32_t>(F.e()));
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  put_u64(out, m.nnz());
  m.for_each([&](int r, int c, fe v) {
    put_u32(out, static_cast<std::uint32_t>(r));
    put_u32(out, static_cast<std::uint32_t>(c));
    for (int digit : F.coeffs(v)) put_u32(out, static_cast<std::uint32_t>(digit));
  });
  return out;
}

FFMatrix deserialize_matrix(std::string_view bytes) {
  Reader r(bytes);
  r.magic("AFFM");
  version_check(r);
  const int p = static_cast<int>(r.u32());
  const int e = static_cast<int>(r.u32());
  const int rows = static_cast<int>(r.u32());
  const int cols = static_cast<int>(r.u32());
  const std::uint64_t count = r.u64();
  FieldPtr F = Field::get(p, e);
  std::vector<Triplet> t;
  t.reserve(count);
  std::vector<int> digits(e);
  for (std::uint64_t i = 0; i < count; ++i) {
    const int row = static_cast<int>(r.u32());
    const int col = static_cast<int>(r.u32());
    for (int j = 0; j < e; ++j) digits[j] = static_cast<int>(r.u32());
    t.push_back({row, col, F->from_coeffs(digits)});
  }
  if (!r.done()) throw std::runtime_error("trailing bytes after matrix");
  return FFMatrix::from_triplets(F, rows, cols, std::move(t));
}

std::string serialize(const NComplex& C) {
  const Field& F = *C.field();
  std::string out = "AFNC";
  put_u32(out, kFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(C.N()));
  put_u32(out, static_cast<std::uint32_t>(F.p()));
  put_u32(out, static_cast<std::uint32_t>(F.e()));
  put_u32(out, static_cast<std::uint32_t>(C.length()));
  for (int k = 0; k < C.length(); ++k) put_u32(out, static_cast<std::uint32_t>(C.dim(k)));
  put_u8(out, C.has_keys() ? 1 : 0);
  for (int k = 0; k < C.length(); ++k) {
    put_u32(out, static_cast<std::uint32_t>(k));
    const std::string m = serialize(C.d(k));
    put_u64(out, m.size());
    out += m;
    if (C.has_keys())
      for (BlockKey key : C.keys(k)) put_u64(out, key);
  }
  return out;
}

NComplex deserialize_complex(std::string_view bytes) {
  Reader r(bytes);
  r.magic("AFNC");
  version_check(r);
  const int N = static_cast<int>(r.u32());
  const int p = static_cast<int>(r.u32());
  const int e = static_cast<int>(r.u32());
  const int len = static_cast<int>(r.u32());
  std::vector<int> dims(len);
  for (auto& x : dims) x = static_cast<int>(r.u32());
  const bool keyed = r.u8() != 0;
  std::vector<FFMatrix> d;
  std::vector<std::vector<BlockKey>> keys;
  for (int k = 0; k < len; ++k) {
    if (static_cast<int>(r.u32()) != k) throw std::runtime_error("complex degree index out of order");
    const std::uint64_t sz = r.u64();
    d.push_back(deserialize_matrix(r.bytes(sz)));
    if (keyed) {
      keys.emplace_back(dims[k]);
      for (auto& key : keys.back()) key = r.u64();
    }
  }
  if (!r.done()) throw std::runtime_error("trailing bytes after complex");
  NComplex C(Field::get(p, e), N, std::move(dims), std::move(d));
  if (keyed) C.set_keys(std::move(keys));
  return C;
}

std::uint32_t crc32(std::string_view bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

Cache::Cache(std::filesystem::path dir, std::uint32_t version) : dir_(std::move(dir)), version_(version) {
  std::filesystem::create_directories(dir_);
}

std::optional<Cache> Cache::from_env() {
  const char* dir = std::getenv("ARTIFACT_CACHE_DIR");
  if (!dir || !*dir) return std::nullopt;
  return Cache(dir);
}

std::filesystem::path Cache::path_for(const std::string& key) const {
  char name[32];
  std::snprintf(name, sizeof name, "%08x.afc", crc32(key));
  return dir_ / name;
}

void Cache::put(const std::string& key, const std::string& bytes) const {
  std::string out = "AFCA";
  put_u32(out, version_);
  put_u32(out, crc32(bytes));
  put_u64(out, key.size());
  out += key;
  put_u64(out, bytes.size());
  out += bytes;
  static std::atomic<unsigned> counter{0};
  const auto target = path_for(key);
  auto tmp = target;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + "_" +
         std::to_string(counter++);
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("cache: cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::optional<std::string> Cache::get(const std::string& key) const {
  std::ifstream f(path_for(key), std::ios::binary);
  if (!f) return std::nullopt;
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string data = ss.str();
  try {
    Reader r(data);
    r.magic("AFCA");
    if (r.u32() != version_) return std::nullopt;
    const std::uint32_t sum = r.u32();
    const std::uint64_t klen = r.u64();
    if (r.bytes(klen) != key) return std::nullopt;
    const std::uint64_t plen = r.u64();
    const std::string_view payload = r.bytes(plen);
    if (!r.done() || crc32(payload) != sum) {
      std::cerr << "cache: checksum mismatch for entry '" << key << "', recomputing\n";
      return std::nullopt;
    }
    return std::string(payload);
  } catch (const std::runtime_error&) {
    std::cerr << "cache: unreadable entry for '" << key << "', recomputing\n";
    return std::nullopt;
  }
}

std::string Cache::get_or_compute(const std::string& key, const std::function<std::string()>& compute) const {
  if (auto hit = get(key)) return *hit;
  std::string value = compute();
  put(key, value);
  return value;
}

}  // namespace artifact
