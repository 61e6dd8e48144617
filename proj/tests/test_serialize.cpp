#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <fstream>
#include <random>

#include "artifact/cohomology.hpp"
#include "artifact/serialize.hpp"
#include "artifact/troesch.hpp"
#include "support.hpp"

using namespace artifact;

namespace {

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("artifact_test_" + tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("matrix round trip is byte-identical") {
  std::mt19937_64 rng(1);
  for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 1}, {3, 3}, {5, 2}}) {
    auto F = Field::get(p, e);
    const FFMatrix m = testing_support::random_matrix(F, 13, 7, rng, 0.3);
    const std::string bytes = serialize(m);
    const FFMatrix back = deserialize_matrix(bytes);
    CHECK(back == m);
    CHECK(serialize(back) == bytes);
  }
  CHECK_THROWS(deserialize_matrix("AFFM"));
  CHECK_THROWS(deserialize_matrix("XXXX0000"));
}

TEST_CASE("complex round trip keeps keys") {
  auto F = Field::get(3);
  const NComplex C = build_troesch(F, 3, 3, 2, unit_coordinate_keys(2));
  const std::string bytes = serialize(C);
  const NComplex back = deserialize_complex(bytes);
  CHECK(back == C);
  REQUIRE(back.has_keys());
  for (int k = 0; k < C.length(); ++k) CHECK(back.keys(k) == C.keys(k));
  CHECK(serialize(back) == bytes);
  std::string bad = bytes;
  bad.pop_back();
  CHECK_THROWS(deserialize_complex(bad));
}

TEST_CASE("crc32 check value") { CHECK(crc32("123456789") == 0xCBF43926u); }

TEST_CASE("cache hit, corruption and version bump") {
  TempDir tmp("cache");
  const Cache cache(tmp.path);
  int computed = 0;
  auto compute = [&] {
    ++computed;
    return std::string("payload");
  };
  CHECK(cache.get_or_compute("k", compute) == "payload");
  CHECK(cache.get_or_compute("k", compute) == "payload");
  CHECK(computed == 1);

  // Flip the last payload byte: the entry reads as a miss and is recomputed.
  {
    std::fstream f(cache.path_for("k"), std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-1, std::ios::end);
    f.put('X');
  }
  CHECK_FALSE(cache.get("k").has_value());
  CHECK(cache.get_or_compute("k", compute) == "payload");
  CHECK(computed == 2);

  const Cache bumped(tmp.path, Cache::kVersion + 1);
  CHECK_FALSE(bumped.get("k").has_value());
  CHECK(bumped.get_or_compute("k", compute) == "payload");
  CHECK(computed == 3);
  CHECK_FALSE(cache.get("k").has_value());
}

TEST_CASE("cached invariants are identical and faster") {
  TempDir tmp("inv");
  const Cache cache(tmp.path);
  const InvariantOptions opt{&cache};
  const GlTObject A(T_object(fx::sym(1), 3), Field::get(3, 3), 3);
  const GlModule M = A.module(contracted_degree_position(2, 3));
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  const auto cold = invariants(M, opt);
  const auto t1 = Clock::now();
  const auto warm = invariants(M, opt);
  const auto t2 = Clock::now();
  CHECK(cold == warm);
  CHECK(cold == invariants(M));
  CHECK((t2 - t1) < (t1 - t0));
}
