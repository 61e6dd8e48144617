#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "artifact/complex.hpp"
#include "artifact/field.hpp"
#include "artifact/linalg.hpp"
#include "artifact/pcomplex.hpp"
#include "artifact/troesch.hpp"
#include "support.hpp"

using namespace artifact;
using testing_support::random_element;
using testing_support::random_matrix;

namespace {

// Rank over F_p by dense elimination on plain integers.
int rank_oracle(const FFMatrix& M, int p) {
  std::vector<std::vector<long long>> a(M.rows(), std::vector<long long>(M.cols(), 0));
  M.for_each([&](int r, int c, fe v) { a[r][c] = v; });
  auto inv = [p](long long x) {
    long long r = 1;
    for (int e = p - 2; e > 0; --e) r = r * x % p;
    return r;
  };
  int rank = 0;
  for (int c = 0; c < M.cols() && rank < M.rows(); ++c) {
    int piv = -1;
    for (int r = rank; r < M.rows(); ++r)
      if (a[r][c] % p) piv = r;
    if (piv < 0) continue;
    std::swap(a[piv], a[rank]);
    const long long s = inv(a[rank][c] % p);
    for (auto& x : a[rank]) x = x * s % p;
    for (int r = 0; r < M.rows(); ++r)
      if (r != rank && a[r][c] % p) {
        const long long f = a[r][c];
        for (int j = 0; j < M.cols(); ++j) a[r][j] = ((a[r][j] - f * a[rank][j]) % p + p) % p;
      }
    ++rank;
  }
  return rank;
}

}  // namespace

TEST_CASE("small field examples") {
  auto F4 = Field::get(2, 2);
  const fe g = F4->generator();
  CHECK(g == 2);
  CHECK(F4->mul(g, g) == F4->add(g, 1));
  auto F3 = Field::get(3);
  CHECK(F3->inv(2) == 2);
  CHECK(F3->neg(1) == 2);
  CHECK(Field::of_order(27)->e() == 3);
  CHECK(Field::get(5, 2) == Field::get(5, 2));
  CHECK_THROWS(Field::get(4));
}

TEST_CASE("field axioms on random elements") {
  std::mt19937_64 rng(1);
  for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {5, 1}, {2, 3}, {3, 2}, {3, 3}, {5, 2}, {2, 5}}) {
    auto F = Field::get(p, e);
    CHECK(is_irreducible_mod_p(F->modulus(), p));
    for (int trial = 0; trial < 200; ++trial) {
      const fe a = random_element(*F, rng), b = random_element(*F, rng), c = random_element(*F, rng);
      CHECK(F->add(a, F->add(b, c)) == F->add(F->add(a, b), c));
      CHECK(F->mul(a, F->mul(b, c)) == F->mul(F->mul(a, b), c));
      CHECK(F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c)));
      CHECK(F->add(a, F->neg(a)) == 0);
      CHECK(F->frobenius(a) == F->pow(a, p));
      CHECK(F->from_coeffs(F->coeffs(a)) == a);
      if (a) CHECK(F->mul(a, F->inv(a)) == 1);
    }
    // The primitive element generates the multiplicative group.
    std::vector<bool> seen(F->q(), false);
    fe x = 1;
    for (std::uint32_t i = 0; i + 1 < F->q(); ++i, x = F->mul(x, F->primitive())) seen[x] = true;
    CHECK(x == 1);
    CHECK(std::count(seen.begin(), seen.end(), true) == static_cast<long>(F->q() - 1));
  }
}

TEST_CASE("kernel and rank examples") {
  auto F = Field::get(3);
  // [[1 1 1], [0 1 2]]: kernel spanned by (1, 1, 1) since 1+1+1 = 0 and 1 + 2 = 0.
  const FFMatrix M = FFMatrix::from_dense(F, 2, 3, {1, 1, 1, 0, 1, 2});
  const auto kr = kernel_rank(M);
  CHECK(kr.rank == 2);
  REQUIRE(kr.kernel_basis.size() == 1);
  CHECK(kr.kernel_basis[0] == SparseVec{{0, 1}, {1, 1}, {2, 1}});
  CHECK(rank(FFMatrix::identity(F, 5)) == 5);
  CHECK(rank(FFMatrix(F, 4, 6)) == 0);
}

TEST_CASE("random ranks against an integer oracle") {
  std::mt19937_64 rng(2);
  for (int p : {2, 3, 5}) {
    auto F = Field::get(p);
    for (int trial = 0; trial < 6; ++trial) {
      const int rows = 50, cols = 50;
      // Low-rank products exercise dependent columns.
      const int inner = std::uniform_int_distribution<int>(5, 50)(rng);
      const FFMatrix M = random_matrix(F, rows, inner, rng, 0.3) * random_matrix(F, inner, cols, rng, 0.3);
      const int r = rank(M);
      CHECK(r == rank_oracle(M, p));
      CHECK(r == rank(M.transpose()));
      const auto kr = kernel_rank(M);
      CHECK(kr.rank + static_cast<int>(kr.kernel_basis.size()) == cols);
      for (const auto& k : kr.kernel_basis) CHECK(M.apply(k).empty());
    }
  }
}

TEST_CASE("solve and span solver") {
  std::mt19937_64 rng(3);
  auto F = Field::get(3, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const FFMatrix A = random_matrix(F, 12, 8, rng, 0.4);
    SparseVec x;
    for (int i = 0; i < 8; ++i) x.emplace_back(i, random_element(*F, rng));
    const SparseVec b = A.apply(normalize_vec(*F, x));
    const auto sol = solve(A, b);
    REQUIRE(sol.has_value());
    CHECK(A.apply(*sol) == b);
  }
  const FFMatrix Z = FFMatrix::from_dense(F, 2, 1, {1, 0});
  CHECK_FALSE(solve(Z, SparseVec{{1, 1}}).has_value());
}

TEST_CASE("dense and sparse storage agree") {
  std::mt19937_64 rng(4);
  auto F = Field::get(5);
  for (int trial = 0; trial < 10; ++trial) {
    const FFMatrix a = random_matrix(F, 20, 15, rng, 0.9), b = random_matrix(F, 15, 10, rng, 0.05);
    CHECK(a.dense());
    CHECK_FALSE(b.dense());
    std::vector<fe> flat(20 * 15, 0);
    a.for_each([&](int r, int c, fe v) { flat[r * 15 + c] = v; });
    const FFMatrix a2 = FFMatrix::from_triplets(F, 20, 15, a.triplets());
    CHECK(FFMatrix::from_dense(F, 20, 15, flat) == a);
    CHECK(a2 == a);
    CHECK((a * b).transpose() == b.transpose() * a.transpose());
  }
}

TEST_CASE("blocked homology: serial and parallel agree with the unblocked count") {
  auto F = Field::get(2);
  const NComplex C = contract(build_troesch(F, 2, 2, 3, unit_coordinate_keys(3)), 1);
  for (int k = 0; k < C.length(); ++k) {
    const int h = homology(C, k, false).dim;
    CHECK(blocked_homology_dim_serial(C, k) == h);
    CHECK(blocked_homology_dim_parallel(C, k) == h);
  }
}
