#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "artifact/symtensor.hpp"
#include "support.hpp"

using namespace artifact;
using namespace testing_support;

namespace {

// Count nonnegative integer matrices with given margins by brute force.
int count_margin_matrices(const std::vector<int>& rows, const std::vector<int>& cols) {
  const int k = static_cast<int>(rows.size()), l = static_cast<int>(cols.size());
  const int D = rows.empty() ? 0 : *std::max_element(rows.begin(), rows.end());
  int cells = k * l, total = 0;
  std::vector<int> v(cells, 0);
  while (true) {
    bool ok = true;
    for (int i = 0; i < k && ok; ++i) {
      int s = 0;
      for (int j = 0; j < l; ++j) s += v[i * l + j];
      ok = s == rows[i];
    }
    for (int j = 0; j < l && ok; ++j) {
      int s = 0;
      for (int i = 0; i < k; ++i) s += v[i * l + j];
      ok = s == cols[j];
    }
    total += ok;
    int c = 0;
    while (c < cells && v[c] == D) v[c++] = 0;
    if (c == cells) break;
    ++v[c];
  }
  return total;
}

std::vector<int> random_composition(int d, int parts, std::mt19937_64& rng) {
  std::vector<int> out(parts, 0);
  for (int i = 0; i < d; ++i) ++out[std::uniform_int_distribution<int>(0, parts - 1)(rng)];
  return out;
}

SymSum random_sum(int d, std::mt19937_64& rng) {
  SymSum s;
  const int terms = std::uniform_int_distribution<int>(1, 2)(rng);
  for (int t = 0; t < terms; ++t) s.terms.push_back(random_composition(d, std::uniform_int_distribution<int>(1, 3)(rng), rng));
  return s;
}

SymHom random_symhom(const FieldPtr& F, const SymSum& src, const SymSum& tgt, std::mt19937_64& rng) {
  SymHom h{F, src, tgt, {}};
  for (std::size_t t = 0; t < tgt.terms.size(); ++t)
    for (std::size_t s = 0; s < src.terms.size(); ++s)
      for (const auto& M : hom_basis(src.terms[s], tgt.terms[t]))
        if (rng() % 2) h.entries.push_back({static_cast<int>(t), static_cast<int>(s), M, random_element(*F, rng)});
  h.normalize();
  return h;
}

}  // namespace

TEST_CASE("hom basis") {
  const auto b = hom_basis({1, 1}, {1, 1});
  REQUIRE(b.size() == 2);
  CHECK(b[0] == Pattern{{1, 0}, {0, 1}});
  CHECK(b[1] == Pattern{{0, 1}, {1, 0}});
  CHECK(hom_basis({2}, {1, 1}) == std::vector<Pattern>{{{1, 1}}});
  CHECK(hom_basis({2, 1}, {1, 2}).size() == 2);
  CHECK(hom_basis({0}, {0}).size() == 1);
  CHECK_THROWS_AS(hom_basis({2}, {3}), std::invalid_argument);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = std::uniform_int_distribution<int>(0, 4)(rng);
    const auto l = random_composition(d, std::uniform_int_distribution<int>(1, 3)(rng), rng);
    const auto m = random_composition(d, std::uniform_int_distribution<int>(1, 3)(rng), rng);
    const auto basis = hom_basis(l, m);
    CHECK(static_cast<int>(basis.size()) == count_margin_matrices(l, m));
    for (std::size_t i = 1; i < basis.size(); ++i) CHECK(basis[i - 1] > basis[i]);
  }
}

TEST_CASE("pattern maps agree with the engine's natural maps") {
  for (int p : {2, 3, 5}) {
    auto F = Field::get(p);
    for (int n : {1, 2, 3}) {
      for (int i = 0; i <= 3; ++i)
        for (int j = 0; j <= 3; ++j) {
          const SymHom m{F, SymSum{{{i, j}}}, SymSum{{{i + j}}}, {{0, 0, Pattern{{i}, {j}}, 1}}};
          CHECK(eval_symhom(m, n) == eval_nat(nat::mul(i, j), F, n));
          const SymHom c{F, SymSum{{{i + j}}}, SymSum{{{i, j}}}, {{0, 0, Pattern{{i, j}}, 1}}};
          CHECK(eval_symhom(c, n) == eval_nat(nat::comul(i, j), F, n));
        }
      const std::vector<int> lam = {2, 1, 3};
      const std::vector<int> sigma = {2, 0, 1};
      Pattern M(3, std::vector<int>(3, 0));
      std::vector<int> mu;
      for (int j = 0; j < 3; ++j) {
        M[sigma[j]][j] = lam[sigma[j]];
        mu.push_back(lam[sigma[j]]);
      }
      const SymHom s{F, SymSum{{lam}}, SymSum{{mu}}, {{0, 0, M, 1}}};
      CHECK(eval_symhom(s, n) == eval_nat(nat::perm(sigma, {fx::sym(2), fx::sym(1), fx::sym(3)}), F, n));
    }
  }
}

TEST_CASE("pattern combinations are natural") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const int p = std::vector<int>{2, 3, 5}[trial % 3];
    auto F = Field::get(p);
    const int d = std::uniform_int_distribution<int>(1, 4)(rng);
    const SymSum src = random_sum(d, rng), tgt = random_sum(d, rng);
    const SymHom f = random_symhom(F, src, tgt, rng);
    const int n = std::uniform_int_distribution<int>(1, 3)(rng);
    const FFMatrix g = random_matrix(F, n, n, rng);
    const FFMatrix fm = eval_symhom(f, n);
    CHECK(eval_map(symsum_functor(tgt), g) * fm == fm * eval_map(symsum_functor(src), g));
  }
}

TEST_CASE("composition, sums and multilinear decomposition") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    const int p = std::vector<int>{2, 3, 5}[trial % 3];
    auto F = Field::get(p);
    const int d = std::uniform_int_distribution<int>(1, 4)(rng);
    const SymSum a = random_sum(d, rng), b = random_sum(d, rng), c = random_sum(d, rng);
    const SymHom f = random_symhom(F, a, b, rng), f2 = random_symhom(F, a, b, rng);
    const SymHom g = random_symhom(F, b, c, rng);
    const SymHom gf = sym_compose(g, f);
    for (int n : {1, 2, 3}) {
      CHECK(eval_symhom(gf, n) == eval_symhom(g, n) * eval_symhom(f, n));
      CHECK(eval_symhom(sym_add(f, f2), n) == eval_symhom(f, n) + eval_symhom(f2, n));
    }
    CHECK(sym_equal(sym_compose(sym_identity(F, b), f), f));
    CHECK(sym_equal(sym_compose(f, sym_identity(F, a)), f));
    auto round = symhom_from_multilinear(F, a, b, [&](int s) {
      SummandImage out;
      for (auto& [y, coef] : apply_symhom(f, s, multilinear_tuple(a.terms[s])))
        out.emplace_back(y[0][0], MonoTuple(y.begin() + 1, y.end()), coef);
      return out;
    });
    REQUIRE(round.has_value());
    CHECK(sym_equal(*round, f));
    CHECK(sym_add(f, sym_scale(F->neg(1), f)).is_zero());
  }
}

TEST_CASE("multilinear values outside the pattern span are rejected") {
  // x0 x1 -> x0 (x) x1 alone is not natural: the swap partner is missing.
  const std::vector<std::pair<MonoTuple, fe>> half = {{MonoTuple{{0}, {1}}, 1}};
  CHECK_FALSE(decompose_multilinear({2}, {1, 1}, half).has_value());
  const std::vector<std::pair<MonoTuple, fe>> full = {{MonoTuple{{0}, {1}}, 1}, {MonoTuple{{1}, {0}}, 1}};
  const auto ok = decompose_multilinear({2}, {1, 1}, full);
  REQUIRE(ok.has_value());
  CHECK(ok->size() == 1);
  const std::vector<std::pair<MonoTuple, fe>> repeated = {{MonoTuple{{0, 0}}, 1}};
  CHECK_FALSE(decompose_multilinear({1, 1}, {2}, repeated).has_value());
}

TEST_CASE("basis order and text form") {
  const SymTensorBasis B(3, {2, 1});
  CHECK(B.size() == 18);
  for (int i = 0; i < B.size(); ++i) CHECK(B.index(B.element(i)) == i);
  CHECK(B.element(0) == MonoTuple{{0, 0}, {0}});
  CHECK(B.element(1) == MonoTuple{{0, 0}, {1}});
  CHECK(symsum_dim(SymSum{{{2, 1}, {3}}}, 3) == 18 + 10);
  auto F = Field::get(3);
  const SymHom c{F, SymSum{{{2}}}, SymSum{{{1, 1}}}, {{0, 0, Pattern{{1, 1}}, 2}}};
  CHECK(to_string(c) == "(symhom (source ((2))) (target ((1 1))) (entry 0 0 ((1 1)) 2))");
}
