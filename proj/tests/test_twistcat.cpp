#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "artifact/linalg.hpp"
#include "artifact/pcomplex.hpp"
#include "artifact/twistcat.hpp"
#include "support.hpp"

using namespace artifact;
using namespace testing_support;

namespace {

SymHom single(const FieldPtr& F, std::vector<int> l, std::vector<int> m, const Pattern& M, fe c = 1) {
  return SymHom{F, SymSum{{std::move(l)}}, SymSum{{std::move(m)}}, {{0, 0, M, c}}};
}

SparseVec vectorize(const FFMatrix& m) {
  std::vector<std::pair<int, fe>> raw;
  m.for_each([&](int r, int c, fe v) { raw.emplace_back(c * m.rows() + r, v); });
  return normalize_vec(*m.field(), std::move(raw));
}

// Lift coordinates over hom_basis(p lambda, p mu) by a direct linear solve of
// fbar o pi = pi o f(S^p) at k^n, all maps from the functor engine.
std::optional<SparseVec> oracle_lift(const FieldPtr& F, const NatMap& u, const std::vector<int>& lambda,
                                     const std::vector<int>& mu, int n) {
  const int p = static_cast<int>(F->p());
  auto pi = [&](const std::vector<int>& t) {
    std::vector<NatMap> parts;
    for (int l : t) parts.push_back(nat::powmul(p, l));
    return eval_nat(nat::tens(parts), F, n);
  };
  const FFMatrix pi_src = pi(lambda), pi_tgt = pi(mu);
  const FFMatrix top = eval_nat(nat::pre(u, fx::sym(p)), F, n);
  std::vector<int> pl, pm;
  for (int l : lambda) pl.push_back(p * l);
  for (int m : mu) pm.push_back(p * m);
  const auto basis = hom_basis(pl, pm);
  std::vector<SparseVec> cols;
  for (const auto& M : basis) cols.push_back(vectorize(eval_symhom(single(F, pl, pm, M), n) * pi_src));
  const SparseVec rhs = vectorize(pi_tgt * top);
  const FFMatrix A = FFMatrix::from_columns(F, pi_tgt.rows() * pi_src.cols(), cols);
  return solve(A, rhs);
}

SymHom scaled_pattern(const SymHom& f, int p) {
  SymHom g{f.F, scaled_sum(f.source, p), scaled_sum(f.target, p), f.entries};
  for (auto& e : g.entries)
    for (auto& row : e.pattern)
      for (int& x : row) x *= p;
  g.normalize();
  return g;
}

// Patterns sending each source factor whole to one target factor: composites of
// multiplications and permutations.
std::vector<Pattern> merge_patterns(const std::vector<int>& l, const std::vector<int>& m) {
  std::vector<Pattern> out;
  for (const auto& M : hom_basis(l, m)) {
    bool ok = true;
    for (const auto& row : M) {
      int nz = 0;
      for (int x : row) nz += x != 0;
      ok = ok && nz <= 1;
    }
    if (ok) out.push_back(M);
  }
  return out;
}

std::vector<int> random_tuple(int d, std::mt19937_64& rng) {
  std::vector<int> t;
  while (d > 0) {
    const int x = std::uniform_int_distribution<int>(1, d)(rng);
    t.push_back(x);
    d -= x;
  }
  return t;
}

SymSum random_flat(int d, std::mt19937_64& rng) {
  SymSum s;
  const int k = std::uniform_int_distribution<int>(1, 2)(rng);
  for (int i = 0; i < k; ++i) s.terms.push_back(random_tuple(d, rng));
  return s;
}

SymHom random_compatible(const FieldPtr& F, const SymSum& a, const SymSum& b, std::mt19937_64& rng) {
  SymHom h{F, a, b, {}};
  for (std::size_t t = 0; t < b.terms.size(); ++t)
    for (std::size_t s = 0; s < a.terms.size(); ++s)
      for (const auto& M : merge_patterns(a.terms[s], b.terms[t]))
        if (rng() % 2) h.entries.push_back({static_cast<int>(t), static_cast<int>(s), M, random_element(*F, rng)});
  h.normalize();
  return h;
}

// Factor swap of tensor_p(C, C) read off the layout.
FFMatrix swap_oracle(const NComplex& C, int k) {
  const auto L = tensor_layout(C, C);
  std::vector<Triplet> t;
  for (const auto& sm : L.degrees[k])
    for (int a = 0; a < C.dim(sm.left); ++a)
      for (int b = 0; b < C.dim(sm.right); ++b)
        t.push_back({L.offset(k, sm.right) + b * C.dim(sm.left) + a, sm.offset + a * C.dim(sm.right) + b, 1});
  return FFMatrix::from_triplets(C.field(), L.dims[k], L.dims[k], t);
}

}  // namespace

TEST_CASE("multiplication and permutation lift to their p-scaled versions") {
  for (int p : {2, 3}) {
    auto F = Field::get(p);
    for (int i = 1; i <= 2; ++i)
      for (int j = 1; j <= 2; ++j) {
        const SymHom m = single(F, {i, j}, {i + j}, Pattern{{i}, {j}});
        const auto lift = twist_lift(m);
        REQUIRE(lift.has_value());
        CHECK(sym_equal(*lift, single(F, {p * i, p * j}, {p * (i + j)}, Pattern{{p * i}, {p * j}})));
      }
    const SymHom tau = single(F, {1, 1}, {1, 1}, Pattern{{0, 1}, {1, 0}});
    const auto lt = twist_lift(tau);
    REQUIRE(lt.has_value());
    CHECK(sym_equal(*lt, single(F, {p, p}, {p, p}, Pattern{{0, p}, {p, 0}})));
  }
}

TEST_CASE("comultiplication is not twist compatible") {
  for (int p : {2, 3}) {
    auto F = Field::get(p);
    const auto r = twist_lift_checked(single(F, {2}, {1, 1}, Pattern{{1, 1}}));
    CHECK_FALSE(r.lift.has_value());
    CHECK_FALSE(r.check.candidate);
  }
  // The direct solve at the degree dimension agrees.
  auto F2 = Field::get(2);
  CHECK_FALSE(oracle_lift(F2, nat::comul(1, 1), {2}, {1, 1}, 4).has_value());
}

TEST_CASE("lifts agree with a direct linear solve at two dimensions") {
  auto F2 = Field::get(2), F3 = Field::get(3);
  struct Case {
    FieldPtr F;
    NatMap u;
    SymHom f;
  };
  const std::vector<Case> cases = {
      {F2, nat::mul(1, 1), single(F2, {1, 1}, {2}, Pattern{{1}, {1}})},
      {F2, nat::perm({1, 0}, {fx::sym(1), fx::sym(1)}), single(F2, {1, 1}, {1, 1}, Pattern{{0, 1}, {1, 0}})},
      {F2, nat::identity(fx::sym(2)), single(F2, {2}, {2}, Pattern{{2}})},
      {F3, nat::identity(fx::sym(1)), single(F3, {1}, {1}, Pattern{{1}})},
      {F2, nat::lin({1, 1}, {nat::identity(fx::tensor_power(2)), nat::perm({1, 0}, {fx::sym(1), fx::sym(1)})}),
       SymHom{F2, SymSum{{{1, 1}}}, SymSum{{{1, 1}}}, {{0, 0, Pattern{{1, 0}, {0, 1}}, 1}, {0, 0, Pattern{{0, 1}, {1, 0}}, 1}}}},
  };
  for (const auto& c : cases) {
    const auto lift = twist_lift(c.f);
    REQUIRE(lift.has_value());
    const int p = static_cast<int>(c.F->p());
    const auto& lambda = c.f.source.terms[0];
    const auto& mu = c.f.target.terms[0];
    std::vector<int> pl, pm;
    for (int l : lambda) pl.push_back(p * l);
    for (int m : mu) pm.push_back(p * m);
    const auto basis = hom_basis(pl, pm);
    const int D = p * std::accumulate(mu.begin(), mu.end(), 0);
    for (int n : {D, D + 1}) {
      const auto x = oracle_lift(c.F, c.u, lambda, mu, n);
      REQUIRE(x.has_value());
      SymHom g{c.F, SymSum{{pl}}, SymSum{{pm}}, {}};
      for (const auto& [i, v] : *x) g.entries.push_back({0, 0, basis[i], v});
      g.normalize();
      CHECK(sym_equal(g, *lift));
    }
  }
}

TEST_CASE("composition and linearity of lifts") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = trial % 2 ? 3 : 2;
    auto F = Field::get(p);
    const int d = std::uniform_int_distribution<int>(1, p == 2 ? 3 : 2)(rng);
    const SymSum a = random_flat(d, rng), b = random_flat(d, rng), c = random_flat(d, rng);
    const SymHom f = random_compatible(F, a, b, rng), f2 = random_compatible(F, a, b, rng);
    const SymHom g = random_compatible(F, b, c, rng);
    LiftOptions opt;
    opt.sample_cap = 2000;
    const auto lf = twist_lift(f, opt), lf2 = twist_lift(f2, opt), lg = twist_lift(g, opt);
    REQUIRE(lf.has_value());
    REQUIRE(lf2.has_value());
    REQUIRE(lg.has_value());
    // A merge pattern lifts to itself scaled by p.
    CHECK(sym_equal(*lf, scaled_pattern(f, p)));
    const auto lgf = twist_lift(sym_compose(g, f), opt);
    REQUIRE(lgf.has_value());
    CHECK(sym_equal(*lgf, sym_compose(*lg, *lf)));
    const fe s = random_element(*F, rng), t = random_element(*F, rng);
    const auto lsum = twist_lift(sym_add(sym_scale(s, f), sym_scale(t, f2)), opt);
    REQUIRE(lsum.has_value());
    CHECK(sym_equal(*lsum, sym_add(sym_scale(s, *lf), sym_scale(t, *lf2))));
  }
}

TEST_CASE("lift checks report what was verified") {
  auto F = Field::get(3);
  const auto r = twist_lift_checked(single(F, {1, 1}, {2}, Pattern{{1}, {1}}));
  CHECK(r.check.candidate);
  CHECK(r.check.square_at_D);
  CHECK(r.check.square_at_D1);
  CHECK(r.check.frobenius_composite);
  CHECK(r.check.lifting_diagram);
  CHECK(r.check.pass());
  LiftOptions tiny;
  tiny.sample_cap = 10;
  const auto s = twist_lift_checked(single(F, {1, 1}, {2}, Pattern{{1}, {1}}), tiny);
  CHECK(s.check.sampled);
  CHECK(sym_equal(*s.lift, *r.lift));
}

TEST_CASE("flattening is a natural isomorphism") {
  const std::vector<FunctorExpr> fs = {
      fx::tensor({fx::sum({fx::sym(2), fx::tensor({fx::sym(1), fx::sym(1)})}), fx::sum({fx::id(), fx::sym(1)})}),
      fx::tensor_power(3),
      fx::sum({fx::sym(2), fx::tensor({fx::sym(1), fx::sum({fx::id(), fx::id()})})}),
      fx::tensor({fx::constant(), fx::sym(2)}),
  };
  CHECK(flatten(fs[0]).terms == std::vector<std::vector<int>>{{2, 1}, {2, 1}, {1, 1, 1}, {1, 1, 1}});
  CHECK(flatten(fs[1]).terms == std::vector<std::vector<int>>{{1, 1, 1}});
  CHECK(flatten(fs[2]).terms == std::vector<std::vector<int>>{{2}, {1, 1}, {1, 1}});
  CHECK_THROWS_AS(flatten(fx::gamma(2)), std::invalid_argument);
  std::mt19937_64 rng(22);
  for (int p : {2, 3})
    for (const auto& F : fs)
      for (int n : {1, 2, 3}) {
        auto K = Field::get(p);
        const FFMatrix xi = xi_matrix(F, K, n);
        CHECK(rank(xi) == xi.cols());
        const FFMatrix g = random_matrix(K, n, n, rng);
        CHECK(xi * eval_map(F, g) == eval_map(symsum_functor(flatten(F)), g) * xi);
      }
}

TEST_CASE("T on objects") {
  for (int p : {2, 3}) {
    auto K = Field::get(p);
    for (int n : {1, 2}) {
      const NComplex Bp = build_troesch(K, p, p, n);
      CHECK(T_object(fx::id(), p).evaluate(K, n) == Bp);
      CHECK(T_object(fx::tensor_power(2), p).evaluate(K, n) == tensor_p(Bp, Bp));
      CHECK(T_object(fx::sum({fx::id(), fx::id()}), p).evaluate(K, n) == direct_sum(K, p, {Bp, Bp}));
      for (const auto& F : {fx::sum({fx::sym(2), fx::tensor_power(2)}), fx::tensor({fx::id(), fx::sum({fx::id(), fx::id()})})}) {
        if (p == 3 && n == 2 && F->degree > 1) continue;
        const TObject T = T_object(F, p);
        const FFMatrix aug = T.augmentation(K, n);
        CHECK(is_p_coresolution(T.evaluate(K, n), eval_dim(F, n), &aug).pass);
      }
    }
  }
}

TEST_CASE("T on maps") {
  for (int p : {2, 3}) {
    auto K = Field::get(p);
    for (int n : {1, 2}) {
      const NComplex Bp = build_troesch(K, p, p, n);
      const NComplex BB = tensor_p(Bp, Bp);
      const SymHom id2 = sym_identity(K, SymSum{{{1, 1}}});
      const ChainMap I = T_map(id2, n);
      for (int k = 0; k < BB.length(); ++k) CHECK(I.f[k] == FFMatrix::identity(K, BB.dim(k)));
      const SymHom tau = single(K, {1, 1}, {1, 1}, Pattern{{0, 1}, {1, 0}});
      const ChainMap S = T_map(tau, n);
      for (int k = 0; k < BB.length(); ++k) CHECK(S.f[k] == swap_oracle(Bp, k));
      CHECK(is_chain_map(S, BB, BB));
    }
  }
  auto K2 = Field::get(2);
  const SymHom one_minus_tau{K2, SymSum{{{1, 1}}}, SymSum{{{1, 1}}},
                             {{0, 0, Pattern{{1, 0}, {0, 1}}, 1}, {0, 0, Pattern{{0, 1}, {1, 0}}, K2->neg(1)}}};
  for (int n : {1, 2, 3}) {
    const NComplex BB = T_object(fx::tensor_power(2), 2).evaluate(K2, n);
    CHECK(is_chain_map(T_map(one_minus_tau, n), BB, BB));
  }
}

TEST_CASE("T_map is a map of coresolutions and functorial") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 16; ++trial) {
    const int p = trial % 2 ? 3 : 2;
    auto K = Field::get(p);
    const int d = p == 2 ? 2 : 1 + static_cast<int>(rng() % 2);
    const int n = p == 2 ? 2 : 1;
    const SymSum a = random_flat(d, rng), b = random_flat(d, rng), c = random_flat(d, rng);
    const SymHom f = random_compatible(K, a, b, rng), g = random_compatible(K, b, c, rng);
    const TObject Ta = T_object(a, p), Tb = T_object(b, p), Tc = T_object(c, p);
    const NComplex A = Ta.evaluate(K, n), B = Tb.evaluate(K, n), C = Tc.evaluate(K, n);
    const ChainMap Tf = T_map(f, n), Tg = T_map(g, n);
    CHECK(is_chain_map(Tf, A, B));
    CHECK(Tf.f[0] == eval_symhom(*twist_lift(f), n));
    CHECK(Tb.augmentation(K, n) * eval_symhom(f, n) == Tf.f[0] * Ta.augmentation(K, n));
    const ChainMap Tgf = T_map(sym_compose(g, f), n);
    const ChainMap both = compose(Tg, Tf, A, C);
    for (int k = 0; k < A.length(); ++k) CHECK(Tgf.f[k] == both.f[k]);
  }
}

TEST_CASE("natural maps as pattern coordinates") {
  auto K = Field::get(3);
  const auto m = to_symhom(nat::mul(1, 1), fx::tensor_power(2), fx::sym(2), K);
  REQUIRE(m.has_value());
  CHECK(sym_equal(*m, single(K, {1, 1}, {2}, Pattern{{1}, {1}})));
  const FunctorExpr pair = fx::sum({fx::sym(2), fx::tensor_power(2)});
  const FunctorExpr src = fx::tensor({pair, fx::sym(1)});
  const FunctorExpr tgt = fx::tensor({fx::sym(1), pair});
  const NatMap swap = nat::perm({1, 0}, {pair, fx::sym(1)});
  for (const NatMap& u : {swap}) {
    const auto h = to_symhom(u, src, tgt, K);
    REQUIRE(h.has_value());
    for (int n : {1, 2, 3})
      CHECK(xi_matrix(tgt, K, n) * eval_nat(u, K, n) == eval_symhom(*h, n) * xi_matrix(src, K, n));
    CHECK(twist_lift(*h).has_value());
  }
}

TEST_CASE("monoidal reshuffle") {
  for (int p : {2, 3}) {
    auto K = Field::get(p);
    for (int n : {1, 2}) {
      const NComplex Bp = build_troesch(K, p, p, n);
      const NComplex BB = tensor_p(Bp, Bp);
      const ChainMap M = T_monoidal(fx::id(), fx::id(), p, n);
      for (int k = 0; k < BB.length(); ++k) CHECK(M.f[k] == FFMatrix::identity(K, BB.dim(k)));
      const std::vector<std::pair<FunctorExpr, FunctorExpr>> pairs = {
          {fx::sum({fx::id(), fx::id()}), fx::tensor_power(2)},
          {fx::tensor_power(2), fx::sum({fx::id(), fx::id()})},
      };
      for (const auto& [F, G] : pairs) {
        if (p == 3 && n == 2) continue;
        const TObject tf = T_object(F, p), tg = T_object(G, p), tfg = T_object(fx::tensor({F, G}), p);
        const NComplex src = tensor_p(tf.evaluate(K, n), tg.evaluate(K, n));
        const NComplex dst = tfg.evaluate(K, n);
        const ChainMap R = T_monoidal(F, G, p, n);
        CHECK(is_chain_map(R, src, dst));
        for (int k = 0; k < src.length(); ++k) CHECK(rank(R.f[k]) == src.dim(k));
        const FunctorExpr deg0 =
            fx::tensor({symsum_functor(scaled_sum(tf.flat, p)), symsum_functor(scaled_sum(tg.flat, p))});
        CHECK(R.f[0] == xi_matrix(deg0, K, n));
      }
    }
  }
}
