#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "artifact/bar.hpp"
#include "artifact/cohomology.hpp"
#include "artifact/linalg.hpp"
#include "artifact/pcomplex.hpp"
#include "support.hpp"

using namespace artifact;

namespace {

SparseVec unit(int i) { return SparseVec{{i, fe{1}}}; }

SparseVec random_vec(const Field& F, int dim, std::mt19937_64& rng) {
  std::vector<std::pair<int, fe>> raw;
  for (int i = 0; i < dim; ++i) raw.emplace_back(i, testing_support::random_element(F, rng));
  return normalize_vec(F, std::move(raw));
}

// The complex k concentrated in degree 0, a unit for tensor_ord.
NComplex unit_complex(const FieldPtr& F) { return make_complex(F, {1}, {FFMatrix::from_triplets(F, 0, 1, {})}); }

// Locates a global index of tensor degree n: (left degree, left index, right index).
std::tuple<int, int, int> decode(const TensorLayout& t, const NComplex& B, int n, int idx) {
  const TensorLayout::Summand* hit = nullptr;
  for (const auto& s : t.degrees.at(n))
    if (s.offset <= idx) hit = &s;
  REQUIRE(hit != nullptr);
  const int w = B.dim(hit->right);
  return {hit->left, (idx - hit->offset) / w, (idx - hit->offset) % w};
}

}  // namespace

TEST_CASE("invariants of small functors of gl_2") {
  auto F = Field::get(2, 4);
  // gl: the identity matrix.
  CHECK(invariants(functor_module(fx::id(), F, 2)).size() == 1);
  // gl (x) gl: I (x) I and sum E_ij (x) E_ji.
  CHECK(invariants(functor_module(fx::tensor({fx::id(), fx::id()}), F, 2)).size() == 2);
  // Frobenius twist of gl.
  CHECK(invariants(functor_module(fx::twist(2, 1, fx::gamma(1)), F, 2)).size() == 1);
  auto F3 = Field::get(3, 3);
  CHECK(invariants(functor_module(fx::id(), F3, 3)).size() == 1);
  CHECK(invariants(functor_module(fx::tensor({fx::id(), fx::id()}), F3, 3)).size() == 2);
}

TEST_CASE("weight-filtered invariants agree with the stacked reference") {
  auto F = Field::get(2, 5);
  const GlTObject A(T_object(fx::sym(1), 2), F, 2);
  for (int k = 0; k < A.length(); ++k) {
    const GlModule M = A.module(k);
    CHECK(invariants(M) == invariants_reference(M));
  }
  auto F3 = Field::get(3, 3);
  const FunctorExpr B = fx::tensor({fx::id(), fx::id()});
  CHECK(invariants(functor_module(B, F3, 2)) == invariants_reference(functor_module(B, F3, 2)));
}

TEST_CASE("invariants are fixed by random group elements") {
  std::mt19937_64 rng(7);
  for (auto [p, e, n] : std::vector<std::array<int, 3>>{{2, 5, 2}, {3, 3, 2}}) {
    auto F = Field::get(p, e);
    const GlTObject A(T_object(fx::sym(1), p), F, n);
    for (int k = 0; k < A.length(); ++k) {
      const auto basis = invariants(A.module(k));
      for (int trial = 0; trial < 50; ++trial) {
        const FFMatrix g = random_invertible(F, n, rng);
        for (const auto& b : basis) CHECK(A.act(k, g, b) == b);
      }
    }
  }
}

TEST_CASE("action is a representation and commutes with d") {
  std::mt19937_64 rng(11);
  auto F = Field::get(3, 3);
  const GlTObject A(T_object(fx::sym(1), 3), F, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const FFMatrix g = random_invertible(F, 2, rng), h = random_invertible(F, 2, rng);
    for (int k = 0; k + 1 < A.length(); ++k) {
      const SparseVec v = random_vec(*F, A.dim(k), rng);
      CHECK(A.d(k, A.act(k, g, v)) == A.act(k + 1, g, A.d(k, v)));
      CHECK(A.act(k, g * h, v) == A.act(k, g, A.act(k, h, v)));
    }
  }
}

TEST_CASE("natural maps are equivariant and carry invariants to invariants") {
  std::mt19937_64 rng(3);
  auto F = Field::get(3, 3);
  const int n = 2;
  const FunctorExpr src = fx::tensor({fx::sym(1), fx::sym(1)});
  const FFMatrix u = eval_nat(nat::mul(1, 1), F, n * n);
  for (int trial = 0; trial < 10; ++trial) {
    const FFMatrix g = random_invertible(F, n, rng);
    CHECK(u * gl_eval(src, g) == gl_eval(fx::sym(2), g) * u);
  }
  const auto target = invariants(functor_module(fx::sym(2), F, n));
  Echelon E(F, u.rows());
  for (const auto& t : target) E.insert(t);
  for (const auto& b : invariants(functor_module(src, F, n))) CHECK(E.contains(u.apply(b)));
}

TEST_CASE("vector-level differential matches the assembled complex") {
  for (auto [p, e, n] : std::vector<std::array<int, 3>>{{2, 5, 2}, {3, 3, 1}}) {
    auto F = Field::get(p, e);
    const GlTObject A(T_object(SymSum{{{1, 1}}}, p), F, n);
    const NComplex C = A.assemble(false);
    REQUIRE(C.length() == A.length());
    for (int k = 0; k + 1 < A.length(); ++k)
      for (int i = 0; i < A.dim(k); ++i) CHECK(A.d(k, unit(i)) == C.d(k).column(i));
  }
}

TEST_CASE("transport along the identity and the corner restriction") {
  auto F = Field::get(2, 5);
  const GlTObject A(T_object(fx::sym(1), 2), F, 2);
  const FFMatrix I = FFMatrix::identity(F, 4);
  for (int k = 0; k < A.length(); ++k)
    for (int i = 0; i < A.dim(k); ++i) CHECK(A.transport(k, unit(i), I, A) == unit(i));
}

TEST_CASE("c[1]: invariant homology and q-independence") {
  const CohClass a = choose_c1(2, 2, Field::get(2, 5));
  CHECK(a.homology == std::vector<int>{1, 0, 1});
  CHECK(!a.representative.empty());
  const CohClass b = choose_c1(3, 3, Field::get(3, 3));
  CHECK(b.homology == std::vector<int>{1, 0, 1, 0, 1});
  const CohClass c27 = choose_c1(3, 2, Field::get(3, 3));
  const CohClass c81 = choose_c1(3, 2, Field::get(3, 4));
  CHECK(c27.homology == c81.homology);
  CHECK(c27.invariant_dims == c81.invariant_dims);
  // The representative is a cycle of the underlying contracted complex.
  const GlTObject A(T_object(fx::sym(1), 3), Field::get(3, 3), 3);
  const int pos = contracted_degree_position(2, 3);
  CHECK(A.d_power(pos, contracted_step(2, 3), b.representative).empty());
}

TEST_CASE("field order guard") {
  CHECK_FALSE(admissible_order(8, 2));
  CHECK(admissible_order(16, 2));
  CHECK(minimal_order(2, 2) == 16);
  CHECK(minimal_order(3, 3) == 27);
  CHECK_THROWS_AS(choose_c1(2, 2, Field::get(2, 3)), std::invalid_argument);
}

TEST_CASE("z[1] is the c[1] representative") {
  auto K = Field::get(2, 5);
  const CohClass c = choose_c1(2, 2, K);
  const Cochain z = build_zd(c.representative, 2, 1, 2, K);
  CHECK(z.column == 0);
  CHECK(z.row == 2);
  CHECK(z.vec == c.representative);
}

TEST_CASE("bicomplex squares commute and the total complex resolves Gamma^d") {
  for (int p : {2, 3}) {
    auto F = Field::get(p);
    for (int n : {1, 2}) {
      const Bicomplex B = build_A(build_Jd(F, 2), n);
      CHECK(B.squares_commute());
      const auto h = homology_dims(B.total());
      CHECK(h[0] == eval_dim(fx::gamma(2), n * n));
      for (std::size_t k = 1; k < h.size(); ++k) CHECK(h[k] == 0);
    }
  }
  auto F = Field::get(2);
  const Bicomplex B = build_A(build_Jd(F, 2), 2, 2);
  CHECK(B.squares_commute());
  // Degree 0 of column 0 is W (x) W, W = S^2(gl_2), and the first horizontal map there
  // is 1 - tau, of rank C(dim W, 2).
  const int w = eval_dim(fx::sym(2), 4);
  REQUIRE(B.columns[0].dim(0) == w * w);
  const FFMatrix h0 = B.horizontal[0].at(F, 0, B.columns[1].dim(0), B.columns[0].dim(0));
  CHECK(rank(h0) == w * (w - 1) / 2);
}

TEST_CASE("cup product: unit and associativity") {
  std::mt19937_64 rng(5);
  auto F = Field::get(2);
  const NComplex C = testing_support::random_ncomplex(F, 2, 3, 3, rng);
  const NComplex U = unit_complex(F);
  for (int a = 0; a < C.length(); ++a) {
    const SparseVec x = random_vec(*F, C.dim(a), rng);
    CHECK(cup(x, C, a, unit(0), U, 0) == x);
  }
  const NComplex D = testing_support::random_ncomplex(F, 2, 3, 2, rng);
  const NComplex E = testing_support::random_ncomplex(F, 2, 2, 2, rng);
  const NComplex CD = tensor_ord(C, D), DE = tensor_ord(D, E);
  const NComplex left = tensor_ord(CD, E), right = tensor_ord(C, DE);
  const TensorLayout tl = tensor_layout(CD, E), tcd = tensor_layout(C, D);
  const TensorLayout tr = tensor_layout(C, DE), tde = tensor_layout(D, E);
  for (int a = 0; a < C.length(); ++a)
    for (int b = 0; b < D.length(); ++b)
      for (int c = 0; c < E.length(); ++c) {
        const SparseVec x = random_vec(*F, C.dim(a), rng), y = random_vec(*F, D.dim(b), rng),
                        z = random_vec(*F, E.dim(c), rng);
        const SparseVec L = cup(cup(x, C, a, y, D, b), CD, a + b, z, E, c);
        const SparseVec R = cup(x, C, a, cup(y, D, b, z, E, c), DE, b + c);
        // Reassociate L index by index and compare with R.
        std::vector<std::pair<int, fe>> moved;
        for (const auto& [idx, v] : L) {
          const auto [lab, ij, k] = decode(tl, E, a + b + c, idx);
          const auto [la, i, j] = decode(tcd, D, lab, ij);
          const int lb = lab - la;
          const int inner = tde.offset(b + c, lb) + j * E.dim(c) + k;
          moved.emplace_back(tr.offset(a + b + c, la) + i * DE.dim(b + c) + inner, v);
        }
        CHECK(normalize_vec(*F, std::move(moved)) == R);
      }
}

TEST_CASE("z[2] is a cocycle and matches the lifted cup product") {
  auto K = Field::get(2, 5);
  const CohClass c = choose_c1(2, 2, K);
  const Cochain z = build_zd(c.representative, 2, 2, 2, K);
  const CocycleReport cr = verify_cocycle(z, build_Jd(K, 2), 2, true);
  CHECK(cr.pass);
  CHECK_FALSE(cr.conclusive);
  const ComparisonReport lr = verify_lift(2, 2, 2, K);
  CHECK(lr.pass);
  CHECK(lr.equal);
  CHECK(lr.cohomologous);
  const ComparisonReport l3 = verify_lift(3, 2, 2, Field::get(3, 3));
  CHECK(l3.pass);
  CHECK(l3.equal);
}

TEST_CASE("size estimate") {
  const Estimate e = estimate_lifted(2, 2, 4);
  CHECK(e.largest_block == doctest::Approx(18496));
  CHECK(e.within);
  CHECK(estimate_lifted(3, 2, 3).largest_block == doctest::Approx(27225));
  CHECK_FALSE(estimate_lifted(3, 2, 6).within);
  CHECK(estimate_lifted(3, 2, 6).summary.find("exceeds cap") != std::string::npos);
}
