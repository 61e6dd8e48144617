#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "artifact/bar.hpp"
#include "artifact/linalg.hpp"
#include "artifact/twistcat.hpp"
#include "support.hpp"

using namespace artifact;

namespace {

// Brute-force homology over F_2 by enumerating every vector (dims <= 20).
std::vector<int> brute_homology_f2(const BasedComplex& C) {
  auto apply = [](const FFMatrix& m, unsigned v) {
    unsigned out = 0;
    m.for_each([&](int r, int c, fe x) {
      if ((v >> c) & 1u && x) out ^= 1u << r;
    });
    return out;
  };
  auto log2i = [](long long x) {
    int l = 0;
    while ((1LL << l) < x) ++l;
    return l;
  };
  std::vector<int> h;
  for (int k = 0; k < C.length(); ++k) {
    long long kernel = 0;
    for (unsigned v = 0; v < (1u << C.dim(k)); ++v)
      if (apply(C.d(k), v) == 0) ++kernel;
    std::vector<bool> image(1u << C.dim(k), false);
    image[0] = true;
    if (k > 0)
      for (unsigned v = 0; v < (1u << C.dim(k - 1)); ++v) image[apply(C.d(k - 1), v)] = true;
    long long im = 0;
    for (bool b : image) im += b;
    h.push_back(log2i(kernel) - log2i(im));
  }
  return h;
}

// Stack of (1 - tau_k), k = 0..d-2, on (x)^d at k^n.
FFMatrix first_differential_oracle(const FieldPtr& F, int d, int n) {
  std::vector<FunctorExpr> ones(d, fx::sym(1));
  const int N = eval_dim(fx::tensor_power(d), n);
  std::vector<Triplet> t;
  for (int k = 0; k + 1 < d; ++k) {
    std::vector<int> sigma(d);
    for (int i = 0; i < d; ++i) sigma[i] = i;
    std::swap(sigma[k], sigma[k + 1]);
    const FFMatrix block = FFMatrix::identity(F, N) - eval_nat(nat::perm(sigma, ones), F, n);
    block.for_each([&](int r, int c, fe v) { t.push_back({k * N + r, c, v}); });
  }
  return FFMatrix::from_triplets(F, (d - 1) * N, N, t);
}

}  // namespace

TEST_CASE("inner bar construction of S^*") {
  auto F = Field::get(3);
  const TwistComplex B1 = inner_bar(F, 1);
  REQUIRE(B1.length() == 1);
  CHECK(B1.objects[0].terms == std::vector<std::vector<int>>{{1}});
  const TwistComplex B2 = inner_bar(F, 2);
  REQUIRE(B2.length() == 2);
  CHECK(B2.objects[0].terms == std::vector<std::vector<int>>{{1, 1}});  // bar degree 2
  CHECK(B2.objects[1].terms == std::vector<std::vector<int>>{{2}});     // bar degree 1
  // Its homology is the exterior power in top bar degree.
  for (int p : {2, 3, 5})
    for (int d = 1; d <= 4; ++d)
      for (int n = 1; n <= 3; ++n) {
        const BasedComplex C = inner_bar(Field::get(p), d).evaluate(n);
        const auto h = homology_dims(C);
        CHECK(h[0] == eval_dim(fx::ext(d), n));
        for (std::size_t k = 1; k < h.size(); ++k) CHECK(h[k] == 0);
      }
}

TEST_CASE("objects of J_d") {
  auto F = Field::get(2);
  const TwistComplex J1 = build_Jd(F, 1);
  REQUIRE(J1.length() == 1);
  CHECK(J1.objects[0].terms == std::vector<std::vector<int>>{{1}});
  const TwistComplex J2 = build_Jd(F, 2);
  REQUIRE(J2.length() == 3);
  CHECK(J2.objects[0].terms == std::vector<std::vector<int>>{{1, 1}});
  CHECK(J2.objects[1].terms == std::vector<std::vector<int>>{{1, 1}});
  CHECK(J2.objects[2].terms == std::vector<std::vector<int>>{{2}});
  CHECK(J2.words[0][0] == OuterWord{{1}, {1}});
  CHECK(J2.words[1][0] == OuterWord{{1, 1}});
  const SymHom one_minus_tau{F, SymSum{{{1, 1}}}, SymSum{{{1, 1}}},
                             {{0, 0, Pattern{{1, 0}, {0, 1}}, 1}, {0, 0, Pattern{{0, 1}, {1, 0}}, F->neg(1)}}};
  CHECK(sym_equal(J2.diffs[0], one_minus_tau));
  for (int d = 2; d <= 4; ++d) {
    const TwistComplex J = build_Jd(F, d);
    CHECK(J.length() <= 2 * d);
    CHECK(J.objects[0].terms == std::vector<std::vector<int>>{std::vector<int>(d, 1)});
    REQUIRE(static_cast<int>(J.words[1].size()) == d - 1);
    for (int k = 0; k + 1 < d; ++k) {
      OuterWord w(d - 1, InnerWord{1});
      w[k] = InnerWord{1, 1};
      CHECK(J.words[1][k] == w);
    }
    for (int n = 1; n <= 3; ++n) {
      const auto dims = Jd_dims(d, n);
      for (int c = 0; c < J.length(); ++c) CHECK(dims[c] == symsum_dim(J.objects[c], n));
    }
  }
}

TEST_CASE("first differential is the product of (1 - tau_k)") {
  for (int p : {2, 3, 5}) {
    auto F = Field::get(p);
    for (int d = 2; d <= 4; ++d)
      for (int n = 1; n <= 3; ++n) {
        if (d == 4 && n == 3) continue;
        CHECK(eval_symhom(build_Jd(F, d).diffs[0], n) == first_differential_oracle(F, d, n));
      }
  }
}

TEST_CASE("d^2 = 0 and homology Gamma^d") {
  for (int p : {2, 3, 5}) {
    auto F = Field::get(p);
    for (int d = 1; d <= 4; ++d) {
      const TwistComplex J = build_Jd(F, d);
      for (std::size_t c = 0; c + 1 < J.diffs.size(); ++c)
        for (int n = 1; n <= 3; ++n) {
          if (d == 4 && n == 3) continue;
          CHECK((eval_symhom(J.diffs[c + 1], n) * eval_symhom(J.diffs[c], n)).is_zero());
        }
    }
    const JdReport r2 = verify_Jd(F, 2, {1, 2, 3});
    CHECK(r2.pass);
    CHECK(r2.rows[1].homology[0] == 3);
    const JdReport r3 = verify_Jd(F, 3, {1, 2});
    CHECK(r3.pass);
    CHECK(r3.differentials_lift);
    CHECK(r3.rows[1].homology[0] == 4);
    CHECK(verify_Jd(F, 1, {1, 2}).pass);
  }
}

TEST_CASE("brute-force homology over F_2") {
  auto F = Field::get(2);
  for (int d : {2, 3})
    for (int n : {1, 2}) {
      const BasedComplex C = build_Jd(F, d).evaluate(n);
      bool small = true;
      for (int x : C.dims()) small = small && x <= 20;
      if (!small) continue;
      CHECK(brute_homology_f2(C) == homology_dims(C));
      CHECK(brute_homology_f2(C)[0] == eval_dim(fx::gamma(d), n));
    }
}

TEST_CASE("kernel of the first differential is the image of Gamma^d") {
  for (int p : {2, 3}) {
    auto F = Field::get(p);
    for (int d = 2; d <= 3; ++d)
      for (int n = 1; n <= 3; ++n) {
        const FFMatrix d0 = eval_symhom(build_Jd(F, d).diffs[0], n);
        const FFMatrix incl = eval_nat(nat::diag_gamma(std::vector<int>(d, 1)), F, n);
        const auto kr = kernel_rank(d0);
        CHECK((d0 * incl).is_zero());
        CHECK(rank(incl) == static_cast<int>(kr.kernel_basis.size()));
      }
  }
}

TEST_CASE("characteristic 2 matrices are 0/1 and differentials lift") {
  auto F = Field::get(2);
  for (int d = 1; d <= 3; ++d) {
    const TwistComplex J = build_Jd(F, d);
    for (const auto& h : J.diffs) {
      eval_symhom(h, 2).for_each([](int, int, fe v) { CHECK(v == 1); });
      CHECK(twist_lift(h).has_value());
    }
  }
  auto F3 = Field::get(3);
  for (const auto& h : build_Jd(F3, 3).diffs) CHECK(twist_lift(h).has_value());
}
