#include "artifact/suites.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <stdexcept>

#include "artifact/bar.hpp"
#include "artifact/linalg.hpp"
#include "artifact/pcomplex.hpp"
#include "artifact/troesch.hpp"

namespace artifact {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// A check over many cases: residual is the number of failing cases.
struct Tally {
  std::string name;
  long long cases = 0;
  long long failures = 0;
  std::string first_failure;
  Clock::time_point t0 = Clock::now();

  void record(bool ok, const std::string& what = {}) {
    ++cases;
    if (!ok && failures++ == 0) first_failure = what;
  }
  Check done(std::vector<long long> dims = {}) const {
    Check c;
    c.name = name;
    c.pass = failures == 0 && cases > 0;
    c.residual = failures;
    c.dims = dims.empty() ? std::vector<long long>{cases} : std::move(dims);
    c.wall_ms = ms_since(t0);
    c.note = std::to_string(cases) + " cases";
    if (failures) c.note += "; first failure: " + first_failure;
    return c;
  }
};

Check single_check(std::string name, bool pass, Clock::time_point t0, std::string note = {},
                   std::vector<long long> dims = {}) {
  Check c;
  c.name = std::move(name);
  c.pass = pass;
  c.residual = pass ? 0 : 1;
  c.dims = std::move(dims);
  c.wall_ms = ms_since(t0);
  c.note = std::move(note);
  return c;
}

bool is_identity(const FFMatrix& m) { return m.rows() == m.cols() && m == FFMatrix::identity(m.field(), m.rows()); }

FFMatrix inverse(const FFMatrix& g) {
  std::vector<SparseVec> cols;
  for (int c = 0; c < g.cols(); ++c) cols.push_back(*solve(g, SparseVec{{c, 1}}));
  return FFMatrix::from_columns(g.field(), g.rows(), std::move(cols));
}

std::string describe(const NComplex& C) {
  std::ostringstream os;
  os << "N=" << C.N() << " dims=[";
  for (int k = 0; k < C.length(); ++k) os << (k ? "," : "") << C.dim(k);
  os << "]";
  return os.str();
}

}  // namespace

bool SuiteResult::pass() const {
  if (refused || checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

NComplex random_ncomplex(FieldPtr F, int N, int length, int max_dim, std::mt19937_64& rng) {
  std::vector<int> dims(length, 0);
  std::vector<std::vector<Triplet>> d(length);
  std::uniform_int_distribution<int> start(0, std::max(0, length - 1));
  std::uniform_int_distribution<int> span(1, N);
  for (int attempt = 0; attempt < 4 * length * max_dim; ++attempt) {
    const int a = start(rng);
    const int l = std::min(span(rng), length - a);
    bool fits = true;
    for (int i = a; i < a + l; ++i) fits = fits && dims[i] < max_dim;
    if (!fits) continue;
    int prev = -1;
    for (int i = a; i < a + l; ++i) {
      const int idx = dims[i]++;
      if (prev >= 0) d[i - 1].push_back({idx, prev, 1});
      prev = idx;
    }
  }
  std::vector<FFMatrix> change, change_inv;
  for (int i = 0; i < length; ++i) {
    change.push_back(dims[i] ? random_invertible(F, dims[i], rng) : FFMatrix(F, 0, 0));
    change_inv.push_back(inverse(change.back()));
  }
  std::vector<FFMatrix> diffs;
  for (int i = 0; i < length; ++i) {
    const int rows = i + 1 < length ? dims[i + 1] : 0;
    FFMatrix di = FFMatrix::from_triplets(F, rows, dims[i], d[i]);
    if (i + 1 < length) di = change[i + 1] * di * change_inv[i];
    diffs.push_back(std::move(di));
  }
  return NComplex(std::move(F), N, std::move(dims), std::move(diffs));
}

// ---------------------------------------------------------------------------

SuiteResult suite_pcomplex(const SuiteConfig& c) {
  SuiteResult r;
  r.name = "pcomplex";
  const int total = c.cases > 0 ? c.cases : 1000;
  std::mt19937_64 rng(c.seed);
  const int primes[] = {2, 3, 5};
  Tally nil{"d^p = 0 on tensor_p(C, D)"}, tl{"contract(tilde(K), s) = K for every s"},
      et{"eta is a chain map tilde(C_[1]) -> C"}, Hm{"H_map is a chain map"}, hm{"h_map is a chain map"},
      hp{"h restricted to p(C, D) is the identity"}, h01{"h^0 and h^1 are identities"};
  for (int t = 0; t < total; ++t) {
    const int p = primes[t % 3];
    auto F = Field::get(p);
    std::uniform_int_distribution<int> len(1, 3 * p), dim(1, 5);
    const NComplex C = random_ncomplex(F, p, len(rng), dim(rng), rng);
    const NComplex D = random_ncomplex(F, p, len(rng), dim(rng), rng);
    const std::string what = "p=" + std::to_string(p) + " C " + describe(C) + " D " + describe(D);
    const NComplex T = tensor_p(C, D);
    nil.record(T.nilpotent(), what);
    const BasedComplex K = contract(C, 1), L = contract(D, 1);
    const NComplex tK = tilde(K, p);
    bool ok = tK.nilpotent();
    for (int s = 1; s < p; ++s) ok = ok && contract(tK, s) == K;
    tl.record(ok, what);
    et.record(is_chain_map(eta(C), tilde(K, p), C), what);
    const BasedComplex ord = tensor_ord(K, L);
    Hm.record(is_chain_map(H_map(K, L, p), ord, contract(tensor_p(tK, tilde(L, p)), 1)), what);
    const ChainMap h = h_map(C, D);
    hm.record(is_chain_map(h, ord, contract(T, 1)), what);
    const PEmbeddings E = p_embed(C, D);
    ok = true;
    for (std::size_t j = 0; j < E.into_ord.maps.size() && j < h.f.size(); ++j)
      ok = ok && h.f[j] * E.into_ord.maps[j] == E.into_p.maps[j];
    hp.record(ok, what);
    h01.record((ord.length() < 1 || is_identity(h.f[0])) && (ord.length() < 2 || is_identity(h.f[1])), what);
  }
  for (const Tally* x : {&nil, &tl, &et, &Hm, &hm, &hp, &h01}) r.checks.push_back(x->done());
  return r;
}

SuiteResult suite_troesch(const SuiteConfig& c) {
  SuiteResult r;
  r.name = "troesch";
  for (int p : {2, 3}) {
    auto F = Field::get(p);
    for (int m = 1; m <= 2 * p; ++m) {
      const auto t0 = Clock::now();
      const TroeschReport rep = verify_troesch(F, m, p, {1, 2, 3});
      const std::string label = "B_" + std::to_string(m) + " p=" + std::to_string(p);
      for (const auto& row : rep.rows)
        r.homology_tables.emplace_back(label + " dim=" + std::to_string(row.n) + " s=" + std::to_string(row.s),
                                       row.homology);
      r.checks.push_back(single_check(label + (m % p == 0 ? ": homology S^{m/p} in degree 0" : ": exact"), rep.pass,
                                      t0, rep.detail, {static_cast<long long>(rep.rows.size())}));
    }
  }
  (void)c;
  return r;
}

SuiteResult suite_bar(const SuiteConfig& c) {
  SuiteResult r;
  r.name = "bar";
  for (int p : {2, 3}) {
    auto F = Field::get(p);
    for (int d = 1; d <= 4; ++d) {
      auto t0 = Clock::now();
      const TwistComplex J = build_Jd(F, d);
      const std::string label = "J_" + std::to_string(d) + " p=" + std::to_string(p);
      bool objects = J.objects.at(0).terms == std::vector<std::vector<int>>{std::vector<int>(d, 1)};
      if (d >= 2) {
        objects = objects && static_cast<int>(J.objects.at(1).terms.size()) == d - 1;
        for (const auto& t : J.objects.at(1).terms) objects = objects && t == std::vector<int>(d, 1);
        for (int k = 0; k + 1 < d && objects; ++k) {
          OuterWord w(d - 1, InnerWord{1});
          w[k] = InnerWord{1, 1};
          objects = J.words.at(1).at(k) == w;
        }
      }
      r.checks.push_back(single_check(label + ": degree 0 and 1 objects", objects, t0));
      if (d >= 2) {
        t0 = Clock::now();
        // Stack of (1 - tau_k) on (x)^d evaluated at dimension d.
        const int n = d;
        const std::vector<FunctorExpr> ones(d, fx::sym(1));
        const int N = eval_dim(fx::tensor_power(d), n);
        std::vector<Triplet> t;
        for (int k = 0; k + 1 < d; ++k) {
          std::vector<int> sigma(d);
          for (int i = 0; i < d; ++i) sigma[i] = i;
          std::swap(sigma[k], sigma[k + 1]);
          (FFMatrix::identity(F, N) - eval_nat(nat::perm(sigma, ones), F, n)).for_each([&](int a, int b, fe v) {
            t.push_back({k * N + a, b, v});
          });
        }
        const FFMatrix expected = FFMatrix::from_triplets(F, (d - 1) * N, N, std::move(t));
        r.checks.push_back(single_check(label + ": first differential is prod (1 - tau_k) at dimension d",
                                        eval_symhom(J.diffs.at(0), n) == expected, t0, {}, {N}));
      }
      if (d <= 3) {
        t0 = Clock::now();
        const JdReport rep = verify_Jd(F, d, {1, 2, 3});
        for (const auto& row : rep.rows) r.homology_tables.emplace_back(label + " dim=" + std::to_string(row.n), row.homology);
        r.checks.push_back(single_check(label + ": homology Gamma^d in degree 0 only", rep.pass, t0, rep.detail));
      }
    }
  }
  (void)c;
  return r;
}

SuiteResult suite_twist(const SuiteConfig& c) {
  SuiteResult r;
  r.name = "twist";
  std::mt19937_64 rng(c.seed);
  for (int p : {2, 3}) {
    auto F = Field::get(p);
    auto single = [&](std::vector<int> l, std::vector<int> m, const Pattern& M) {
      return SymHom{F, SymSum{{std::move(l)}}, SymSum{{std::move(m)}}, {{0, 0, M, 1}}};
    };
    for (int d = 1; d <= 3; ++d) {
      auto t0 = Clock::now();
      const TwistComplex J = build_Jd(F, d);
      const std::string label = "J_" + std::to_string(d) + " p=" + std::to_string(p);
      std::vector<SymHom> lifts;
      bool all = true;
      for (const auto& h : J.diffs) {
        const LiftResult lr = twist_lift_checked(h);
        all = all && lr.check.pass() && lr.lift.has_value();
        if (lr.lift) lifts.push_back(*lr.lift);
      }
      r.checks.push_back(single_check(label + ": every differential lifts", all, t0, {},
                                      {static_cast<long long>(J.diffs.size())}));
      if (!all) continue;
      t0 = Clock::now();
      bool laws = true;
      for (std::size_t k = 0; k + 1 < lifts.size(); ++k) laws = laws && sym_compose(lifts[k + 1], lifts[k]).is_zero();
      for (std::size_t k = 0; k < lifts.size(); ++k) {
        const fe s = static_cast<fe>(std::uniform_int_distribution<std::uint32_t>(1, F->q() - 1)(rng));
        const auto ls = twist_lift(sym_add(sym_scale(s, J.diffs[k]), J.diffs[k]));
        laws = laws && ls && sym_equal(*ls, sym_add(sym_scale(s, lifts[k]), lifts[k]));
      }
      r.checks.push_back(single_check(label + ": lifts compose to zero and are linear", laws, t0));
    }
    auto t0 = Clock::now();
    const SymHom mul = single({1, 1}, {2}, Pattern{{1}, {1}});
    const SymHom tau = single({1, 1}, {1, 1}, Pattern{{0, 1}, {1, 0}});
    const auto lm = twist_lift(mul), lt = twist_lift(tau), lmt = twist_lift(sym_compose(mul, tau));
    const bool comp = lm && lt && lmt && sym_equal(*lmt, sym_compose(*lm, *lt)) &&
                      sym_equal(*lm, single({p, p}, {2 * p}, Pattern{{p}, {p}}));
    r.checks.push_back(single_check("p=" + std::to_string(p) + ": lift(mul o tau) = lift(mul) o lift(tau)", comp, t0));
  }
  const auto t0 = Clock::now();
  auto F2 = Field::get(2);
  const auto comul = twist_lift_checked(SymHom{F2, SymSum{{{2}}}, SymSum{{{1, 1}}}, {{0, 0, Pattern{{1, 1}}, 1}}});
  r.checks.push_back(single_check("comultiplication S^2 -> S^1 (x) S^1 is rejected at p=2", !comul.lift.has_value(), t0,
                                  comul.check.detail));
  return r;
}

SuiteResult suite_functor(const SuiteConfig& c) {
  SuiteResult r;
  r.name = "functor";
  const int total = c.cases > 0 ? c.cases : 500;
  std::mt19937_64 rng(c.seed);
  auto random_matrix = [&](const FieldPtr& F, int rows, int cols) {
    std::uniform_int_distribution<std::uint32_t> pick(0, F->q() - 1);
    std::vector<Triplet> t;
    for (int a = 0; a < rows; ++a)
      for (int b = 0; b < cols; ++b) t.push_back({a, b, pick(rng)});
    return FFMatrix::from_triplets(F, rows, cols, std::move(t));
  };
  const std::vector<std::pair<int, int>> fields{{2, 1}, {3, 1}, {5, 1}, {2, 2}, {3, 2}};
  Tally fun{"functoriality G(gf) = G(g)G(f), G(1) = 1"}, nat_t{"naturality of the implemented natural maps"};
  std::uniform_int_distribution<int> dim(0, 3), pos(1, 3);
  for (int t = 0; t < total; ++t) {
    const auto [p, e] = fields[t % fields.size()];
    auto F = Field::get(p, e);
    const std::vector<FunctorExpr> functors{fx::id(),         fx::sym(2),  fx::sym(3),  fx::gamma(2),
                                            fx::gamma(3),     fx::ext(2),  fx::tensor({fx::sym(2), fx::id()}),
                                            fx::sum({fx::sym(2), fx::gamma(2), fx::ext(2)}),
                                            fx::compose(fx::sym(2), fx::gamma(2)),
                                            fx::twist(p, 1, fx::sym(2)), fx::compose(fx::sym(2), fx::sumpower(p))};
    const FunctorExpr& G = functors[t % functors.size()];
    const int a = dim(rng), b = dim(rng), cc = dim(rng);
    const FFMatrix f = random_matrix(F, b, a), g = random_matrix(F, cc, b);
    fun.record(eval_map(G, g * f) == eval_map(G, g) * eval_map(G, f) &&
                   eval_map(G, FFMatrix::identity(F, a)) == FFMatrix::identity(F, eval_dim(G, a)),
               to_sexpr(G));
    const std::vector<NatMap> maps{nat::mul(1, 2),
                                   nat::comul(2, 1),
                                   nat::perm({1, 0, 2}, {fx::sym(2), fx::id(), fx::gamma(2)}),
                                   nat::frob_incl(p, {1, 2}),
                                   nat::powmul(p, 2),
                                   nat::diag_gamma({1, 2}),
                                   nat::tens({nat::mul(1, 1), nat::identity(fx::id())}),
                                   nat::comp(nat::mul(1, 1), nat::comul(1, 1))};
    const NatMap& u = maps[t % maps.size()];
    const FFMatrix h = random_matrix(F, pos(rng), pos(rng));
    nat_t.record(eval_nat(u, F, h.rows()) * eval_map(u->source, h) == eval_map(u->target, h) * eval_nat(u, F, h.cols()),
                 to_sexpr(u));
  }
  r.checks.push_back(fun.done());
  r.checks.push_back(nat_t.done());
  Tally dims{"dimension counts match binomial formulas"};
  for (int n = 0; n <= 5; ++n)
    for (int d = 0; d <= 4; ++d) {
      const std::string at = "n=" + std::to_string(n) + " d=" + std::to_string(d);
      long long pw = 1;
      for (int i = 0; i < d; ++i) pw *= n;
      if (d >= 1) {
        dims.record(eval_dim(fx::sym(d), n) == binomial(n + d - 1, d), "sym " + at);
        dims.record(eval_dim(fx::gamma(d), n) == binomial(n + d - 1, d), "gamma " + at);
        dims.record(eval_dim(fx::ext(d), n) == binomial(n, d), "ext " + at);
        dims.record(eval_dim(fx::tensor_power(d), n) == pw, "tensor " + at);
        dims.record(eval_dim(fx::twist(2, 1, fx::sym(d)), n) == binomial(n + d - 1, d), "twist " + at);
      }
    }
  r.checks.push_back(dims.done());
  return r;
}

SuiteResult suite_c1(const SuiteConfig& c) {
  SuiteResult r;
  r.name = "c1";
  const int n = c.n.value_or(c.p);
  const auto t0 = Clock::now();
  const FieldPtr K = Field::of_order(c.q.value_or(minimal_order(c.p, c.p)));
  const InvariantOptions opt{c.cache};
  const InvariantComplex IC = c1_invariant_complex(c.p, n, K, opt);
  const auto h = IC.homology();
  std::vector<long long> dims;
  for (const auto& b : IC.basis) dims.push_back(static_cast<long long>(b.size()));
  r.homology_tables.emplace_back("invariant homology of (A_1)_[1](gl_" + std::to_string(n) + ") over F_" +
                                     std::to_string(K->q()),
                                 h);
  const int h2 = h.size() > 2 ? h[2] : 0;
  r.checks.push_back(single_check("H^2 of the invariant complex is one-dimensional", h2 == 1, t0,
                                  "dim H^2 = " + std::to_string(h2), dims));
  return r;
}

SuiteResult suite_lifted(const SuiteConfig& c) {
  SuiteResult r;
  r.name = "lifted";
  const int p = c.p, d = c.d, n = c.n.value_or(c.d * c.p);
  auto t0 = Clock::now();
  const Estimate est = estimate_lifted(p, d, n, c.cap);
  r.detail = est.summary;
  if (!est.within && !c.force) {
    r.refused = true;
    r.checks.push_back(single_check("size estimate within cap", false, t0, est.summary + "; rerun with --force"));
    return r;
  }
  r.checks.push_back(single_check("size estimate within cap", true, t0, est.summary,
                                  {static_cast<long long>(est.largest_block)}));
  const FieldPtr K = Field::of_order(c.q.value_or(minimal_order(p, d * p)));
  ComparisonOptions opt;
  opt.invariant_tables = c.invariant_tables;
  opt.invariants.cache = c.cache;

  // z[1] at gl_n, restricted from gl_p when n < p.
  t0 = Clock::now();
  const int n1 = std::max(n, p);
  const CohClass c1 = choose_c1(p, n1, K, opt.invariants);
  SparseVec v1 = c1.representative;
  if (n1 != n) {
    std::vector<Triplet> t;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t.push_back({i * n + j, i * n1 + j, 1});
    const FFMatrix R = FFMatrix::from_triplets(K, n * n, n1 * n1, std::move(t));
    const GlTObject big(T_object(fx::sym(1), p), K, n1), small(T_object(fx::sym(1), p), K, n);
    v1 = big.transport(contracted_degree_position(2, p), v1, R, small);
  }
  r.homology_tables.emplace_back("c1: invariant homology of (A_1)_[1](gl_" + std::to_string(n1) + ")", c1.homology);
  const Cochain z = build_zd(v1, p, d, n, K);
  const CocycleReport cr = verify_cocycle(z, build_Jd(K, d), n, n <= 2);
  r.checks.insert(r.checks.end(), cr.checks.begin(), cr.checks.end());

  const ComparisonReport lr = verify_lift(p, d, n, K, opt);
  r.checks.insert(r.checks.end(), lr.checks.begin(), lr.checks.end());
  for (const auto& tab : lr.homology_tables)
    if (tab.first.rfind("c1", 0) != 0) r.homology_tables.push_back(tab);
  std::ostringstream os;
  os << est.summary << "; q=" << K->q() << "; " << (cr.conclusive ? "conclusive (n >= dp)" : "sound, not conclusive (n < dp)");
  r.detail = os.str();
  return r;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"pcomplex", "troesch", "bar", "twist", "functor", "c1", "lifted"};
  return names;
}

SuiteResult run_suite(const std::string& name, const SuiteConfig& c) {
  if (name == "pcomplex") return suite_pcomplex(c);
  if (name == "troesch") return suite_troesch(c);
  if (name == "bar") return suite_bar(c);
  if (name == "twist") return suite_twist(c);
  if (name == "functor") return suite_functor(c);
  if (name == "c1") return suite_c1(c);
  if (name == "lifted") return suite_lifted(c);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace artifact
