#include "artifact/cohomology.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "artifact/linalg.hpp"
#include "artifact/pcomplex.hpp"
#include "artifact/troesch.hpp"

namespace artifact {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<SparseVec> echelon_basis(const FieldPtr& F, int width, const std::vector<SparseVec>& vs) {
  Echelon E(F, width);
  for (const auto& v : vs) E.insert(v);
  E.make_reduced();
  std::vector<SparseVec> out;
  for (const auto& [lead, row] : E.rows()) out.push_back(row);
  return out;
}

SparseVec unit(int i) { return SparseVec{{i, fe{1}}}; }

SparseVec difference(const Field& F, const SparseVec& a, const SparseVec& b) { return axpy(F, a, F.neg(1), b); }

FFMatrix columns_matrix(const FieldPtr& F, int rows, const std::vector<SparseVec>& cols) {
  return FFMatrix::from_columns(F, rows, cols);
}

std::vector<SparseVec> matrix_columns(const FFMatrix& m) {
  std::vector<SparseVec> out;
  for (int c = 0; c < m.cols(); ++c) out.push_back(m.column(c));
  return out;
}

std::string tuple_key(const SymSum& s) { return to_string(s); }

}  // namespace

// ---------------------------------------------------------------------------
// Modules and invariants

GlModule functor_module(const FunctorExpr& B, FieldPtr K, int n) {
  GlModule M;
  M.F = K;
  M.n = n;
  M.degree = B->degree;
  M.dim = eval_dim(B, n * n);
  M.key = "functor " + to_sexpr(B) + " n=" + std::to_string(n);
  M.act = [B](const FFMatrix& g, const std::vector<SparseVec>& vs) {
    const FFMatrix A = gl_eval(B, g);
    std::vector<SparseVec> out;
    out.reserve(vs.size());
    for (const auto& v : vs) out.push_back(A.apply(v));
    return out;
  };
  return M;
}

std::vector<GroupElement> generator_family(FieldPtr F, int n) {
  std::vector<fe> ts{1};
  if (F->primitive() != 1) ts.push_back(F->primitive());
  for (fe t = 2; t < F->q(); ++t)
    if (t != F->primitive()) ts.push_back(t);
  std::vector<GroupElement> first, rest;
  auto root = [&](int i, int j, fe t) {
    FFMatrix g = FFMatrix::from_triplets(F, n, n, {});
    std::vector<Triplet> tr;
    for (int a = 0; a < n; ++a) tr.push_back({a, a, 1});
    tr.push_back({i, j, t});
    return GroupElement{"e_" + std::to_string(i) + std::to_string(j) + "(" + F->to_string(t) + ")",
                        FFMatrix::from_triplets(F, n, n, std::move(tr))};
  };
  auto diag = [&](fe t) {
    std::vector<Triplet> tr{{0, 0, t}};
    for (int a = 1; a < n; ++a) tr.push_back({a, a, 1});
    return GroupElement{"diag(" + F->to_string(t) + ")", FFMatrix::from_triplets(F, n, n, std::move(tr))};
  };
  for (std::size_t k = 0; k < ts.size(); ++k) {
    auto& dst = k < 2 ? first : rest;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) dst.push_back(root(i, j, ts[k]));
    if (ts[k] != 1) dst.push_back(diag(ts[k]));
  }
  first.insert(first.end(), rest.begin(), rest.end());
  return first;
}

FFMatrix random_invertible(FieldPtr F, int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> pick(0, F->q() - 1);
  for (;;) {
    std::vector<Triplet> t;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) t.push_back({r, c, pick(rng)});
    FFMatrix g = FFMatrix::from_triplets(F, n, n, std::move(t));
    if (rank(g) == n) return g;
  }
}

bool admissible_order(std::uint32_t q, int degree) {
  return static_cast<long long>(q) - 1 > 4LL * degree;
}

std::uint32_t minimal_order(int p, int degree) {
  std::uint32_t q = static_cast<std::uint32_t>(p);
  while (!admissible_order(q, degree)) q *= static_cast<std::uint32_t>(p);
  return q;
}

std::vector<SparseVec> invariants(const GlModule& M, const InvariantOptions& opt) {
  if (!admissible_order(M.F->q(), M.degree))
    throw std::invalid_argument("invariants: field of order " + std::to_string(M.F->q()) + " too small for degree " +
                                std::to_string(M.degree) + "; need q - 1 > " + std::to_string(4 * M.degree) +
                                ", e.g. q = " + std::to_string(minimal_order(M.F->p(), M.degree)));
  const std::string key = M.key.empty() ? std::string() : "invariants " + M.key + " q=" + std::to_string(M.F->q());
  if (opt.cache && !key.empty())
    if (auto hit = opt.cache->get(key)) return matrix_columns(deserialize_matrix(*hit));
  const Field& F = *M.F;
  std::vector<SparseVec> W;
  const bool weighted = !M.weights.empty();
  for (int i = 0; i < M.dim; ++i) {
    if (weighted && std::any_of(M.weights[i].begin(), M.weights[i].end(), [](int w) { return w != 0; })) continue;
    W.push_back(unit(i));
  }
  for (const auto& g : generator_family(M.F, M.n)) {
    if (W.empty()) break;
    const auto img = M.act(g.g, W);
    std::vector<SparseVec> cols(W.size());
    bool moved = false;
    for (std::size_t i = 0; i < W.size(); ++i) {
      cols[i] = difference(F, img[i], W[i]);
      moved = moved || !cols[i].empty();
    }
    if (!moved) continue;
    const auto kr = kernel_rank(columns_matrix(M.F, M.dim, cols));
    std::vector<SparseVec> next;
    next.reserve(kr.kernel_basis.size());
    for (const auto& k : kr.kernel_basis) next.push_back(combine(W, k, F));
    W = std::move(next);
  }
  auto basis = echelon_basis(M.F, M.dim, W);
  if (opt.cache && !key.empty()) opt.cache->put(key, serialize(columns_matrix(M.F, M.dim, basis)));
  return basis;
}

std::vector<SparseVec> invariants_reference(const GlModule& M) {
  if (!admissible_order(M.F->q(), M.degree)) throw std::invalid_argument("invariants_reference: field too small");
  std::vector<SparseVec> all;
  for (int i = 0; i < M.dim; ++i) all.push_back(unit(i));
  std::vector<FFMatrix> ms;
  const FFMatrix I = FFMatrix::identity(M.F, M.dim);
  for (const auto& g : generator_family(M.F, M.n)) ms.push_back(columns_matrix(M.F, M.dim, M.act(g.g, all)) - I);
  return echelon_basis(M.F, M.dim, common_kernel(ms, M.dim, M.F));
}

SparseVec echelon_coordinates(const std::vector<SparseVec>& basis, const SparseVec& v, const Field& F) {
  SparseVec coords;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const fe c = coefficient(v, basis[i].front().first);
    if (c) coords.emplace_back(static_cast<int>(i), c);
  }
  if (combine(basis, coords, F) != v) throw std::domain_error("vector outside the span of the echelon basis");
  return coords;
}

SparseVec combine(const std::vector<SparseVec>& basis, const SparseVec& coords, const Field& F) {
  SparseVec out;
  for (const auto& [i, c] : coords) out = axpy(F, out, c, basis[i]);
  return out;
}

InvariantComplex invariant_complex(const std::vector<GlModule>& modules, const VectorDifferential& diff,
                                   const InvariantOptions& opt) {
  InvariantComplex IC;
  const FieldPtr F = modules.empty() ? Field::get(2) : modules.front().F;
  for (const auto& M : modules) IC.basis.push_back(invariants(M, opt));
  std::vector<int> dims;
  std::vector<FFMatrix> d;
  for (std::size_t k = 0; k < modules.size(); ++k) {
    dims.push_back(static_cast<int>(IC.basis[k].size()));
    if (k + 1 == modules.size()) break;
    std::vector<SparseVec> cols;
    for (const auto& b : IC.basis[k]) cols.push_back(echelon_coordinates(IC.basis[k + 1], diff(static_cast<int>(k), b), *F));
    d.push_back(columns_matrix(F, static_cast<int>(IC.basis[k + 1].size()), cols));
  }
  IC.induced = make_complex(F, std::move(dims), std::move(d));
  return IC;
}

VectorDifferential matrix_differential(const BasedComplex& C) {
  return [&C](int k, const SparseVec& v) { return C.d(k).apply(v); };
}

// ---------------------------------------------------------------------------
// T objects over gl_n

GlTObject::GlTObject(TObject T, FieldPtr K, int n)
    : T_(std::move(T)), K_(std::move(K)), n_(n), factors_(std::make_shared<std::map<int, NComplex>>()) {
  if (static_cast<int>(K_->p()) != T_.p) throw std::invalid_argument("GlTObject: field characteristic differs from p");
  spaces_ = T_.spaces(N());
  for (const auto& t : T_.flat.terms) {
    int deg = 0;
    for (int x : t) deg += x * T_.p;
    degree_ = std::max(degree_, deg);
  }
}

int GlTObject::length() const {
  int len = 0;
  for (const auto& s : spaces_) len = std::max(len, s.length());
  return len;
}

int GlTObject::dim(int k) const {
  int d = 0;
  for (const auto& s : spaces_) d += s.dim(k);
  return d;
}

std::pair<int, MonoTuple> GlTObject::element(int k, int i) const {
  int s = 0;
  while (i >= spaces_[s].dim(k)) i -= spaces_[s++].dim(k);
  return {s, spaces_[s].element(k, i)};
}

int GlTObject::index(int summand, const MonoTuple& x) const {
  const int k = spaces_[summand].degree(x);
  int off = 0;
  for (int s = 0; s < summand; ++s) off += spaces_[s].dim(k);
  return off + spaces_[summand].index(x);
}

const NComplex& GlTObject::factor_complex(int m) const {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = factors_->find(m);
  if (it == factors_->end()) it = factors_->emplace(m, build_troesch(K_, m, T_.p, N())).first;
  return it->second;
}

SparseVec GlTObject::d(int k, const SparseVec& v) const {
  std::vector<std::pair<int, fe>> raw;
  for (const auto& [i, c] : v) {
    const auto [s, x] = element(k, i);
    const auto& fs = spaces_[s].factors();
    for (std::size_t f = 0; f < fs.size(); ++f) {
      if (fs[f] == 0) continue;
      const auto TF = troesch_factor(T_.p, fs[f], N());
      const int kf = TF->degree(x[f]);
      for (const auto& [r, val] : factor_complex(fs[f]).d(kf).column(TF->index(kf, x[f]))) {
        MonoTuple y = x;
        y[f] = TF->element(kf + 1, r);
        raw.emplace_back(index(s, y), K_->mul(c, val));
      }
    }
  }
  return normalize_vec(*K_, std::move(raw));
}

SparseVec GlTObject::d_power(int k, int r, const SparseVec& v) const {
  SparseVec out = v;
  for (int i = 0; i < r; ++i) out = d(k + i, out);
  return out;
}

SparseVec GlTObject::image_of_basis(int k, int i, const std::vector<SparseVec>& columns, const GlTObject& target) const {
  const auto [s, x] = element(k, i);
  const int Ns = N(), Nt = target.N();
  std::map<MonoTuple, fe> states{{MonoTuple(x.size()), fe{1}}};
  for (std::size_t f = 0; f < x.size(); ++f)
    for (int v : x[f]) {
      const int slot = v / Ns, coord = v % Ns;
      std::map<MonoTuple, fe> next;
      for (const auto& [partial, coef] : states)
        for (const auto& [c2, a] : columns[coord]) {
          MonoTuple y = partial;
          const int var = slot * Nt + c2;
          y[f].insert(std::upper_bound(y[f].begin(), y[f].end(), var), var);
          fe& slot_coef = next[y];
          slot_coef = K_->add(slot_coef, K_->mul(coef, a));
        }
      states.clear();
      for (auto& [y, c] : next)
        if (c) states.emplace(y, c);
    }
  std::vector<std::pair<int, fe>> raw;
  for (const auto& [y, c] : states) raw.emplace_back(target.index(s, y), c);
  return normalize_vec(*K_, std::move(raw));
}

SparseVec GlTObject::transport(int k, const SparseVec& v, const FFMatrix& A, const GlTObject& target) const {
  if (A.cols() != N() || A.rows() != target.N()) throw std::invalid_argument("transport: map shape");
  const auto cols = matrix_columns(A);
  SparseVec out;
  for (const auto& [i, c] : v) out = axpy(*K_, out, c, image_of_basis(k, i, cols, target));
  return out;
}

SparseVec GlTObject::act(int k, const FFMatrix& g, const SparseVec& v) const {
  return transport(k, v, conj_matrix(g), *this);
}

std::vector<int> GlTObject::weight(int k, int i) const {
  const auto [s, x] = element(k, i);
  std::vector<int> w(n_, 0);
  for (const auto& m : x)
    for (int v : m) {
      const int c = v % N();
      ++w[c / n_];
      --w[c % n_];
    }
  return w;
}

GlModule GlTObject::module(int k) const {
  auto self = std::make_shared<const GlTObject>(*this);
  GlModule M;
  M.F = K_;
  M.n = n_;
  M.degree = degree_;
  M.dim = dim(k);
  M.key = "T " + tuple_key(T_.flat) + " p=" + std::to_string(T_.p) + " n=" + std::to_string(n_) + " k=" + std::to_string(k);
  for (int i = 0; i < M.dim; ++i) M.weights.push_back(weight(k, i));
  M.act = [self, k](const FFMatrix& g, const std::vector<SparseVec>& vs) {
    const auto cols = matrix_columns(conj_matrix(g));
    std::vector<int> support;
    for (const auto& v : vs)
      for (const auto& [i, c] : v) support.push_back(i);
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    std::vector<SparseVec> images(support.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t j = 0; j < support.size(); ++j) images[j] = self->image_of_basis(k, support[j], cols, *self);
    std::unordered_map<int, std::size_t> where;
    for (std::size_t j = 0; j < support.size(); ++j) where.emplace(support[j], j);
    std::vector<SparseVec> out;
    out.reserve(vs.size());
    for (const auto& v : vs) {
      SparseVec w;
      for (const auto& [i, c] : v) w = axpy(*self->field(), w, c, images[where.at(i)]);
      out.push_back(std::move(w));
    }
    return out;
  };
  return M;
}

NComplex GlTObject::assemble(bool keyed) const {
  return T_.evaluate(K_, N(), keyed ? unit_coordinate_keys(N()) : std::vector<BlockKey>{});
}

int contracted_degree_position(int j, int p) { return contracted_position(j, p, 1); }
int contracted_step(int j, int p) { return contracted_position(j + 1, p, 1) - contracted_position(j, p, 1); }

// ---------------------------------------------------------------------------
// c[1]

namespace {

int contracted_length(int length, int p) {
  int count = 0;
  while (contracted_degree_position(count, p) < length) ++count;
  return count;
}

// Modules and differential of the contraction at s = 1 of a T object over gl_n.
struct ContractedInvariantInput {
  std::vector<GlModule> modules;
  VectorDifferential diff;
};
ContractedInvariantInput contracted_input(const GlTObject& A, int max_degree) {
  const int p = A.p();
  const int len = std::min(contracted_length(A.length(), p), max_degree + 1);
  ContractedInvariantInput in;
  for (int j = 0; j < len; ++j) in.modules.push_back(A.module(contracted_degree_position(j, p)));
  auto self = std::make_shared<const GlTObject>(A);
  in.diff = [self, p](int j, const SparseVec& v) {
    return self->d_power(contracted_degree_position(j, p), contracted_step(j, p), v);
  };
  return in;
}

}  // namespace

InvariantComplex c1_invariant_complex(int p, int n, FieldPtr K, const InvariantOptions& opt) {
  const GlTObject A(T_object(fx::sym(1), p), std::move(K), n);
  const auto in = contracted_input(A, 1 << 20);
  return invariant_complex(in.modules, in.diff, opt);
}

CohClass choose_c1(int p, int n, FieldPtr K, const InvariantOptions& opt) {
  const InvariantComplex IC = c1_invariant_complex(p, n, K, opt);
  CohClass out;
  out.p = p;
  out.n = n;
  out.degree = 2;
  out.q = K->q();
  for (const auto& b : IC.basis) out.invariant_dims.push_back(static_cast<int>(b.size()));
  out.homology = IC.homology();
  if (out.homology.size() < 3 || out.homology[2] != 1) {
    std::ostringstream os;
    os << "choose_c1: H^2 of the invariant complex has dimension "
       << (out.homology.size() < 3 ? 0 : out.homology[2]) << ", expected 1 (p=" << p << ", n=" << n << ")";
    throw std::runtime_error(os.str());
  }
  const auto cycles = kernel_rank(IC.induced.d(2)).kernel_basis;
  Echelon boundaries(K, IC.induced.dim(2));
  for (const auto& col : matrix_columns(IC.induced.d(1))) boundaries.insert(col);
  for (const auto& z : cycles)
    if (!boundaries.contains(z)) {
      out.representative = combine(IC.basis[2], z, *K);
      return out;
    }
  throw std::logic_error("choose_c1: no cycle outside the boundaries");
}

// ---------------------------------------------------------------------------
// z[d] and the cocycle checks


Cochain build_zd(const SparseVec& z1, int p, int d, int n, const FieldPtr& K) {
  const int N = n * n;
  const TroeschSpace S1(p, {p}, N);
  const TroeschSpace Sd(p, std::vector<int>(d, p), N);
  std::vector<std::pair<Monomial, fe>> parts;
  for (const auto& [i, c] : z1) parts.emplace_back(S1.element(p, i)[0], c);
  std::vector<std::pair<int, fe>> raw;
  MonoTuple x(d);
  std::vector<std::size_t> pick(d, 0);
  if (!parts.empty())
    for (;;) {
      fe c = 1;
      for (int f = 0; f < d; ++f) {
        x[f] = parts[pick[f]].first;
        c = K->mul(c, parts[pick[f]].second);
      }
      raw.emplace_back(Sd.index(x), c);
      int f = d - 1;
      while (f >= 0 && ++pick[f] == parts.size()) pick[f--] = 0;
      if (f < 0) break;
    }
  return Cochain{0, 2 * d, normalize_vec(*K, std::move(raw))};
}

namespace {

int tuple_length(const TwistComplex& J) { return static_cast<int>(J.objects.at(0).terms.at(0).size()); }

// tau_k on (x)^d as a symmetric-tensor map.
SymHom transposition(const FieldPtr& K, int d, int k) {
  Pattern P(d, std::vector<int>(d, 0));
  for (int r = 0; r < d; ++r) P[r][r == k ? k + 1 : (r == k + 1 ? k : r)] = 1;
  const SymSum ones{{std::vector<int>(d, 1)}};
  return SymHom{K, ones, ones, {{0, 0, P, 1}}};
}

Check make_check(std::string name, const SparseVec& residual, std::vector<long long> dims, Clock::time_point t0,
                 std::string note = {}) {
  Check c;
  c.name = std::move(name);
  c.residual = static_cast<long long>(residual.size());
  c.pass = residual.empty();
  c.dims = std::move(dims);
  c.wall_ms = ms_since(t0);
  c.note = std::move(note);
  return c;
}

Check flag_check(std::string name, bool pass, std::vector<long long> dims, Clock::time_point t0, std::string note = {}) {
  Check c;
  c.name = std::move(name);
  c.pass = pass;
  c.residual = pass ? 0 : 1;
  c.dims = std::move(dims);
  c.wall_ms = ms_since(t0);
  c.note = std::move(note);
  return c;
}

}  // namespace

CocycleReport verify_cocycle(const Cochain& z, const TwistComplex& J, int n, bool assembled) {
  const FieldPtr& K = J.F;
  const int p = static_cast<int>(K->p());
  const int d = tuple_length(J);
  CocycleReport rep;
  rep.conclusive = n >= d * p;
  const std::string scope = rep.conclusive ? "conclusive" : "sound, not conclusive";
  const GlTObject A0(T_object(J.objects[0], p), K, n);
  const int pos = contracted_degree_position(z.row, p);
  const int step = contracted_step(z.row, p);

  auto t0 = Clock::now();
  SparseVec vertical;
  const bool top = pos + step >= A0.length();
  if (!top) vertical = A0.d_power(pos, step, z.vec);
  rep.checks.push_back(make_check("vertical differential kills z[" + std::to_string(d) + "]", vertical,
                                  {A0.dim(pos), top ? 0 : A0.dim(pos + step)}, t0,
                                  top ? scope + "; target degree is zero" : scope));

  SparseVec horizontal;
  std::optional<TMapAction> h0;
  if (!J.diffs.empty()) {
    t0 = Clock::now();
    const auto lift = twist_lift(J.diffs[0]);
    if (!lift) {
      rep.checks.push_back(flag_check("first differential lifts", false, {}, t0, scope));
    } else {
      h0.emplace(*lift, n * n);
      horizontal = h0->apply(pos, z.vec);
      rep.checks.push_back(make_check("horizontal differential kills z[" + std::to_string(d) + "]", horizontal,
                                      {h0->source_dim(pos), h0->target_dim(pos)}, t0, scope));
    }
  }
  for (int k = 0; k + 1 < d; ++k) {
    t0 = Clock::now();
    const auto lift = twist_lift(transposition(K, d, k));
    SparseVec res{{0, 1}};
    if (lift) res = difference(*K, TMapAction(*lift, n * n).apply(pos, z.vec), z.vec);
    rep.checks.push_back(make_check("tau_" + std::to_string(k) + " fixes z[" + std::to_string(d) + "]", res,
                                    {A0.dim(pos)}, t0, scope));
  }
  if (assembled) {
    t0 = Clock::now();
    const Bicomplex B = build_A(J, n, std::min(2, J.length()));
    const SparseVec v2 = B.columns[0].d(z.row).apply(z.vec);
    bool agree = v2 == vertical;
    SparseVec residual = v2;
    if (!B.horizontal.empty()) {
      const SparseVec h2 = B.horizontal[0].at(K, z.row, B.columns[1].dim(z.row), B.columns[0].dim(z.row)).apply(z.vec);
      agree = agree && h2 == horizontal;
      residual.insert(residual.end(), h2.begin(), h2.end());
    }
    Check c = make_check("assembled bicomplex kills z[" + std::to_string(d) + "]", residual,
                         {B.columns[0].dim(z.row)}, t0, scope);
    if (!agree) {
      c.pass = false;
      c.note += "; assembled matrices disagree with the vector-level maps";
    }
    rep.checks.push_back(std::move(c));
  }
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

SparseVec cup(const SparseVec& x, const NComplex& K, int a, const SparseVec& y, const NComplex& L, int b) {
  const TensorLayout t = tensor_layout(K, L);
  const int off = t.offset(a + b, a);
  if (off < 0) return {};
  const int width = L.dim(b);
  const Field& F = *K.field();
  std::vector<std::pair<int, fe>> raw;
  for (const auto& [i, c] : x)
    for (const auto& [j, e] : y) raw.emplace_back(off + i * width + j, F.mul(c, e));
  return normalize_vec(F, std::move(raw));
}

namespace {

// Projection gl_m -> gl_n onto the top-left block, n <= m.
FFMatrix corner_restriction(const FieldPtr& K, int m, int n) {
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t.push_back({i * n + j, i * m + j, 1});
  return FFMatrix::from_triplets(K, n * n, m * m, std::move(t));
}

int degree_homology(const BasedComplex& C, int k) {
  if (k >= C.length()) return 0;
  return C.has_keys() ? blocked_homology_dim_parallel(C, k) : homology(C, k, false).dim;
}

}  // namespace

ComparisonReport verify_lift(int p, int d, int n, FieldPtr K, const ComparisonOptions& opt) {
  if (static_cast<int>(K->p()) != p) throw std::invalid_argument("verify_lift: field characteristic differs from p");
  if (d < 1) throw std::invalid_argument("verify_lift: d >= 1");
  ComparisonReport rep;
  rep.conclusive = n >= d * p;
  const std::string scope = rep.conclusive ? "conclusive" : "sound, not conclusive";
  const int N = n * n;

  auto t0 = Clock::now();
  SparseVec v1;
  {
    const int n1 = std::max(n, p);
    const CohClass c1 = choose_c1(p, n1, K, opt.invariants);
    v1 = c1.representative;
    if (n1 != n) {
      const GlTObject big(T_object(fx::sym(1), p), K, n1), small(T_object(fx::sym(1), p), K, n);
      v1 = big.transport(p, v1, corner_restriction(K, n1, n), small);
    }
    rep.homology_tables.emplace_back("c1 invariant complex n=" + std::to_string(n1), c1.homology);
    rep.checks.push_back(flag_check("H^2 of invariants of (A_1)_[1] is one-dimensional", true,
                                    {c1.invariant_dims.begin(), c1.invariant_dims.end()}, t0,
                                    n1 == n ? "" : "representative restricted from n=" + std::to_string(n1)));
  }

  const bool keyed = N <= 16;
  const NComplex C = build_troesch(K, p, p, N, keyed ? unit_coordinate_keys(N) : std::vector<BlockKey>{});
  const BasedComplex C1 = contract(C, 1);
  const Cochain z = build_zd(v1, p, d, n, K);

  t0 = Clock::now();
  NComplex P = C;
  BasedComplex L = C1;
  SparseVec w = v1, cupv = v1;
  bool cup_cycle = true, h_identity = true;
  for (int i = 2; i <= d; ++i) {
    const BasedComplex Pc = contract(P, 1);
    const SparseVec x = cup(w, Pc, 2 * (i - 1), v1, C1, 2);
    const ChainMap H = h_map(P, C);
    if (i == 2) {
      const PEmbeddings E = p_embed(P, C);
      h_identity = H.f[4] * E.into_ord.maps[4] == E.into_p.maps[4];
    }
    w = H.f[2 * i].apply(x);
    cupv = cup(cupv, L, 2 * (i - 1), v1, C1, 2);
    L = tensor_ord(L, C1);
    if (!L.d(2 * i).apply(cupv).empty()) cup_cycle = false;
    P = tensor_p(P, C);
  }
  const BasedComplex Pc = contract(P, 1);
  rep.checks.push_back(flag_check("cup cocycle z1^(x)d is a cocycle of (A_1[1])^(x)d", cup_cycle,
                                  {L.dim(2 * d)}, t0, scope));
  if (d >= 2)
    rep.checks.push_back(flag_check("h restricted to p(A_1, A_1) is the identity", h_identity, {}, t0, scope));

  t0 = Clock::now();
  const GlTObject A0(T_object(SymSum{{std::vector<int>(d, 1)}}, p), K, n);
  const int pos = contracted_degree_position(2 * d, p);
  {
    SparseVec moved;
    for (const auto& g : generator_family(K, n)) {
      moved = difference(*K, A0.act(pos, g.g, z.vec), z.vec);
      if (!moved.empty()) break;
    }
    rep.checks.push_back(make_check("z[d] is GL_n-invariant", moved, {A0.dim(pos)}, t0, scope));
  }

  t0 = Clock::now();
  const SparseVec diff = difference(*K, w, z.vec);
  rep.equal = diff.empty();
  rep.checks.push_back(make_check("h(cup cocycle) equals z[d] as cochains", diff, {Pc.dim(2 * d)}, t0, scope));
  if (rep.equal) {
    rep.cohomologous = true;
  } else {
    t0 = Clock::now();
    const int prev = contracted_degree_position(2 * d - 1, p);
    const auto basis = invariants(A0.module(prev), opt.invariants);
    std::vector<SparseVec> images;
    for (const auto& b : basis) images.push_back(A0.d_power(prev, contracted_step(2 * d - 1, p), b));
    rep.cohomologous = solve(columns_matrix(K, A0.dim(pos), images), diff).has_value();
    rep.checks.push_back(flag_check("h(cup cocycle) cohomologous to z[d]", rep.cohomologous,
                                    {static_cast<long long>(basis.size())}, t0, scope));
  }

  t0 = Clock::now();
  std::vector<int> hp, ho;
  bool exact = true;
  for (int k = 1; k <= 3; ++k) {
    hp.push_back(degree_homology(Pc, k));
    ho.push_back(degree_homology(L, k));
    exact = exact && hp.back() == 0 && ho.back() == 0;
  }
  rep.homology_tables.emplace_back("(A_1^(x)d)_[1] underlying H^1..H^3", hp);
  rep.homology_tables.emplace_back("(A_1[1])^(x)d underlying H^1..H^3", ho);
  rep.checks.push_back(flag_check("both coresolutions exact in degrees 1..3", exact,
                                  {Pc.dim(1), Pc.dim(2), Pc.dim(3), L.dim(1), L.dim(2), L.dim(3)}, t0,
                                  keyed ? "blocked by coordinate content" : "unblocked"));

  if (opt.invariant_tables) {
    t0 = Clock::now();
    const auto in = contracted_input(A0, 2 * d);
    const InvariantComplex IC = invariant_complex(in.modules, in.diff, opt.invariants);
    auto h = IC.homology();
    if (static_cast<int>(in.modules.size()) < contracted_length(A0.length(), p)) h.pop_back();
    rep.homology_tables.emplace_back("(A_1^(x)d)_[1] invariant homology", h);
    std::vector<long long> dims;
    for (const auto& b : IC.basis) dims.push_back(static_cast<long long>(b.size()));
    rep.checks.push_back(flag_check("invariant complex of (A_1^(x)d)_[1] assembled", true, dims, t0, scope));
  }
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  rep.pass = rep.pass && rep.equal;
  return rep;
}

// ---------------------------------------------------------------------------
// The bicomplex

Bicomplex build_A(const TwistComplex& J, int n, int columns, bool keyed) {
  Bicomplex B;
  B.F = J.F;
  B.p = static_cast<int>(J.F->p());
  B.n = n;
  const int N = n * n;
  const int count = columns < 0 ? J.length() : std::min(columns, J.length());
  const auto keys = keyed ? unit_coordinate_keys(N) : std::vector<BlockKey>{};
  for (int c = 0; c < count; ++c) {
    B.objects.push_back(T_object(J.objects[c], B.p));
    B.columns_p.push_back(B.objects.back().evaluate(J.F, N, keys));
    B.columns.push_back(contract(B.columns_p.back(), 1));
  }
  for (int c = 0; c + 1 < count; ++c)
    B.horizontal.push_back(contract_map(T_map(J.diffs[c], N), B.columns_p[c], B.columns_p[c + 1], 1));
  return B;
}

bool Bicomplex::squares_commute() const {
  for (std::size_t c = 0; c < horizontal.size(); ++c) {
    const auto& X = columns[c];
    const auto& Y = columns[c + 1];
    const int len = std::max(X.length(), Y.length());
    for (int j = 0; j + 1 < len; ++j) {
      const FFMatrix hj = horizontal[c].at(F, j, Y.dim(j), X.dim(j));
      const FFMatrix hj1 = horizontal[c].at(F, j + 1, Y.dim(j + 1), X.dim(j + 1));
      if (Y.d(j) * hj != hj1 * X.d(j)) return false;
    }
  }
  return true;
}

BasedComplex Bicomplex::total() const {
  int len = 0;
  for (std::size_t c = 0; c < columns.size(); ++c) len = std::max(len, static_cast<int>(c) + columns[c].length());
  // offset[k][c]: start of column c's summand in Tot^k
  std::vector<std::vector<int>> offset(len, std::vector<int>(columns.size() + 1, 0));
  for (int k = 0; k < len; ++k)
    for (std::size_t c = 0; c < columns.size(); ++c)
      offset[k][c + 1] = offset[k][c] + columns[c].dim(k - static_cast<int>(c));
  std::vector<int> dims;
  std::vector<FFMatrix> d;
  for (int k = 0; k < len; ++k) {
    dims.push_back(offset[k].back());
    std::vector<Triplet> t;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const int j = k - static_cast<int>(c);
      if (j < 0 || j >= columns[c].length()) continue;
      if (k + 1 < len) {
        const fe sign = (c % 2) ? F->neg(1) : fe{1};
        columns[c].d(j).for_each([&](int r, int col, fe v) {
          t.push_back({offset[k + 1][c] + r, offset[k][c] + col, F->mul(sign, v)});
        });
        if (c < horizontal.size())
          horizontal[c].at(F, j, columns[c + 1].dim(j), columns[c].dim(j)).for_each([&](int r, int col, fe v) {
            t.push_back({offset[k + 1][c + 1] + r, offset[k][c] + col, v});
          });
      }
    }
    const int rows = k + 1 < len ? offset[k + 1].back() : 0;
    d.push_back(FFMatrix::from_triplets(F, rows, dims.back(), std::move(t)));
  }
  return make_complex(F, std::move(dims), std::move(d));
}

// ---------------------------------------------------------------------------
// Size estimate

Estimate estimate_lifted(int p, int d, int n, long double cap) {
  Estimate e;
  e.p = p;
  e.d = d;
  e.n = n;
  e.cap = cap;
  const long long N = static_cast<long long>(n) * n;
  auto choose = [](long double a, int k) {
    long double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (a - k + i) / i;
    return r;
  };
  e.largest_block = std::pow(choose(static_cast<long double>(N + p - 1), p), d);
  e.column0_total = std::pow(choose(static_cast<long double>(p * N + p - 1), p), d);
  e.within = e.largest_block <= cap;
  std::ostringstream os;
  os.precision(6);
  os << "p=" << p << " d=" << d << " n=" << n << ": largest block dim (A_1^p)^(x)d = " << e.largest_block
     << ", column 0 total = " << e.column0_total << ", cap = " << cap << (e.within ? " (within cap)" : " (exceeds cap)");
  e.summary = os.str();
  return e;
}

}  // namespace artifact
