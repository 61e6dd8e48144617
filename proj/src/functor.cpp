#include "artifact/functor.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "artifact/linalg.hpp"

namespace artifact {

long long binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace {

void multisets_rec(int n, int d, int lo, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == d) {
    out.push_back(cur);
    return;
  }
  for (int i = lo; i < n; ++i) {
    cur.push_back(i);
    multisets_rec(n, d, i, cur, out);
    cur.pop_back();
  }
}

void tuples_rec(int n, int d, int lo, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == d) {
    out.push_back(cur);
    return;
  }
  for (int i = lo; i < n; ++i) {
    cur.push_back(i);
    tuples_rec(n, d, i + 1, cur, out);
    cur.pop_back();
  }
}

std::map<std::vector<int>, int> index_of(const std::vector<std::vector<int>>& list) {
  std::map<std::vector<int>, int> m;
  for (std::size_t i = 0; i < list.size(); ++i) m.emplace(list[i], static_cast<int>(i));
  return m;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

std::vector<std::vector<fe>> dense_of(const FFMatrix& f) {
  std::vector<std::vector<fe>> a(f.rows(), std::vector<fe>(f.cols(), 0));
  f.for_each([&](int r, int c, fe v) { a[r][c] = v; });
  return a;
}

// Product of the linear forms f(e_{m_1}) ... f(e_{m_d}) expanded in monomials.
FFMatrix sym_power_matrix(const FFMatrix& f, int d) {
  const Field& F = *f.field();
  const auto src = multisets(f.cols(), d);
  const auto tgt = multisets(f.rows(), d);
  const auto tidx = index_of(tgt);
  std::vector<SparseVec> fcols(f.cols());
  for (int c = 0; c < f.cols(); ++c) fcols[c] = f.column(c);
  std::vector<SparseVec> cols;
  for (const auto& m : src) {
    std::map<std::vector<int>, fe> poly{{{}, 1}};
    for (int idx : m) {
      std::map<std::vector<int>, fe> next;
      for (const auto& [mono, c] : poly)
        for (const auto& [r, v] : fcols[idx]) {
          auto nm = mono;
          nm.insert(std::upper_bound(nm.begin(), nm.end(), r), r);
          fe& slot = next[nm];
          slot = F.add(slot, F.mul(c, v));
        }
      poly = std::move(next);
    }
    std::vector<std::pair<int, fe>> raw;
    for (const auto& [mono, c] : poly)
      if (c != 0) raw.emplace_back(tidx.at(mono), c);
    cols.push_back(normalize_vec(F, std::move(raw)));
  }
  return FFMatrix::from_columns(f.field(), static_cast<int>(tgt.size()), std::move(cols));
}

// Orbit-sum basis: coefficient at gamma_{m'} is the coefficient of the sorted word m'
// in the image of the orbit sum of m.
FFMatrix gamma_power_matrix(const FFMatrix& f, int d) {
  const Field& F = *f.field();
  const auto src = multisets(f.cols(), d);
  const auto tgt = multisets(f.rows(), d);
  const auto tidx = index_of(tgt);
  const auto a = dense_of(f);
  std::vector<SparseVec> cols;
  for (const auto& m : src) {
    std::map<std::vector<int>, fe> acc;
    std::vector<int> w = m;
    do {
      // Sorted target words r_1 <= ... <= r_d with weight prod f[r_k][w_k].
      std::vector<int> r;
      std::function<void(int, fe)> rec = [&](int k, fe c) {
        if (k == d) {
          fe& slot = acc[r];
          slot = F.add(slot, c);
          return;
        }
        for (int x = r.empty() ? 0 : r.back(); x < f.rows(); ++x) {
          const fe v = a[x][w[k]];
          if (v == 0) continue;
          r.push_back(x);
          rec(k + 1, F.mul(c, v));
          r.pop_back();
        }
      };
      rec(0, 1);
    } while (std::next_permutation(w.begin(), w.end()));
    std::vector<std::pair<int, fe>> raw;
    for (const auto& [mono, c] : acc)
      if (c != 0) raw.emplace_back(tidx.at(mono), c);
    cols.push_back(normalize_vec(F, std::move(raw)));
  }
  return FFMatrix::from_columns(f.field(), static_cast<int>(tgt.size()), std::move(cols));
}

fe small_det(const Field& F, std::vector<std::vector<fe>> m) {
  const int n = static_cast<int>(m.size());
  fe det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (m[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = F.neg(det);
    }
    det = F.mul(det, m[c][c]);
    const fe inv = F.inv(m[c][c]);
    for (int r = c + 1; r < n; ++r) {
      const fe fac = F.neg(F.mul(m[r][c], inv));
      if (fac == 0) continue;
      for (int j = c; j < n; ++j) m[r][j] = F.add(m[r][j], F.mul(fac, m[c][j]));
    }
  }
  return det;
}

FFMatrix ext_power_matrix(const FFMatrix& f, int d) {
  const Field& F = *f.field();
  const auto src = increasing_tuples(f.cols(), d);
  const auto tgt = increasing_tuples(f.rows(), d);
  const auto a = dense_of(f);
  std::vector<SparseVec> cols;
  for (const auto& I : src) {
    SparseVec col;
    for (std::size_t j = 0; j < tgt.size(); ++j) {
      std::vector<std::vector<fe>> minor(d, std::vector<fe>(d));
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) minor[r][c] = a[tgt[j][r]][I[c]];
      const fe v = small_det(F, std::move(minor));
      if (v != 0) col.emplace_back(static_cast<int>(j), v);
    }
    cols.push_back(std::move(col));
  }
  return FFMatrix::from_columns(f.field(), static_cast<int>(tgt.size()), std::move(cols));
}

FunctorExpr make(FunctorKind kind, int a, int r, std::vector<FunctorExpr> children) {
  auto node = std::make_shared<FunctorNode>();
  node->kind = kind;
  node->a = a;
  node->r = r;
  node->children = std::move(children);
  auto& ch = node->children;
  std::string s;
  switch (kind) {
    case FunctorKind::Id:
      node->degree = 1;
      s = "(id)";
      break;
    case FunctorKind::Sym:
    case FunctorKind::Gamma:
    case FunctorKind::Ext:
      if (a < 0) throw std::invalid_argument("negative functor degree");
      node->degree = a;
      s = std::string("(") + (kind == FunctorKind::Sym ? "sym" : kind == FunctorKind::Gamma ? "gamma" : "ext") +
          " " + std::to_string(a) + ")";
      break;
    case FunctorKind::Tensor:
      node->degree = 0;
      s = "(tensor";
      for (const auto& c : ch) {
        node->degree += c->degree;
        s += " " + c->canonical;
      }
      s += ")";
      break;
    case FunctorKind::Sum:
      if (ch.empty()) throw std::invalid_argument("empty sum");
      node->degree = ch[0]->degree;
      s = "(sum";
      for (const auto& c : ch) {
        if (c->degree != node->degree) throw std::invalid_argument("sum of functors of different degrees");
        s += " " + c->canonical;
      }
      s += ")";
      break;
    case FunctorKind::Compose:
      node->degree = ch[0]->degree * ch[1]->degree;
      s = "(compose " + ch[0]->canonical + " " + ch[1]->canonical + ")";
      break;
    case FunctorKind::Twist: {
      if (!is_prime(a) || r < 0) throw std::invalid_argument("twist needs prime p and r >= 0");
      int pr = 1;
      for (int i = 0; i < r; ++i) pr *= a;
      node->degree = pr * ch[0]->degree;
      s = "(twist " + std::to_string(a) + " " + std::to_string(r) + " " + ch[0]->canonical + ")";
      break;
    }
    case FunctorKind::SumPower:
      if (a < 1) throw std::invalid_argument("sumpow needs p >= 1");
      node->degree = 1;
      s = "(sumpow " + std::to_string(a) + ")";
      break;
    case FunctorKind::Const:
      node->degree = 0;
      s = "(const)";
      break;
  }
  node->canonical = std::move(s);
  return node;
}

}  // namespace

std::vector<std::vector<int>> multisets(int n, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  multisets_rec(n, d, 0, cur, out);
  return out;
}

std::vector<std::vector<int>> increasing_tuples(int n, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  tuples_rec(n, d, 0, cur, out);
  return out;
}

namespace fx {
FunctorExpr id() { return make(FunctorKind::Id, 0, 0, {}); }
FunctorExpr sym(int d) { return make(FunctorKind::Sym, d, 0, {}); }
FunctorExpr gamma(int d) { return make(FunctorKind::Gamma, d, 0, {}); }
FunctorExpr ext(int d) { return make(FunctorKind::Ext, d, 0, {}); }
FunctorExpr tensor(std::vector<FunctorExpr> f) { return make(FunctorKind::Tensor, 0, 0, std::move(f)); }
FunctorExpr sum(std::vector<FunctorExpr> f) { return make(FunctorKind::Sum, 0, 0, std::move(f)); }
FunctorExpr compose(FunctorExpr o, FunctorExpr i) {
  return make(FunctorKind::Compose, 0, 0, {std::move(o), std::move(i)});
}
FunctorExpr twist(int p, int r, FunctorExpr inner) { return make(FunctorKind::Twist, p, r, {std::move(inner)}); }
FunctorExpr sumpower(int p) { return make(FunctorKind::SumPower, p, 0, {}); }
FunctorExpr constant() { return make(FunctorKind::Const, 0, 0, {}); }
FunctorExpr sym_tensor(const std::vector<int>& lambda) {
  std::vector<FunctorExpr> f;
  for (int l : lambda) f.push_back(sym(l));
  return tensor(std::move(f));
}
FunctorExpr tensor_power(int d) { return sym_tensor(std::vector<int>(d, 1)); }
}  // namespace fx

std::string to_sexpr(const FunctorExpr& F) { return F->canonical; }

int eval_dim(const FunctorExpr& F, int n) {
  switch (F->kind) {
    case FunctorKind::Id:
      return n;
    case FunctorKind::Sym:
    case FunctorKind::Gamma:
      return static_cast<int>(binomial(n + F->a - 1, F->a));
    case FunctorKind::Ext:
      return static_cast<int>(binomial(n, F->a));
    case FunctorKind::Tensor: {
      long long d = 1;
      for (const auto& c : F->children) d *= eval_dim(c, n);
      return static_cast<int>(d);
    }
    case FunctorKind::Sum: {
      int d = 0;
      for (const auto& c : F->children) d += eval_dim(c, n);
      return d;
    }
    case FunctorKind::Compose:
      return eval_dim(F->children[0], eval_dim(F->children[1], n));
    case FunctorKind::Twist:
      return eval_dim(F->children[0], n);
    case FunctorKind::SumPower:
      return F->a * n;
    case FunctorKind::Const:
      return 1;
  }
  return 0;
}

std::vector<std::string> eval_basis(const FunctorExpr& F, int n) {
  std::vector<std::string> out;
  switch (F->kind) {
    case FunctorKind::Id:
      for (int i = 0; i < n; ++i) out.push_back("e" + std::to_string(i));
      break;
    case FunctorKind::Sym:
      for (const auto& m : multisets(n, F->a)) out.push_back("x[" + join_ints(m) + "]");
      break;
    case FunctorKind::Gamma:
      for (const auto& m : multisets(n, F->a)) out.push_back("g[" + join_ints(m) + "]");
      break;
    case FunctorKind::Ext:
      for (const auto& m : increasing_tuples(n, F->a)) out.push_back("w[" + join_ints(m) + "]");
      break;
    case FunctorKind::Tensor: {
      out.push_back("");
      for (const auto& c : F->children) {
        const auto sub = eval_basis(c, n);
        std::vector<std::string> next;
        for (const auto& a : out)
          for (const auto& b : sub) next.push_back(a.empty() ? b : a + "|" + b);
        out = std::move(next);
      }
      if (F->children.empty()) out = {"1"};
      break;
    }
    case FunctorKind::Sum:
      for (std::size_t k = 0; k < F->children.size(); ++k)
        for (const auto& b : eval_basis(F->children[k], n)) out.push_back(std::to_string(k) + ":" + b);
      break;
    case FunctorKind::Compose:
      out = eval_basis(F->children[0], eval_dim(F->children[1], n));
      break;
    case FunctorKind::Twist:
      for (const auto& b : eval_basis(F->children[0], n)) out.push_back(b + "^(" + std::to_string(F->r) + ")");
      break;
    case FunctorKind::SumPower:
      for (int k = 0; k < F->a; ++k)
        for (int i = 0; i < n; ++i) out.push_back("e" + std::to_string(k) + "_" + std::to_string(i));
      break;
    case FunctorKind::Const:
      out.push_back("1");
      break;
  }
  return out;
}

FFMatrix eval_map(const FunctorExpr& F, const FFMatrix& f) {
  const auto& K = f.field();
  switch (F->kind) {
    case FunctorKind::Id:
      return f;
    case FunctorKind::Sym:
      return sym_power_matrix(f, F->a);
    case FunctorKind::Gamma:
      return gamma_power_matrix(f, F->a);
    case FunctorKind::Ext:
      return ext_power_matrix(f, F->a);
    case FunctorKind::Tensor: {
      FFMatrix out = FFMatrix::identity(K, 1);
      for (const auto& c : F->children) out = kron(out, eval_map(c, f));
      return out;
    }
    case FunctorKind::Sum: {
      std::vector<FFMatrix> blocks;
      for (const auto& c : F->children) blocks.push_back(eval_map(c, f));
      return block_diag(K, blocks);
    }
    case FunctorKind::Compose:
      return eval_map(F->children[0], eval_map(F->children[1], f));
    case FunctorKind::Twist:
      if (K->p() != F->a) throw std::invalid_argument("twist prime differs from field characteristic");
      return eval_map(F->children[0], frobenius_entries(f, F->r));
    case FunctorKind::SumPower:
      return block_diag(K, std::vector<FFMatrix>(F->a, f));
    case FunctorKind::Const:
      return FFMatrix::identity(K, 1);
  }
  throw std::logic_error("unknown functor kind");
}

// ---------------------------------------------------------------------------
// Natural transformations

namespace {

NatMap make_nat(NatKind kind, FunctorExpr src, FunctorExpr tgt, std::string canonical) {
  auto n = std::make_shared<NatNode>();
  n->kind = kind;
  n->source = std::move(src);
  n->target = std::move(tgt);
  n->canonical = std::move(canonical);
  return n;
}

std::string int_list(const std::vector<int>& v) { return "(" + join_ints(v) + ")"; }

}  // namespace

namespace nat {

NatMap mul(int i, int j) {
  auto n = make_nat(NatKind::Mul, fx::sym_tensor({i, j}), fx::sym(i + j),
                    "(mul " + std::to_string(i) + " " + std::to_string(j) + ")");
  std::const_pointer_cast<NatNode>(n)->ints = {i, j};
  return n;
}

NatMap comul(int i, int j) {
  auto n = make_nat(NatKind::Comul, fx::sym(i + j), fx::sym_tensor({i, j}),
                    "(comul " + std::to_string(i) + " " + std::to_string(j) + ")");
  std::const_pointer_cast<NatNode>(n)->ints = {i, j};
  return n;
}

NatMap perm(const std::vector<int>& sigma, std::vector<FunctorExpr> factors) {
  if (sigma.size() != factors.size()) throw std::invalid_argument("perm size mismatch");
  std::vector<int> check = sigma;
  std::sort(check.begin(), check.end());
  for (std::size_t i = 0; i < check.size(); ++i)
    if (check[i] != static_cast<int>(i)) throw std::invalid_argument("not a permutation");
  std::vector<FunctorExpr> tgt;
  for (int s : sigma) tgt.push_back(factors[s]);
  std::string c = "(perm " + int_list(sigma);
  for (const auto& f : factors) c += " " + f->canonical;
  c += ")";
  auto n = make_nat(NatKind::Perm, fx::tensor(factors), fx::tensor(tgt), c);
  std::const_pointer_cast<NatNode>(n)->ints = sigma;
  return n;
}

NatMap frob_incl(int p, const std::vector<int>& lambda) {
  std::vector<FunctorExpr> src, tgt;
  std::vector<int> plam;
  for (int l : lambda) {
    src.push_back(fx::compose(fx::sym(l), fx::twist(p, 1, fx::id())));
    plam.push_back(p * l);
  }
  auto n = make_nat(NatKind::FrobIncl, fx::tensor(src), fx::sym_tensor(plam),
                    "(frob_incl " + std::to_string(p) + " " + int_list(lambda) + ")");
  auto m = std::const_pointer_cast<NatNode>(n);
  m->ints = lambda;
  m->ints.insert(m->ints.begin(), p);
  return n;
}

NatMap powmul(int p, int k) {
  auto n = make_nat(NatKind::PowMul, fx::compose(fx::sym(k), fx::sym(p)), fx::sym(k * p),
                    "(powmul " + std::to_string(p) + " " + std::to_string(k) + ")");
  std::const_pointer_cast<NatNode>(n)->ints = {p, k};
  return n;
}

NatMap diag_gamma(const std::vector<int>& parts) {
  int total = 0;
  std::vector<FunctorExpr> tgt;
  for (int v : parts) {
    if (v < 1) throw std::invalid_argument("partition parts must be positive");
    total += v;
    tgt.push_back(fx::gamma(v));
  }
  auto n = make_nat(NatKind::DiagGamma, fx::gamma(total), fx::tensor(tgt), "(diag_gamma " + int_list(parts) + ")");
  std::const_pointer_cast<NatNode>(n)->ints = parts;
  return n;
}

NatMap identity(FunctorExpr F) {
  const std::string c = "(idmap " + F->canonical + ")";
  return make_nat(NatKind::Identity, F, F, c);
}

NatMap lin(std::vector<long long> coeffs, std::vector<NatMap> maps) {
  if (maps.empty() || coeffs.size() != maps.size()) throw std::invalid_argument("lin needs matching coefficients");
  for (const auto& m : maps)
    if (m->source->canonical != maps[0]->source->canonical || m->target->canonical != maps[0]->target->canonical)
      throw std::invalid_argument("lin: maps have different source or target");
  std::string c = "(lin";
  for (std::size_t i = 0; i < maps.size(); ++i) c += " (" + std::to_string(coeffs[i]) + " " + maps[i]->canonical + ")";
  c += ")";
  auto n = make_nat(NatKind::Lin, maps[0]->source, maps[0]->target, c);
  auto m = std::const_pointer_cast<NatNode>(n);
  m->coeffs = std::move(coeffs);
  m->parts = std::move(maps);
  return n;
}

NatMap tens(std::vector<NatMap> maps) {
  std::vector<FunctorExpr> src, tgt;
  std::string c = "(tens";
  for (const auto& m : maps) {
    src.push_back(m->source);
    tgt.push_back(m->target);
    c += " " + m->canonical;
  }
  c += ")";
  auto n = make_nat(NatKind::Tens, fx::tensor(src), fx::tensor(tgt), c);
  std::const_pointer_cast<NatNode>(n)->parts = std::move(maps);
  return n;
}

NatMap block(std::vector<FunctorExpr> sources, std::vector<FunctorExpr> targets,
             std::vector<std::pair<int, int>> positions, std::vector<NatMap> maps) {
  if (positions.size() != maps.size()) throw std::invalid_argument("block: positions and maps differ");
  std::string c = "(block (sources";
  for (const auto& s : sources) c += " " + s->canonical;
  c += ") (targets";
  for (const auto& t : targets) c += " " + t->canonical;
  c += ")";
  for (std::size_t k = 0; k < maps.size(); ++k) {
    const auto [t, s] = positions[k];
    if (t < 0 || t >= static_cast<int>(targets.size()) || s < 0 || s >= static_cast<int>(sources.size()))
      throw std::invalid_argument("block: position out of range");
    if (maps[k]->source->canonical != sources[s]->canonical || maps[k]->target->canonical != targets[t]->canonical)
      throw std::invalid_argument("block: entry does not match its source/target");
    c += " (at " + std::to_string(t) + " " + std::to_string(s) + " " + maps[k]->canonical + ")";
  }
  c += ")";
  auto n = make_nat(NatKind::Block, fx::sum(sources), fx::sum(targets), c);
  auto m = std::const_pointer_cast<NatNode>(n);
  m->positions = std::move(positions);
  m->parts = std::move(maps);
  return n;
}

NatMap comp(NatMap outer, NatMap inner) {
  if (outer->source->canonical != inner->target->canonical)
    throw std::invalid_argument("comp: source of outer map differs from target of inner map");
  auto n = make_nat(NatKind::Comp, inner->source, outer->target,
                    "(comp " + outer->canonical + " " + inner->canonical + ")");
  std::const_pointer_cast<NatNode>(n)->parts = {std::move(outer), std::move(inner)};
  return n;
}

NatMap pre(NatMap u, FunctorExpr G) {
  auto n = make_nat(NatKind::Pre, fx::compose(u->source, G), fx::compose(u->target, G),
                    "(pre " + u->canonical + " " + G->canonical + ")");
  auto m = std::const_pointer_cast<NatNode>(n);
  m->parts = {std::move(u)};
  m->inner = std::move(G);
  return n;
}

}  // namespace nat

std::string to_sexpr(const NatMap& u) { return u->canonical; }

namespace {

std::mutex cache_mu;
std::unordered_map<std::string, FFMatrix> cache;

fe reduce_int(const Field& F, long long c) { return F.from_int(c); }

// Mixed-radix digits of index with given radices (first most significant).
std::vector<int> digits(int index, const std::vector<int>& radices) {
  std::vector<int> out(radices.size());
  for (int k = static_cast<int>(radices.size()) - 1; k >= 0; --k) {
    out[k] = index % radices[k];
    index /= radices[k];
  }
  return out;
}

int undigits(const std::vector<int>& d, const std::vector<int>& radices) {
  int idx = 0;
  for (std::size_t k = 0; k < d.size(); ++k) idx = idx * radices[k] + d[k];
  return idx;
}

// Multiplicity vector of a sorted multiset as (value, count) runs.
std::vector<std::pair<int, int>> runs(const std::vector<int>& m) {
  std::vector<std::pair<int, int>> out;
  for (int x : m) {
    if (!out.empty() && out.back().first == x)
      ++out.back().second;
    else
      out.emplace_back(x, 1);
  }
  return out;
}

FFMatrix compute_nat(const NatMap& u, const FieldPtr& K, int n);

FFMatrix eval_cached(const NatMap& u, const FieldPtr& K, int n) {
  const std::string key = u->canonical + "@" + std::to_string(n) + "/" + std::to_string(K->p()) + "," +
                          std::to_string(K->e());
  {
    std::lock_guard<std::mutex> lock(cache_mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  FFMatrix m = compute_nat(u, K, n);
  std::lock_guard<std::mutex> lock(cache_mu);
  cache[key] = m;
  return m;
}

FFMatrix compute_nat(const NatMap& u, const FieldPtr& K, int n) {
  const Field& F = *K;
  const int rows = eval_dim(u->target, n);
  const int cols = eval_dim(u->source, n);
  std::vector<Triplet> t;
  switch (u->kind) {
    case NatKind::Mul: {
      const int i = u->ints[0], j = u->ints[1];
      const auto a = multisets(n, i), b = multisets(n, j);
      const auto tidx = index_of(multisets(n, i + j));
      for (std::size_t x = 0; x < a.size(); ++x)
        for (std::size_t y = 0; y < b.size(); ++y) {
          std::vector<int> m = a[x];
          m.insert(m.end(), b[y].begin(), b[y].end());
          std::sort(m.begin(), m.end());
          t.push_back({tidx.at(m), static_cast<int>(x * b.size() + y), 1});
        }
      break;
    }
    case NatKind::Comul: {
      const int i = u->ints[0], j = u->ints[1];
      const auto src = multisets(n, i + j);
      const auto aidx = index_of(multisets(n, i)), bidx = index_of(multisets(n, j));
      const int bdim = static_cast<int>(bidx.size());
      for (std::size_t s = 0; s < src.size(); ++s) {
        const auto rs = runs(src[s]);
        // Choose how many copies of each value go left.
        std::vector<int> take(rs.size(), 0);
        std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
          if (k == rs.size()) {
            if (left != 0) return;
            std::vector<int> l, r;
            long long coef = 1;
            for (std::size_t q = 0; q < rs.size(); ++q) {
              for (int c = 0; c < take[q]; ++c) l.push_back(rs[q].first);
              for (int c = take[q]; c < rs[q].second; ++c) r.push_back(rs[q].first);
              coef = coef * (binomial(rs[q].second, take[q]) % F.p()) % F.p();
            }
            const fe v = reduce_int(F, coef);
            if (v != 0) t.push_back({aidx.at(l) * bdim + bidx.at(r), static_cast<int>(s), v});
            return;
          }
          for (int c = 0; c <= std::min(left, rs[k].second); ++c) {
            take[k] = c;
            rec(k + 1, left - c);
          }
        };
        rec(0, i);
      }
      break;
    }
    case NatKind::Perm: {
      const auto& sigma = u->ints;
      std::vector<int> srad, trad;
      for (const auto& c : u->source->children) srad.push_back(eval_dim(c, n));
      for (int s : sigma) trad.push_back(srad[s]);
      for (int x = 0; x < cols; ++x) {
        const auto d = digits(x, srad);
        std::vector<int> td;
        for (int s : sigma) td.push_back(d[s]);
        t.push_back({undigits(td, trad), x, 1});
      }
      break;
    }
    case NatKind::FrobIncl: {
      const int p = u->ints[0];
      if (F.p() != p) throw std::invalid_argument("frob_incl prime differs from field characteristic");
      std::vector<int> lam(u->ints.begin() + 1, u->ints.end());
      std::vector<int> srad, trad;
      std::vector<std::vector<std::vector<int>>> sbasis;
      std::vector<std::map<std::vector<int>, int>> tidx;
      for (int l : lam) {
        sbasis.push_back(multisets(n, l));
        srad.push_back(static_cast<int>(sbasis.back().size()));
        tidx.push_back(index_of(multisets(n, p * l)));
        trad.push_back(static_cast<int>(tidx.back().size()));
      }
      for (int x = 0; x < cols; ++x) {
        const auto d = digits(x, srad);
        std::vector<int> td;
        for (std::size_t k = 0; k < lam.size(); ++k) {
          std::vector<int> m;
          for (int v : sbasis[k][d[k]])
            for (int c = 0; c < p; ++c) m.push_back(v);
          td.push_back(tidx[k].at(m));
        }
        t.push_back({undigits(td, trad), x, 1});
      }
      break;
    }
    case NatKind::PowMul: {
      const int p = u->ints[0], k = u->ints[1];
      const auto inner = multisets(n, p);
      const auto outer = multisets(static_cast<int>(inner.size()), k);
      const auto tidx = index_of(multisets(n, p * k));
      for (std::size_t x = 0; x < outer.size(); ++x) {
        std::vector<int> m;
        for (int mono : outer[x]) m.insert(m.end(), inner[mono].begin(), inner[mono].end());
        std::sort(m.begin(), m.end());
        t.push_back({tidx.at(m), static_cast<int>(x), 1});
      }
      break;
    }
    case NatKind::DiagGamma: {
      const auto& parts = u->ints;
      int total = 0;
      for (int v : parts) total += v;
      const auto src = multisets(n, total);
      std::vector<std::map<std::vector<int>, int>> tidx;
      std::vector<int> trad;
      for (int v : parts) {
        tidx.push_back(index_of(multisets(n, v)));
        trad.push_back(static_cast<int>(tidx.back().size()));
      }
      for (std::size_t s = 0; s < src.size(); ++s) {
        // Ordered splittings of the multiset into blocks of sizes parts[k].
        std::vector<std::pair<int, int>> rem = runs(src[s]);
        std::vector<int> td(parts.size());
        std::function<void(std::size_t)> rec_block;
        std::function<void(std::size_t, std::size_t, int, std::vector<int>&)> rec_fill =
            [&](std::size_t blk, std::size_t q, int need, std::vector<int>& cur) {
              if (need == 0) {
                td[blk] = tidx[blk].at(cur);
                rec_block(blk + 1);
                return;
              }
              if (q == rem.size()) return;
              for (int c = std::min(need, rem[q].second); c >= 0; --c) {
                for (int z = 0; z < c; ++z) cur.push_back(rem[q].first);
                rem[q].second -= c;
                rec_fill(blk, q + 1, need - c, cur);
                rem[q].second += c;
                for (int z = 0; z < c; ++z) cur.pop_back();
              }
            };
        rec_block = [&](std::size_t blk) {
          if (blk == parts.size()) {
            t.push_back({undigits(td, trad), static_cast<int>(s), 1});
            return;
          }
          std::vector<int> cur;
          rec_fill(blk, 0, parts[blk], cur);
        };
        rec_block(0);
      }
      break;
    }
    case NatKind::Identity:
      return FFMatrix::identity(K, cols);
    case NatKind::Lin: {
      FFMatrix acc(K, rows, cols);
      for (std::size_t k = 0; k < u->parts.size(); ++k)
        acc = acc + scale(reduce_int(F, u->coeffs[k]), eval_cached(u->parts[k], K, n));
      return acc;
    }
    case NatKind::Tens: {
      FFMatrix out = FFMatrix::identity(K, 1);
      for (const auto& m : u->parts) out = kron(out, eval_cached(m, K, n));
      return out;
    }
    case NatKind::Block: {
      std::vector<int> soff{0}, toff{0};
      for (const auto& c : u->source->children) soff.push_back(soff.back() + eval_dim(c, n));
      for (const auto& c : u->target->children) toff.push_back(toff.back() + eval_dim(c, n));
      for (std::size_t k = 0; k < u->parts.size(); ++k) {
        const auto [tt, ss] = u->positions[k];
        eval_cached(u->parts[k], K, n).for_each([&](int r, int c, fe v) { t.push_back({toff[tt] + r, soff[ss] + c, v}); });
      }
      break;
    }
    case NatKind::Comp:
      return eval_cached(u->parts[0], K, n) * eval_cached(u->parts[1], K, n);
    case NatKind::Pre:
      return eval_cached(u->parts[0], K, eval_dim(u->inner, n));
  }
  return FFMatrix::from_triplets(K, rows, cols, std::move(t));
}

}  // namespace

FFMatrix eval_nat(const NatMap& u, const FieldPtr& F, int n) { return eval_cached(u, F, n); }

void clear_functor_cache() {
  std::lock_guard<std::mutex> lock(cache_mu);
  cache.clear();
}

std::size_t functor_cache_size() {
  std::lock_guard<std::mutex> lock(cache_mu);
  return cache.size();
}

FFMatrix conj_matrix(const FFMatrix& g) {
  const int n = g.rows();
  if (g.cols() != n) throw std::invalid_argument("gl action needs a square matrix");
  const auto& K = g.field();
  std::vector<SparseVec> inv_cols;
  SpanSolver s(K, n);
  for (int c = 0; c < n; ++c) s.insert(g.column(c));
  if (s.rank() != n) throw std::domain_error("gl action: matrix is singular");
  for (int c = 0; c < n; ++c) inv_cols.push_back(*s.express(SparseVec{{c, 1}}));
  const FFMatrix ginv = FFMatrix::from_columns(K, n, std::move(inv_cols));
  std::vector<Triplet> t;
  // g e_kl g^{-1} = sum_{a,b} g[a][k] ginv[l][b] e_ab
  const auto gd = g.triplets();
  const auto hd = ginv.triplets();
  for (const auto& x : gd)      // x.row = a, x.col = k
    for (const auto& y : hd)    // y.row = l, y.col = b
      t.push_back({x.row * n + y.col, x.col * n + y.row, K->mul(x.val, y.val)});
  return FFMatrix::from_triplets(K, n * n, n * n, std::move(t));
}

FFMatrix gl_eval(const FunctorExpr& F, const FFMatrix& g) { return eval_map(F, conj_matrix(g)); }

// ---------------------------------------------------------------------------
// s-expression parsing

namespace {

struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_atom = false;
};

SExpr parse_sexpr(const std::string& s, std::size_t& pos) {
  auto skip = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  };
  skip();
  if (pos >= s.size()) throw std::invalid_argument("unexpected end of expression");
  SExpr e;
  if (s[pos] == '(') {
    ++pos;
    for (;;) {
      skip();
      if (pos >= s.size()) throw std::invalid_argument("unbalanced parentheses");
      if (s[pos] == ')') {
        ++pos;
        break;
      }
      e.list.push_back(parse_sexpr(s, pos));
    }
    return e;
  }
  if (s[pos] == ')') throw std::invalid_argument("unexpected ')'");
  e.is_atom = true;
  while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) && s[pos] != '(' && s[pos] != ')')
    e.atom += s[pos++];
  return e;
}

SExpr parse_top(const std::string& text) {
  std::size_t pos = 0;
  SExpr e = parse_sexpr(text, pos);
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) throw std::invalid_argument("trailing characters in expression");
  return e;
}

long long to_int(const SExpr& e) {
  if (!e.is_atom) throw std::invalid_argument("expected integer");
  std::size_t used = 0;
  long long v = std::stoll(e.atom, &used);
  if (used != e.atom.size()) throw std::invalid_argument("bad integer '" + e.atom + "'");
  return v;
}

std::vector<int> to_ints(const SExpr& e) {
  if (e.is_atom) throw std::invalid_argument("expected integer list");
  std::vector<int> out;
  for (const auto& x : e.list) out.push_back(static_cast<int>(to_int(x)));
  return out;
}

const std::string& head(const SExpr& e) {
  if (e.is_atom || e.list.empty() || !e.list[0].is_atom) throw std::invalid_argument("expected (head ...)");
  return e.list[0].atom;
}

void arity(const SExpr& e, std::size_t n) {
  if (e.list.size() != n + 1) throw std::invalid_argument("wrong number of arguments for " + head(e));
}

FunctorExpr functor_of(const SExpr& e) {
  const std::string& h = head(e);
  if (h == "id") return arity(e, 0), fx::id();
  if (h == "sym") return arity(e, 1), fx::sym(static_cast<int>(to_int(e.list[1])));
  if (h == "gamma") return arity(e, 1), fx::gamma(static_cast<int>(to_int(e.list[1])));
  if (h == "ext") return arity(e, 1), fx::ext(static_cast<int>(to_int(e.list[1])));
  if (h == "tensor" || h == "sum") {
    std::vector<FunctorExpr> ch;
    for (std::size_t i = 1; i < e.list.size(); ++i) ch.push_back(functor_of(e.list[i]));
    return h == "tensor" ? fx::tensor(std::move(ch)) : fx::sum(std::move(ch));
  }
  if (h == "compose") return arity(e, 2), fx::compose(functor_of(e.list[1]), functor_of(e.list[2]));
  if (h == "twist") {
    arity(e, 3);
    return fx::twist(static_cast<int>(to_int(e.list[1])), static_cast<int>(to_int(e.list[2])), functor_of(e.list[3]));
  }
  if (h == "sumpow") return arity(e, 1), fx::sumpower(static_cast<int>(to_int(e.list[1])));
  if (h == "const") return arity(e, 0), fx::constant();
  throw std::invalid_argument("unknown functor constructor '" + h + "'");
}

NatMap nat_of(const SExpr& e) {
  const std::string& h = head(e);
  auto ival = [&](std::size_t i) { return static_cast<int>(to_int(e.list[i])); };
  if (h == "mul") return arity(e, 2), nat::mul(ival(1), ival(2));
  if (h == "comul") return arity(e, 2), nat::comul(ival(1), ival(2));
  if (h == "perm") {
    std::vector<FunctorExpr> f;
    for (std::size_t i = 2; i < e.list.size(); ++i) f.push_back(functor_of(e.list[i]));
    return nat::perm(to_ints(e.list.at(1)), std::move(f));
  }
  if (h == "frob_incl") return arity(e, 2), nat::frob_incl(ival(1), to_ints(e.list[2]));
  if (h == "powmul") return arity(e, 2), nat::powmul(ival(1), ival(2));
  if (h == "diag_gamma") return arity(e, 1), nat::diag_gamma(to_ints(e.list[1]));
  if (h == "idmap") return arity(e, 1), nat::identity(functor_of(e.list[1]));
  if (h == "lin") {
    std::vector<long long> c;
    std::vector<NatMap> m;
    for (std::size_t i = 1; i < e.list.size(); ++i) {
      const auto& term = e.list[i];
      if (term.is_atom || term.list.size() != 2) throw std::invalid_argument("lin term must be (c map)");
      c.push_back(to_int(term.list[0]));
      m.push_back(nat_of(term.list[1]));
    }
    return nat::lin(std::move(c), std::move(m));
  }
  if (h == "tens") {
    std::vector<NatMap> m;
    for (std::size_t i = 1; i < e.list.size(); ++i) m.push_back(nat_of(e.list[i]));
    return nat::tens(std::move(m));
  }
  if (h == "block") {
    if (e.list.size() < 3) throw std::invalid_argument("block needs sources and targets");
    auto terms = [&](const SExpr& x, const char* name) {
      if (head(x) != name) throw std::invalid_argument(std::string("block expects (") + name + " ...)");
      std::vector<FunctorExpr> out;
      for (std::size_t i = 1; i < x.list.size(); ++i) out.push_back(functor_of(x.list[i]));
      return out;
    };
    auto src = terms(e.list[1], "sources");
    auto tgt = terms(e.list[2], "targets");
    std::vector<std::pair<int, int>> pos;
    std::vector<NatMap> maps;
    for (std::size_t i = 3; i < e.list.size(); ++i) {
      const auto& x = e.list[i];
      if (head(x) != "at" || x.list.size() != 4) throw std::invalid_argument("block entry must be (at t s map)");
      pos.emplace_back(static_cast<int>(to_int(x.list[1])), static_cast<int>(to_int(x.list[2])));
      maps.push_back(nat_of(x.list[3]));
    }
    return nat::block(std::move(src), std::move(tgt), std::move(pos), std::move(maps));
  }
  if (h == "comp") return arity(e, 2), nat::comp(nat_of(e.list[1]), nat_of(e.list[2]));
  if (h == "pre") return arity(e, 2), nat::pre(nat_of(e.list[1]), functor_of(e.list[2]));
  throw std::invalid_argument("unknown natural map '" + h + "'");
}

}  // namespace

FunctorExpr parse_functor(const std::string& text) { return functor_of(parse_top(text)); }
NatMap parse_natmap(const std::string& text) { return nat_of(parse_top(text)); }

}  // namespace artifact
