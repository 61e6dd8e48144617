#include "artifact/troesch.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace artifact {

namespace {

std::vector<int> composition_of(const Monomial& x, int n, int p) {
  std::vector<int> c(p, 0);
  for (int v : x) ++c[v / n];
  return c;
}

void compositions_rec(int m, int p, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == p - 1) {
    cur.push_back(m);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int i = 0; i <= m; ++i) {
    cur.push_back(i);
    compositions_rec(m - i, p, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<TroeschPiece> troesch_pieces(int m, int p) {
  if (m < 0 || !is_prime(p)) throw std::invalid_argument("troesch_pieces: need m >= 0 and p prime");
  std::vector<std::vector<int>> comps;
  std::vector<int> cur;
  compositions_rec(m, p, cur, comps);
  std::vector<TroeschPiece> out;
  for (auto& c : comps) {
    int deg = 0;
    for (int k = 0; k < p; ++k) deg += k * c[k];
    out.push_back({c, deg, fx::sym_tensor(c)});
  }
  return out;
}

int troesch_length(int m, int p) { return m * (p - 1) + 1; }

SymHom troesch_differential(FieldPtr F, int m, int p, int k) {
  const auto pieces = troesch_pieces(m, p);
  SymSum src, tgt;
  std::map<std::vector<int>, int> tidx;
  for (const auto& pc : pieces) {
    if (pc.degree == k) src.terms.push_back(pc.composition);
    if (pc.degree == k + 1) {
      tidx[pc.composition] = static_cast<int>(tgt.terms.size());
      tgt.terms.push_back(pc.composition);
    }
  }
  SymHom h{F, src, tgt, {}};
  for (std::size_t s = 0; s < src.terms.size(); ++s) {
    const auto& c = src.terms[s];
    for (int a = 0; a + 1 < p; ++a) {
      if (c[a] == 0) continue;
      Pattern M(p, std::vector<int>(p, 0));
      for (int b = 0; b < p; ++b) M[b][b] = c[b];
      M[a][a] -= 1;
      M[a][a + 1] = 1;
      auto t = c;
      --t[a];
      ++t[a + 1];
      h.entries.push_back({tidx.at(t), static_cast<int>(s), M, 1});
    }
  }
  h.normalize();
  return h;
}

TroeschFactor::TroeschFactor(int p, int m, int n) : p_(p), m_(m), n_(n) {
  if (!is_prime(p) || m < 0 || n < 0) throw std::invalid_argument("TroeschFactor: bad parameters");
  basis_.assign(troesch_length(m, p), {});
  for (auto& x : multisets(p * n, m)) basis_[degree(x)].push_back(std::move(x));
  for (auto& level : basis_) {
    std::stable_sort(level.begin(), level.end(), [&](const Monomial& a, const Monomial& b) {
      const auto ca = composition_of(a, n_, p_), cb = composition_of(b, n_, p_);
      if (ca != cb) return ca < cb;
      return a < b;
    });
    std::map<Monomial, int> idx;
    for (std::size_t i = 0; i < level.size(); ++i) idx.emplace(level[i], static_cast<int>(i));
    index_.push_back(std::move(idx));
  }
}

int TroeschFactor::index(int k, const Monomial& x) const { return index_.at(k).at(x); }

int TroeschFactor::degree(const Monomial& x) const {
  int d = 0;
  for (int v : x) d += v / n_;
  return d;
}

std::shared_ptr<const TroeschFactor> troesch_factor(int p, int m, int n) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const TroeschFactor>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, m, n}];
  if (!slot) slot = std::make_shared<const TroeschFactor>(p, m, n);
  return slot;
}

TroeschSpace::TroeschSpace(int p, std::vector<int> factors, int n) : p_(p), n_(n), factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("TroeschSpace needs at least one factor");
  for (int m : factors_) f_.push_back(troesch_factor(p_, m, n_));
  std::vector<int> d0;
  for (int k = 0; k < f_[0]->length(); ++k) d0.push_back(f_[0]->dim(k));
  dims_.push_back(d0);
  offsets_.emplace_back();
  for (std::size_t r = 1; r < f_.size(); ++r) {
    const auto& prev = dims_.back();
    const int len = static_cast<int>(prev.size()) + f_[r]->length() - 1;
    std::vector<int> dims(len, 0);
    std::vector<std::vector<int>> off(len);
    for (int k = 0; k < len; ++k) {
      off[k].assign(prev.size(), -1);
      for (int i = 0; i < static_cast<int>(prev.size()); ++i) {
        const int j = k - i;
        if (j < 0 || j >= f_[r]->length()) continue;
        const int block = prev[i] * f_[r]->dim(j);
        if (block == 0) continue;
        off[k][i] = dims[k];
        dims[k] += block;
      }
    }
    dims_.push_back(std::move(dims));
    offsets_.push_back(std::move(off));
  }
}

int TroeschSpace::dim(int k) const {
  const auto& d = dims_.back();
  return (k >= 0 && k < static_cast<int>(d.size())) ? d[k] : 0;
}

int TroeschSpace::degree(const MonoTuple& x) const {
  int d = 0;
  for (std::size_t r = 0; r < x.size(); ++r) d += f_[r]->degree(x[r]);
  return d;
}

int TroeschSpace::index_prefix(const MonoTuple& x, int r, int k) const {
  if (r == 0) return f_[0]->index(k, x[0]);
  const int j = f_[r]->degree(x[r]);
  const int i = k - j;
  return offsets_[r][k][i] + index_prefix(x, r - 1, i) * f_[r]->dim(j) + f_[r]->index(j, x[r]);
}

int TroeschSpace::index(const MonoTuple& x) const {
  if (x.size() != f_.size()) throw std::invalid_argument("TroeschSpace::index: tuple length");
  return index_prefix(x, static_cast<int>(f_.size()) - 1, degree(x));
}

void TroeschSpace::element_prefix(int r, int k, int idx, MonoTuple& out) const {
  if (r == 0) {
    out[0] = f_[0]->element(k, idx);
    return;
  }
  const auto& off = offsets_[r][k];
  int best = -1;
  for (int i = 0; i < static_cast<int>(off.size()); ++i)
    if (off[i] >= 0 && off[i] <= idx && (best < 0 || off[i] > off[best])) best = i;
  const int j = k - best;
  const int local = idx - off[best];
  const int dj = f_[r]->dim(j);
  out[r] = f_[r]->element(j, local % dj);
  element_prefix(r - 1, best, local / dj, out);
}

MonoTuple TroeschSpace::element(int k, int idx) const {
  MonoTuple out(f_.size());
  element_prefix(static_cast<int>(f_.size()) - 1, k, idx, out);
  return out;
}

BlockKey monomial_key(const Monomial& x, int n, const std::vector<BlockKey>& coord_keys) {
  BlockKey k = 0;
  for (int v : x) k += coord_keys[v % n];
  return k;
}

NComplex build_troesch(FieldPtr F, int m, int p, int n, const std::vector<BlockKey>& coord_keys) {
  if (F->p() != p) throw std::invalid_argument("build_troesch: field characteristic differs from p");
  const auto B = troesch_factor(p, m, n);
  const int len = B->length();
  std::vector<int> dims;
  for (int k = 0; k < len; ++k) dims.push_back(B->dim(k));
  std::vector<FFMatrix> d;
  for (int k = 0; k + 1 < len; ++k) {
    std::vector<Triplet> t;
    for (int x = 0; x < B->dim(k); ++x) {
      const Monomial& mono = B->element(k, x);
      for (std::size_t a = 0; a < mono.size();) {
        std::size_t b = a;
        while (b < mono.size() && mono[b] == mono[a]) ++b;
        const int v = mono[a];
        if (v / n + 1 < p) {
          Monomial y = mono;
          y[a] = v + n;
          std::sort(y.begin(), y.end());
          t.push_back({B->index(k + 1, y), x, F->from_int(static_cast<long long>(b - a))});
        }
        a = b;
      }
    }
    d.push_back(FFMatrix::from_triplets(F, B->dim(k + 1), B->dim(k), std::move(t)));
  }
  NComplex C(F, p, dims, std::move(d), false);
  if (!coord_keys.empty()) {
    std::vector<std::vector<BlockKey>> keys(len);
    for (int k = 0; k < len; ++k)
      for (int x = 0; x < B->dim(k); ++x) keys[k].push_back(monomial_key(B->element(k, x), n, coord_keys));
    C.set_keys(std::move(keys));
  }
  return C;
}

NComplex troesch_tensor(FieldPtr F, const std::vector<int>& factors, int p, int n,
                        const std::vector<BlockKey>& coord_keys) {
  if (factors.empty()) throw std::invalid_argument("troesch_tensor needs a factor");
  NComplex out = build_troesch(F, factors[0], p, n, coord_keys);
  for (std::size_t i = 1; i < factors.size(); ++i) out = tensor_p(out, build_troesch(F, factors[i], p, n, coord_keys));
  return out;
}

BTuple build_B_tuple(FieldPtr F, const std::vector<int>& mu, int p, int n, const std::vector<BlockKey>& coord_keys) {
  std::vector<int> pm;
  for (int x : mu) {
    if (x < 1) throw std::invalid_argument("build_B_tuple: parts must be positive");
    pm.push_back(p * x);
  }
  BTuple out{troesch_tensor(F, pm, p, n, coord_keys), eval_nat(nat::frob_incl(p, mu), F, n)};
  return out;
}

TroeschReport verify_troesch(FieldPtr F, int m, int p, const std::vector<int>& dims) {
  TroeschReport rep;
  for (int n : dims) {
    const NComplex B = build_troesch(F, m, p, n);
    int expected = 0;
    FFMatrix aug;
    const FFMatrix* augp = nullptr;
    if (m % p == 0) {
      expected = eval_dim(fx::sym(m / p), n);
      aug = eval_nat(nat::frob_incl(p, {m / p}), F, n);
      augp = &aug;
    }
    const auto r = is_p_coresolution(B, expected, augp);
    for (int s = 1; s < p; ++s) rep.rows.push_back({n, s, r.homology[s - 1], r.pass});
    if (!r.pass) {
      rep.pass = false;
      rep.detail += "m=" + std::to_string(m) + " n=" + std::to_string(n) + ": " + r.detail + "; ";
    }
    if (!B.nilpotent()) {
      rep.pass = false;
      rep.detail += "d^p != 0 at n=" + std::to_string(n) + "; ";
    }
  }
  return rep;
}

std::vector<BlockKey> unit_coordinate_keys(int n) {
  if (n > 16) throw std::invalid_argument("unit_coordinate_keys: at most 16 coordinates");
  std::vector<BlockKey> k(n);
  for (int c = 0; c < n; ++c) k[c] = BlockKey{1} << (4 * c);
  return k;
}

}  // namespace artifact
