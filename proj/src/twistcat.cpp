#include "artifact/twistcat.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "artifact/pcomplex.hpp"

namespace artifact {

namespace {

using Tagged = std::vector<std::pair<MonoTuple, fe>>;

Tagged merge_terms(const Field& K, Tagged v) {
  std::sort(v.begin(), v.end());
  Tagged out;
  for (auto& [y, c] : v) {
    if (!out.empty() && out.back().first == y)
      out.back().second = K.add(out.back().second, c);
    else
      out.emplace_back(std::move(y), c);
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const auto& e) { return e.second == 0; }), out.end());
  return out;
}

// Replace every variable w of every factor by the monomial block(w).
template <class Block>
MonoTuple substitute(const MonoTuple& y, std::size_t from, const Block& block) {
  MonoTuple out;
  for (std::size_t j = from; j < y.size(); ++j) {
    Monomial m;
    for (int w : y[j]) {
      const Monomial& b = block(w);
      m.insert(m.end(), b.begin(), b.end());
    }
    std::sort(m.begin(), m.end());
    out.push_back(std::move(m));
  }
  return out;
}

// Tagged image pi(f(S^p)(x)) where x has W-index variables.
Tagged push_through_square_top(const SymHom& f, int s, const MonoTuple& x, const std::vector<Monomial>& W) {
  Tagged out;
  for (const auto& [y, c] : apply_symhom(f, s, x)) {
    MonoTuple z = substitute(y, 1, [&](int w) -> const Monomial& { return W[w]; });
    z.insert(z.begin(), y[0]);
    out.emplace_back(std::move(z), c);
  }
  return merge_terms(*f.F, std::move(out));
}

long long sym_tensor_count(long long n, const std::vector<int>& lambda) {
  long long total = 1;
  for (int l : lambda) {
    total *= binomial(n + l - 1, l);
    if (total > (1LL << 40)) return total;
  }
  return total;
}

// Square pi o f(S^p) = fbar o pi at k^n, exhaustive up to cap elements per summand.
bool square_holds(const SymHom& f, const SymHom& fbar, int n, const LiftOptions& opt, bool& sampled,
                  std::string& detail) {
  const int p = static_cast<int>(f.F->p());
  const auto& W = monomials(n, p);
  const int w = static_cast<int>(W.size());
  std::mt19937_64 rng(opt.seed);
  for (std::size_t s = 0; s < f.source.terms.size(); ++s) {
    const auto& lambda = f.source.terms[s];
    auto check = [&](const MonoTuple& x) {
      const Tagged lhs = push_through_square_top(f, static_cast<int>(s), x, W);
      const MonoTuple px = substitute(x, 0, [&](int v) -> const Monomial& { return W[v]; });
      const Tagged rhs = apply_symhom(fbar, static_cast<int>(s), px);
      return lhs == rhs;
    };
    const long long count = sym_tensor_count(w, lambda);
    if (count <= opt.sample_cap) {
      const SymTensorBasis B(w, lambda);
      for (int i = 0; i < B.size(); ++i)
        if (!check(B.element(i))) {
          detail += "square fails at n=" + std::to_string(n) + " summand " + std::to_string(s) + "; ";
          return false;
        }
    } else {
      sampled = true;
      std::uniform_int_distribution<int> pick(0, w - 1);
      for (int t = 0; t < opt.sample_cap; ++t) {
        MonoTuple x;
        for (int l : lambda) {
          Monomial m(l);
          for (int& v : m) v = pick(rng);
          std::sort(m.begin(), m.end());
          x.push_back(std::move(m));
        }
        if (!check(x)) {
          detail += "square fails at n=" + std::to_string(n) + " summand " + std::to_string(s) + " (sampled); ";
          return false;
        }
      }
    }
  }
  return true;
}

std::vector<int> positive_parts(const std::vector<int>& lambda) {
  std::vector<int> out;
  for (int l : lambda)
    if (l > 0) out.push_back(l);
  return out;
}

// Frobenius inclusion S^lambda(I^(1)) -> S^{p lambda} at k^n; zero parts are S^0 = k.
FFMatrix frobenius_inclusion(const FieldPtr& K, int p, const std::vector<int>& lambda, int n) {
  const auto parts = positive_parts(lambda);
  if (parts.empty()) return FFMatrix::identity(K, 1);
  return eval_nat(nat::frob_incl(p, parts), K, n);
}

FFMatrix frobenius_inclusion_sum(const FieldPtr& K, int p, const SymSum& s, int n) {
  std::vector<FFMatrix> blocks;
  for (const auto& t : s.terms) blocks.push_back(frobenius_inclusion(K, p, t, n));
  return block_diag(K, blocks);
}

// Composite S^lambda(I^(1)) -> S^lambda(S^p) -> S^{p lambda}, built on basis tuples.
bool frobenius_composite_holds(const FieldPtr& K, int p, const SymSum& src, int n) {
  for (const auto& lambda : src.terms) {
    const SymTensorBasis B(n, lambda);
    std::vector<int> pl;
    for (int l : lambda) pl.push_back(p * l);
    const SymTensorBasis BP(n, pl);
    const auto& W = monomials(n, p);
    const auto& Widx = monomial_index(n, p);
    std::vector<Triplet> t;
    for (int i = 0; i < B.size(); ++i) {
      // x^(1) -> x^p in S^p, then multiply out.
      MonoTuple lifted;
      for (const auto& m : B.element(i)) {
        Monomial wm;
        for (int v : m) wm.push_back(Widx.at(Monomial(p, v)));
        lifted.push_back(std::move(wm));
      }
      const MonoTuple y = substitute(lifted, 0, [&](int w) -> const Monomial& { return W[w]; });
      t.push_back({BP.index(y), i, 1});
    }
    if (FFMatrix::from_triplets(K, BP.size(), B.size(), std::move(t)) != frobenius_inclusion(K, p, lambda, n))
      return false;
  }
  return true;
}

int total_degree(const SymHom& f) {
  const int d = f.target.degree();
  return d >= 0 ? d : std::max(f.source.degree(), 0);
}

// Factors of the Troesch tensor holding a symmetric tensor with tuple t; the empty
// tuple is the unit k = B_0.
std::vector<int> space_factors(const std::vector<int>& t) { return t.empty() ? std::vector<int>{0} : t; }
MonoTuple to_space(const MonoTuple& x, const std::vector<int>& t) { return t.empty() ? MonoTuple{Monomial{}} : x; }
MonoTuple from_space(const MonoTuple& x, const std::vector<int>& t) { return t.empty() ? MonoTuple{} : x; }

std::vector<TroeschSpace> spaces_for(const SymSum& scaled, int p, int n) {
  std::vector<TroeschSpace> out;
  for (const auto& t : scaled.terms) out.emplace_back(p, space_factors(t), n);
  return out;
}

std::vector<int> degree_offsets(const std::vector<TroeschSpace>& S, int k) {
  std::vector<int> off{0};
  for (const auto& s : S) off.push_back(off.back() + s.dim(k));
  return off;
}

int max_length(const std::vector<TroeschSpace>& S) {
  int len = 0;
  for (const auto& s : S) len = std::max(len, s.length());
  return len;
}

// (summand, local index) of a global index.
std::pair<int, int> locate(const std::vector<int>& off, int idx) {
  const int s = static_cast<int>(std::upper_bound(off.begin(), off.end(), idx) - off.begin()) - 1;
  return {s, idx - off[s]};
}

std::vector<int> concat(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> c = a;
  c.insert(c.end(), b.begin(), b.end());
  return c;
}

}  // namespace

LiftResult twist_lift_checked(const SymHom& f, const LiftOptions& opt) {
  LiftResult res;
  const FieldPtr& K = f.F;
  const int p = static_cast<int>(K->p());
  const SymSum src_p = scaled_sum(f.source, p), tgt_p = scaled_sum(f.target, p);
  // Super-variable w stands for the degree-p monomial x_{wp} ... x_{wp+p-1}.
  auto block = [p](int w) {
    Monomial m(p);
    for (int i = 0; i < p; ++i) m[i] = w * p + i;
    return m;
  };
  auto image = [&](int s) {
    SummandImage out;
    for (const auto& [y, c] : apply_symhom(f, s, multilinear_tuple(f.source.terms[s]))) {
      MonoTuple z = substitute(y, 1, block);
      out.emplace_back(y[0][0], std::move(z), c);
    }
    return out;
  };
  auto cand = symhom_from_multilinear(K, src_p, tgt_p, image);
  if (!cand) {
    res.check.detail = "multilinear value is not a pattern combination";
    return res;
  }
  res.check.candidate = true;
  const int D = p * total_degree(f);
  const int n = std::max(D, 1);
  res.check.square_at_D = square_holds(f, *cand, n, opt, res.check.sampled, res.check.detail);
  res.check.square_at_D1 = square_holds(f, *cand, n + 1, opt, res.check.sampled, res.check.detail);
  res.check.frobenius_composite = frobenius_composite_holds(K, p, f.source, std::max(total_degree(f), 1));
  {
    const int m = std::max(total_degree(f), 1);
    res.check.lifting_diagram = eval_symhom(*cand, m) * frobenius_inclusion_sum(K, p, f.source, m) ==
                                frobenius_inclusion_sum(K, p, f.target, m) * eval_symhom(f, m);
    if (!res.check.lifting_diagram) res.check.detail += "lifting diagram fails; ";
  }
  if (res.check.pass()) res.lift = std::move(cand);
  return res;
}

std::optional<SymHom> twist_lift(const SymHom& f, const LiftOptions& opt) { return twist_lift_checked(f, opt).lift; }

SymSum flatten(const FunctorExpr& F) {
  switch (F->kind) {
    case FunctorKind::Id:
      return SymSum{{{1}}};
    case FunctorKind::Sym:
      return SymSum{{{F->a}}};
    case FunctorKind::Const:
      return SymSum{{{}}};
    case FunctorKind::Sum: {
      SymSum out;
      for (const auto& c : F->children) {
        const SymSum s = flatten(c);
        out.terms.insert(out.terms.end(), s.terms.begin(), s.terms.end());
      }
      return out;
    }
    case FunctorKind::Tensor: {
      SymSum out{{{}}};
      for (const auto& c : F->children) {
        const SymSum s = flatten(c);
        SymSum next;
        for (const auto& a : out.terms)
          for (const auto& b : s.terms) next.terms.push_back(concat(a, b));
        out = std::move(next);
      }
      return out;
    }
    default:
      throw std::invalid_argument("flatten: " + to_sexpr(F) + " is not an iterated symmetric tensor");
  }
}

std::vector<int> xi_index(const FunctorExpr& F, int n) {
  switch (F->kind) {
    case FunctorKind::Id:
    case FunctorKind::Sym:
    case FunctorKind::Const: {
      std::vector<int> id(eval_dim(F, n));
      for (std::size_t i = 0; i < id.size(); ++i) id[i] = static_cast<int>(i);
      return id;
    }
    case FunctorKind::Sum: {
      std::vector<int> out;
      int offset = 0;
      for (const auto& c : F->children) {
        for (int g : xi_index(c, n)) out.push_back(offset + g);
        offset += eval_dim(c, n);
      }
      return out;
    }
    case FunctorKind::Tensor: {
      const std::size_t k = F->children.size();
      std::vector<std::vector<int>> xi(k), sizes(k), offs(k);
      std::vector<int> dims(k);
      for (std::size_t m = 0; m < k; ++m) {
        xi[m] = xi_index(F->children[m], n);
        dims[m] = static_cast<int>(xi[m].size());
        offs[m].push_back(0);
        for (const auto& t : flatten(F->children[m]).terms) {
          sizes[m].push_back(SymTensorBasis(n, t).size());
          offs[m].push_back(offs[m].back() + sizes[m].back());
        }
      }
      // Offsets of the flattened summands, indexed by the mixed-radix tuple (j_1..j_k).
      std::vector<int> flat_off{0};
      {
        std::vector<int> j(k, 0);
        int count = 1;
        for (std::size_t m = 0; m < k; ++m) count *= static_cast<int>(sizes[m].size());
        for (int J = 0; J < count; ++J) {
          int rest = J, sz = 1;
          for (int m = static_cast<int>(k) - 1; m >= 0; --m) {
            const int r = static_cast<int>(sizes[m].size());
            sz *= sizes[m][rest % r];
            rest /= r;
          }
          flat_off.push_back(flat_off.back() + sz);
        }
      }
      int total = 1;
      for (int d : dims) total *= d;
      std::vector<int> out(total);
      std::vector<int> b(k), jm(k), loc(k);
      for (int idx = 0; idx < total; ++idx) {
        int rest = idx;
        for (int m = static_cast<int>(k) - 1; m >= 0; --m) {
          b[m] = rest % dims[m];
          rest /= dims[m];
        }
        int J = 0, local = 0;
        for (std::size_t m = 0; m < k; ++m) {
          const auto [j, l] = locate(offs[m], xi[m][b[m]]);
          J = J * static_cast<int>(sizes[m].size()) + j;
          local = local * sizes[m][j] + l;
        }
        out[idx] = flat_off[J] + local;
      }
      return out;
    }
    default:
      throw std::invalid_argument("xi_index: " + to_sexpr(F) + " is not an iterated symmetric tensor");
  }
}

FFMatrix xi_matrix(const FunctorExpr& F, FieldPtr K, int n) {
  const auto xi = xi_index(F, n);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < xi.size(); ++i) t.push_back({xi[i], static_cast<int>(i), 1});
  return FFMatrix::from_triplets(std::move(K), static_cast<int>(xi.size()), static_cast<int>(xi.size()), std::move(t));
}

std::vector<TroeschSpace> TObject::spaces(int n) const { return spaces_for(scaled_sum(flat, p), p, n); }

NComplex TObject::evaluate(FieldPtr K, int n, const std::vector<BlockKey>& coord_keys) const {
  std::vector<NComplex> parts;
  for (const auto& t : scaled_sum(flat, p).terms) parts.push_back(troesch_tensor(K, space_factors(t), p, n, coord_keys));
  return direct_sum(K, p, parts);
}

FFMatrix TObject::augmentation(FieldPtr K, int n) const { return frobenius_inclusion_sum(K, p, flat, n); }

TObject T_object(const FunctorExpr& F, int p) { return TObject{flatten(F), p}; }
TObject T_object(const SymSum& flat, int p) { return TObject{flat, p}; }

TMapAction::TMapAction(SymHom fbar, int n) : fbar_(std::move(fbar)) {
  const int p = static_cast<int>(fbar_.F->p());
  S_ = spaces_for(fbar_.source, p, n);
  T_ = spaces_for(fbar_.target, p, n);
}

int TMapAction::length() const { return std::max(max_length(S_), max_length(T_)); }
int TMapAction::source_dim(int k) const { return degree_offsets(S_, k).back(); }
int TMapAction::target_dim(int k) const { return degree_offsets(T_, k).back(); }

SparseVec TMapAction::column(int k, int i) const {
  const auto soff = degree_offsets(S_, k), toff = degree_offsets(T_, k);
  const auto [s, local] = locate(soff, i);
  const MonoTuple x = from_space(S_[s].element(k, local), fbar_.source.terms[s]);
  std::vector<std::pair<int, fe>> raw;
  for (const auto& [y, c] : apply_symhom(fbar_, s, x)) {
    const int t = y[0][0];
    const MonoTuple z = to_space(MonoTuple(y.begin() + 1, y.end()), fbar_.target.terms[t]);
    raw.emplace_back(toff[t] + T_[t].index(z), c);
  }
  return normalize_vec(*fbar_.F, std::move(raw));
}

SparseVec TMapAction::apply(int k, const SparseVec& v) const {
  SparseVec out;
  for (const auto& [i, c] : v) out = axpy(*fbar_.F, out, c, column(k, i));
  return out;
}

ChainMap T_map_lifted(const SymHom& fbar, int n) {
  const TMapAction act(fbar, n);
  ChainMap out;
  for (int k = 0; k < act.length(); ++k) {
    std::vector<SparseVec> cols;
    const int sd = act.source_dim(k);
    cols.reserve(sd);
    for (int i = 0; i < sd; ++i) cols.push_back(act.column(k, i));
    out.f.push_back(FFMatrix::from_columns(fbar.F, act.target_dim(k), std::move(cols)));
  }
  return out;
}

ChainMap T_map(const SymHom& f, int n, const LiftOptions& opt) {
  const auto res = twist_lift_checked(f, opt);
  if (!res.lift) throw std::invalid_argument("T_map: map is not twist compatible: " + res.check.detail);
  return T_map_lifted(*res.lift, n);
}

std::optional<SymHom> to_symhom(const NatMap& u, const FunctorExpr& source, const FunctorExpr& target, FieldPtr K) {
  const SymSum fs = flatten(source), ft = flatten(target);
  const int n = std::max(source->degree, 1);
  const FFMatrix U = eval_nat(u, K, n);
  const auto xs = xi_index(source, n), xt = xi_index(target, n);
  std::vector<int> inv_src(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) inv_src[xs[i]] = static_cast<int>(i);
  std::vector<SymTensorBasis> sb, tb;
  std::vector<int> soff{0}, toff{0};
  for (const auto& t : fs.terms) {
    sb.emplace_back(n, t);
    soff.push_back(soff.back() + sb.back().size());
  }
  for (const auto& t : ft.terms) {
    tb.emplace_back(n, t);
    toff.push_back(toff.back() + tb.back().size());
  }
  auto image = [&](int s) {
    SummandImage out;
    const int g = soff[s] + sb[s].index(multilinear_tuple(fs.terms[s]));
    for (const auto& [r, c] : U.column(inv_src[g])) {
      const auto [t, local] = locate(toff, xt[r]);
      out.emplace_back(t, tb[t].element(local), c);
    }
    return out;
  };
  return symhom_from_multilinear(K, fs, ft, image);
}

ChainMap T_monoidal(const FunctorExpr& F, const FunctorExpr& G, int p, int n) {
  const FieldPtr K = Field::get(p);
  const TObject tf = T_object(F, p), tg = T_object(G, p), tfg = T_object(fx::tensor({F, G}), p);
  const NComplex A = tf.evaluate(K, n), B = tg.evaluate(K, n);
  const auto SA = tf.spaces(n), SB = tg.spaces(n), SFG = tfg.spaces(n);
  const SymSum fa = scaled_sum(tf.flat, p), fb = scaled_sum(tg.flat, p), ffg = scaled_sum(tfg.flat, p);
  const TensorLayout L = tensor_layout(A, B);
  const int len = static_cast<int>(L.dims.size());
  ChainMap out;
  for (int k = 0; k < len; ++k) {
    const auto toff = degree_offsets(SFG, k);
    std::vector<Triplet> trip;
    for (const auto& sm : L.degrees[k]) {
      const auto aoff = degree_offsets(SA, sm.left), boff = degree_offsets(SB, sm.right);
      const int db = B.dim(sm.right);
      for (int ia = 0; ia < A.dim(sm.left); ++ia) {
        const auto [i, la] = locate(aoff, ia);
        const MonoTuple x = from_space(SA[i].element(sm.left, la), fa.terms[i]);
        for (int ib = 0; ib < db; ++ib) {
          const auto [j, lb] = locate(boff, ib);
          MonoTuple z = x;
          const MonoTuple y = from_space(SB[j].element(sm.right, lb), fb.terms[j]);
          z.insert(z.end(), y.begin(), y.end());
          const int J = i * static_cast<int>(fb.terms.size()) + j;
          trip.push_back({toff[J] + SFG[J].index(to_space(z, ffg.terms[J])), sm.offset + ia * db + ib, 1});
        }
      }
    }
    out.f.push_back(FFMatrix::from_triplets(K, toff.back(), L.dims[k], std::move(trip)));
  }
  return out;
}

}  // namespace artifact
