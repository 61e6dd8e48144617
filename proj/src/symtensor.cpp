#include "artifact/symtensor.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace artifact {

namespace {

std::vector<std::pair<int, int>> runs_of(const Monomial& m) {
  std::vector<std::pair<int, int>> out;
  for (int v : m) {
    if (!out.empty() && out.back().first == v)
      ++out.back().second;
    else
      out.emplace_back(v, 1);
  }
  return out;
}

fe binom_mod(const Field& F, int n, int k) { return F.from_int(binomial(n, k) % F.p()); }

// All ways to split monomial m into ordered parts of the given sizes, with the
// multinomial coefficient of the iterated comultiplication.
void splittings(const Field& F, const Monomial& m, const std::vector<int>& sizes,
                std::vector<std::pair<std::vector<Monomial>, fe>>& out) {
  const auto rs = runs_of(m);
  std::vector<Monomial> parts(sizes.size());
  std::vector<int> room = sizes;
  std::function<void(std::size_t, fe)> by_run = [&](std::size_t r, fe coef) {
    if (r == rs.size()) {
      for (int x : room)
        if (x != 0) return;
      out.emplace_back(parts, coef);
      return;
    }
    const auto [var, count] = rs[r];
    // distribute count copies of var over the parts
    std::function<void(std::size_t, int, fe)> by_part = [&](std::size_t j, int left, fe c) {
      if (j + 1 == sizes.size()) {
        if (left > room[j]) return;
        room[j] -= left;
        for (int z = 0; z < left; ++z) parts[j].push_back(var);
        by_run(r + 1, c);
        for (int z = 0; z < left; ++z) parts[j].pop_back();
        room[j] += left;
        return;
      }
      for (int take = std::min(left, room[j]); take >= 0; --take) {
        const fe b = binom_mod(F, left, take);
        if (b == 0) continue;
        room[j] -= take;
        for (int z = 0; z < take; ++z) parts[j].push_back(var);
        by_part(j + 1, left - take, F.mul(c, b));
        for (int z = 0; z < take; ++z) parts[j].pop_back();
        room[j] += take;
      }
    };
    if (sizes.empty()) return;
    by_part(0, count, coef);
  };
  by_run(0, 1);
}

std::mutex mono_mu;
std::map<std::pair<int, int>, std::vector<Monomial>> mono_lists;
std::map<std::pair<int, int>, std::map<Monomial, int>> mono_maps;

}  // namespace

std::vector<std::pair<MonoTuple, fe>> apply_pattern(const Field& F, const Pattern& M, const MonoTuple& x) {
  const std::size_t k = M.size();
  if (x.size() != k) throw std::invalid_argument("pattern rows differ from tuple length");
  const std::size_t l = k ? M[0].size() : 0;
  std::vector<std::vector<std::pair<std::vector<Monomial>, fe>>> per_factor(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (std::accumulate(M[i].begin(), M[i].end(), 0) != static_cast<int>(x[i].size()))
      throw std::invalid_argument("pattern row sum differs from factor degree");
    splittings(F, x[i], M[i], per_factor[i]);
  }
  std::vector<std::pair<MonoTuple, fe>> out;
  std::vector<std::size_t> choice(k, 0);
  std::function<void(std::size_t, fe)> rec = [&](std::size_t i, fe coef) {
    if (i == k) {
      MonoTuple y(l);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t j = 0; j < l; ++j) {
          const auto& part = per_factor[a][choice[a]].first[j];
          y[j].insert(y[j].end(), part.begin(), part.end());
        }
      for (auto& m : y) std::sort(m.begin(), m.end());
      out.emplace_back(std::move(y), coef);
      return;
    }
    for (std::size_t c = 0; c < per_factor[i].size(); ++c) {
      choice[i] = c;
      rec(i + 1, F.mul(coef, per_factor[i][c].second));
    }
  };
  if (k == 0) {
    out.emplace_back(MonoTuple(l), 1);
    return out;
  }
  rec(0, 1);
  // Different splittings can produce the same target tuple.
  std::sort(out.begin(), out.end());
  std::vector<std::pair<MonoTuple, fe>> merged;
  for (auto& [y, c] : out) {
    if (!merged.empty() && merged.back().first == y)
      merged.back().second = F.add(merged.back().second, c);
    else
      merged.emplace_back(std::move(y), c);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(), [](const auto& e) { return e.second == 0; }),
               merged.end());
  return merged;
}

int SymSum::degree() const {
  if (terms.empty()) return -1;
  const int d = std::accumulate(terms[0].begin(), terms[0].end(), 0);
  for (const auto& t : terms)
    if (std::accumulate(t.begin(), t.end(), 0) != d) throw std::invalid_argument("inhomogeneous symmetric-tensor sum");
  return d;
}

SymSum scaled_sum(const SymSum& s, int factor) {
  SymSum out = s;
  for (auto& t : out.terms)
    for (int& x : t) x *= factor;
  return out;
}

FunctorExpr symsum_functor(const SymSum& s) {
  std::vector<FunctorExpr> terms;
  for (const auto& t : s.terms) terms.push_back(fx::sym_tensor(t));
  return fx::sum(std::move(terms));
}

std::string to_string(const SymSum& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.terms.size(); ++i) {
    out += i ? " (" : "(";
    for (std::size_t j = 0; j < s.terms[i].size(); ++j) out += (j ? " " : "") + std::to_string(s.terms[i][j]);
    out += ")";
  }
  return out + ")";
}

std::vector<Pattern> hom_basis(const std::vector<int>& lambda, const std::vector<int>& mu) {
  if (std::accumulate(lambda.begin(), lambda.end(), 0) != std::accumulate(mu.begin(), mu.end(), 0))
    throw std::invalid_argument("hom_basis: degrees differ");
  const std::size_t k = lambda.size(), l = mu.size();
  std::vector<Pattern> out;
  Pattern M(k, std::vector<int>(l, 0));
  std::vector<int> col_room = mu;
  // Fill row-major, larger entries first, so the output is descending lexicographic.
  std::function<void(std::size_t, std::size_t, int)> rec = [&](std::size_t i, std::size_t j, int row_left) {
    if (i == k) {
      for (int c : col_room)
        if (c != 0) return;
      out.push_back(M);
      return;
    }
    if (j + 1 == l || l == 0) {
      if (l == 0) {
        if (row_left == 0) rec(i + 1, 0, i + 1 < k ? lambda[i + 1] : 0);
        return;
      }
      if (row_left > col_room[j]) return;
      M[i][j] = row_left;
      col_room[j] -= row_left;
      rec(i + 1, 0, i + 1 < k ? lambda[i + 1] : 0);
      col_room[j] += row_left;
      M[i][j] = 0;
      return;
    }
    for (int v = std::min(row_left, col_room[j]); v >= 0; --v) {
      M[i][j] = v;
      col_room[j] -= v;
      rec(i, j + 1, row_left - v);
      col_room[j] += v;
    }
    M[i][j] = 0;
  };
  rec(0, 0, k ? lambda[0] : 0);
  if (k == 0) {
    for (int c : mu)
      if (c != 0) return {};
    return {M};
  }
  return out;
}

void SymHom::normalize() {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.target, a.source, a.pattern) < std::tie(b.target, b.source, b.pattern);
  });
  std::vector<Entry> merged;
  for (auto& e : entries) {
    if (!merged.empty() && merged.back().target == e.target && merged.back().source == e.source &&
        merged.back().pattern == e.pattern)
      merged.back().coef = F->add(merged.back().coef, e.coef);
    else
      merged.push_back(std::move(e));
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(), [](const Entry& e) { return e.coef == 0; }),
               merged.end());
  entries = std::move(merged);
}

bool SymHom::is_zero() const {
  SymHom c = *this;
  c.normalize();
  return c.entries.empty();
}

SymHom sym_zero(FieldPtr F, SymSum source, SymSum target) {
  return SymHom{std::move(F), std::move(source), std::move(target), {}};
}

SymHom sym_identity(FieldPtr F, const SymSum& s) {
  SymHom h{F, s, s, {}};
  for (std::size_t i = 0; i < s.terms.size(); ++i) {
    const std::size_t k = s.terms[i].size();
    Pattern M(k, std::vector<int>(k, 0));
    for (std::size_t a = 0; a < k; ++a) M[a][a] = s.terms[i][a];
    h.entries.push_back({static_cast<int>(i), static_cast<int>(i), M, 1});
  }
  return h;
}

std::vector<std::pair<MonoTuple, fe>> apply_symhom(const SymHom& f, int s, const MonoTuple& x) {
  std::vector<std::pair<MonoTuple, fe>> out;
  for (const auto& e : f.entries) {
    if (e.source != s) continue;
    for (auto& [y, c] : apply_pattern(*f.F, e.pattern, x)) {
      // Tag the target summand in a leading pseudo-factor to keep one flat list.
      MonoTuple tagged;
      tagged.reserve(y.size() + 1);
      tagged.push_back(Monomial{e.target});
      for (auto& m : y) tagged.push_back(std::move(m));
      out.emplace_back(std::move(tagged), f.F->mul(e.coef, c));
    }
  }
  std::sort(out.begin(), out.end());
  std::vector<std::pair<MonoTuple, fe>> merged;
  for (auto& [y, c] : out) {
    if (!merged.empty() && merged.back().first == y)
      merged.back().second = f.F->add(merged.back().second, c);
    else
      merged.emplace_back(std::move(y), c);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(), [](const auto& e) { return e.second == 0; }),
               merged.end());
  return merged;
}

MonoTuple multilinear_tuple(const std::vector<int>& lambda) {
  MonoTuple x;
  int next = 0;
  for (int l : lambda) {
    Monomial m(l);
    std::iota(m.begin(), m.end(), next);
    next += l;
    x.push_back(std::move(m));
  }
  return x;
}

std::optional<std::vector<std::pair<Pattern, fe>>> decompose_multilinear(
    const std::vector<int>& lambda, const std::vector<int>& mu,
    const std::vector<std::pair<MonoTuple, fe>>& image) {
  const int D = std::accumulate(lambda.begin(), lambda.end(), 0);
  std::vector<int> owner(D);
  {
    int v = 0;
    for (std::size_t i = 0; i < lambda.size(); ++i)
      for (int z = 0; z < lambda[i]; ++z) owner[v++] = static_cast<int>(i);
  }
  std::map<Pattern, std::pair<fe, long long>> seen;  // coefficient, number of tuples
  for (const auto& [y, c] : image) {
    if (c == 0) continue;
    if (y.size() != mu.size()) return std::nullopt;
    Pattern M(lambda.size(), std::vector<int>(mu.size(), 0));
    std::vector<int> used(D, 0);
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (static_cast<int>(y[j].size()) != mu[j]) return std::nullopt;
      for (int v : y[j]) {
        if (v < 0 || v >= D || used[v]++) return std::nullopt;
        ++M[owner[v]][j];
      }
    }
    auto [it, fresh] = seen.emplace(M, std::make_pair(c, 0LL));
    if (!fresh && it->second.first != c) return std::nullopt;
    ++it->second.second;
  }
  std::vector<std::pair<Pattern, fe>> out;
  for (const auto& [M, cc] : seen) {
    // The pattern map sends the multilinear element to every compatible assignment
    // of variables, each with coefficient 1.
    long long expected = 1;
    for (std::size_t i = 0; i < M.size(); ++i) {
      int left = lambda[i];
      for (int x : M[i]) {
        expected *= binomial(left, x);
        left -= x;
      }
    }
    if (cc.second != expected) return std::nullopt;
    out.emplace_back(M, cc.first);
  }
  return out;
}

std::optional<SymHom> symhom_from_multilinear(FieldPtr F, const SymSum& source, const SymSum& target,
                                              const std::function<SummandImage(int)>& image) {
  SymHom h{F, source, target, {}};
  for (std::size_t s = 0; s < source.terms.size(); ++s) {
    std::map<int, std::vector<std::pair<MonoTuple, fe>>> by_target;
    for (auto& [t, y, c] : image(static_cast<int>(s))) {
      if (t < 0 || t >= static_cast<int>(target.terms.size())) return std::nullopt;
      by_target[t].emplace_back(y, c);
    }
    for (auto& [t, list] : by_target) {
      // Merge repeated tuples before decomposing.
      std::sort(list.begin(), list.end());
      std::vector<std::pair<MonoTuple, fe>> merged;
      for (auto& [y, c] : list) {
        if (!merged.empty() && merged.back().first == y)
          merged.back().second = F->add(merged.back().second, c);
        else
          merged.emplace_back(y, c);
      }
      auto parts = decompose_multilinear(source.terms[s], target.terms[t], merged);
      if (!parts) return std::nullopt;
      for (auto& [M, c] : *parts) h.entries.push_back({t, static_cast<int>(s), M, c});
    }
  }
  h.normalize();
  return h;
}

SymHom sym_compose(const SymHom& g, const SymHom& f) {
  if (!(g.source == f.target)) throw std::invalid_argument("sym_compose: source of g differs from target of f");
  auto img = [&](int s) {
    SummandImage out;
    for (const auto& [y, c] : apply_symhom(f, s, multilinear_tuple(f.source.terms[s]))) {
      const int mid = y[0][0];
      const MonoTuple yy(y.begin() + 1, y.end());
      for (const auto& [z, c2] : apply_symhom(g, mid, yy))
        out.emplace_back(z[0][0], MonoTuple(z.begin() + 1, z.end()), f.F->mul(c, c2));
    }
    return out;
  };
  auto h = symhom_from_multilinear(f.F, f.source, g.target, img);
  if (!h) throw std::logic_error("composite of natural maps is not a pattern combination");
  return *h;
}

SymHom sym_add(const SymHom& a, const SymHom& b) {
  if (!(a.source == b.source) || !(a.target == b.target)) throw std::invalid_argument("sym_add: shapes differ");
  SymHom h = a;
  h.entries.insert(h.entries.end(), b.entries.begin(), b.entries.end());
  h.normalize();
  return h;
}

SymHom sym_scale(fe c, const SymHom& a) {
  SymHom h = a;
  for (auto& e : h.entries) e.coef = a.F->mul(c, e.coef);
  h.normalize();
  return h;
}

bool sym_equal(const SymHom& a, const SymHom& b) {
  if (!(a.source == b.source) || !(a.target == b.target)) return false;
  SymHom x = a, y = b;
  x.normalize();
  y.normalize();
  if (x.entries.size() != y.entries.size()) return false;
  for (std::size_t i = 0; i < x.entries.size(); ++i) {
    const auto &e = x.entries[i], &f = y.entries[i];
    if (e.target != f.target || e.source != f.source || e.pattern != f.pattern || e.coef != f.coef) return false;
  }
  return true;
}

const std::vector<Monomial>& monomials(int n, int d) {
  std::lock_guard<std::mutex> lock(mono_mu);
  auto key = std::make_pair(n, d);
  auto it = mono_lists.find(key);
  if (it == mono_lists.end()) {
    it = mono_lists.emplace(key, multisets(n, d)).first;
    std::map<Monomial, int> idx;
    for (std::size_t i = 0; i < it->second.size(); ++i) idx.emplace(it->second[i], static_cast<int>(i));
    mono_maps.emplace(key, std::move(idx));
  }
  return it->second;
}

const std::map<Monomial, int>& monomial_index(int n, int d) {
  monomials(n, d);
  std::lock_guard<std::mutex> lock(mono_mu);
  return mono_maps.at(std::make_pair(n, d));
}

SymTensorBasis::SymTensorBasis(int n, std::vector<int> lambda) : n_(n), lambda_(std::move(lambda)) {
  for (int l : lambda_) {
    lists_.push_back(&monomials(n_, l));
    maps_.push_back(&monomial_index(n_, l));
    radix_.push_back(static_cast<int>(lists_.back()->size()));
    size_ *= radix_.back();
  }
}

MonoTuple SymTensorBasis::element(int idx) const {
  MonoTuple x(lambda_.size());
  for (int k = static_cast<int>(lambda_.size()) - 1; k >= 0; --k) {
    x[k] = (*lists_[k])[idx % radix_[k]];
    idx /= radix_[k];
  }
  return x;
}

int SymTensorBasis::index(const MonoTuple& x) const {
  int idx = 0;
  for (std::size_t k = 0; k < lambda_.size(); ++k) idx = idx * radix_[k] + maps_[k]->at(x[k]);
  return idx;
}

int symsum_dim(const SymSum& s, int n) {
  int d = 0;
  for (const auto& t : s.terms) d += SymTensorBasis(n, t).size();
  return d;
}

FFMatrix eval_symhom(const SymHom& f, int n) {
  std::vector<SymTensorBasis> src, tgt;
  std::vector<int> soff{0}, toff{0};
  for (const auto& t : f.source.terms) {
    src.emplace_back(n, t);
    soff.push_back(soff.back() + src.back().size());
  }
  for (const auto& t : f.target.terms) {
    tgt.emplace_back(n, t);
    toff.push_back(toff.back() + tgt.back().size());
  }
  std::vector<Triplet> trip;
  for (std::size_t s = 0; s < src.size(); ++s)
    for (int x = 0; x < src[s].size(); ++x)
      for (const auto& [y, c] : apply_symhom(f, static_cast<int>(s), src[s].element(x))) {
        const int t = y[0][0];
        trip.push_back({toff[t] + tgt[t].index(MonoTuple(y.begin() + 1, y.end())), soff[s] + x, c});
      }
  return FFMatrix::from_triplets(f.F, toff.back(), soff.back(), std::move(trip));
}

std::string to_string(const SymHom& f) {
  auto pattern_str = [](const Pattern& M) {
    std::string s = "(";
    for (std::size_t i = 0; i < M.size(); ++i) {
      s += i ? " (" : "(";
      for (std::size_t j = 0; j < M[i].size(); ++j) s += (j ? " " : "") + std::to_string(M[i][j]);
      s += ")";
    }
    return s + ")";
  };
  std::string out = "(symhom (source " + to_string(f.source) + ") (target " + to_string(f.target) + ")";
  for (const auto& e : f.entries)
    out += " (entry " + std::to_string(e.target) + " " + std::to_string(e.source) + " " + pattern_str(e.pattern) +
           " " + f.F->to_string(e.coef) + ")";
  return out + ")";
}

}  // namespace artifact
