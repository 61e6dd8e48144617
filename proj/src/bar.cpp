#include "artifact/bar.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "artifact/linalg.hpp"
#include "artifact/twistcat.hpp"

namespace artifact {

namespace {

std::vector<std::vector<int>> compositions(int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int left) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int x = 1; x <= left; ++x) {
      cur.push_back(x);
      rec(left - x);
      cur.pop_back();
    }
  };
  if (m > 0) rec(m);
  return out;
}

std::vector<OuterWord> outer_words(int d) {
  std::vector<OuterWord> out;
  OuterWord cur;
  std::function<void(int)> rec = [&](int left) {
    if (left == 0) {
      if (!cur.empty()) out.push_back(cur);
      return;
    }
    for (int m = 1; m <= left; ++m)
      for (const auto& inner : compositions(m)) {
        cur.push_back(inner);
        rec(left - m);
        cur.pop_back();
      }
  };
  rec(d);
  return out;
}

std::vector<int> lengths(const OuterWord& w) {
  std::vector<int> l;
  for (const auto& x : w) l.push_back(static_cast<int>(x.size()));
  return l;
}

// Inner-word lengths descending lexicographic, then letters descending lexicographic.
bool word_order(const OuterWord& a, const OuterWord& b) {
  const auto la = lengths(a), lb = lengths(b);
  if (la != lb) return la > lb;
  return a > b;
}

// All shuffles of p and q positions: for each, the position in the merged word of
// every element of the first and second word, and the inversion parity.
struct Shuffle {
  std::vector<int> first, second;
  int sign;  // +1 or -1
};
std::vector<Shuffle> shuffles(int p, int q) {
  std::vector<Shuffle> out;
  std::vector<int> pick(p + q, 0);
  std::fill(pick.begin() + q, pick.end(), 1);  // 1 marks a slot of the first word
  do {
    Shuffle s;
    int inversions = 0, seen_second = 0;
    for (int pos = 0; pos < p + q; ++pos) {
      if (pick[pos]) {
        s.first.push_back(pos);
        inversions += seen_second;
      } else {
        s.second.push_back(pos);
        ++seen_second;
      }
    }
    s.sign = inversions % 2 ? -1 : 1;
    out.push_back(std::move(s));
  } while (std::next_permutation(pick.begin(), pick.end()));
  return out;
}

// Position of every factor of w in word_tuple(w).
std::vector<std::vector<int>> factor_positions(const OuterWord& w) {
  std::vector<std::vector<int>> pos;
  int next = 0;
  for (const auto& x : w) {
    pos.emplace_back();
    for (std::size_t j = 0; j < x.size(); ++j) pos.back().push_back(next++);
  }
  return pos;
}

fe sign_in(const Field& F, int s) { return s >= 0 ? fe{1} : F.neg(1); }

// Pattern sending source factor r whole to target factor col[r].
Pattern assignment_pattern(const std::vector<int>& src, const std::vector<int>& col, int targets) {
  Pattern M(src.size(), std::vector<int>(targets, 0));
  for (std::size_t r = 0; r < src.size(); ++r) M[r][col[r]] = src[r];
  return M;
}

struct Graded {
  std::vector<std::vector<OuterWord>> words;
  std::vector<std::map<OuterWord, int>> index;
};

Graded grade(const std::vector<OuterWord>& all, int ncls, const std::function<int(const OuterWord&)>& cls) {
  Graded g;
  g.words.assign(ncls, {});
  for (const auto& w : all) g.words[cls(w)].push_back(w);
  for (auto& level : g.words) {
    std::sort(level.begin(), level.end(), word_order);
    std::map<OuterWord, int> idx;
    for (std::size_t i = 0; i < level.size(); ++i) idx.emplace(level[i], static_cast<int>(i));
    g.index.push_back(std::move(idx));
  }
  return g;
}

SymSum sum_of(const std::vector<OuterWord>& ws) {
  SymSum s;
  for (const auto& w : ws) s.terms.push_back(word_tuple(w));
  return s;
}

// Inner differential on the inner word at letter i of w: merge entries j, j+1 with
// sign (-1)^{j+1} (1-based j+1). Emits (target word, factor map, sign).
template <class Emit>
void inner_terms(const OuterWord& w, std::size_t i, Emit emit) {
  const auto pos = factor_positions(w);
  const int total = static_cast<int>(word_tuple(w).size());
  const auto& x = w[i];
  for (std::size_t j = 0; j + 1 < x.size(); ++j) {
    OuterWord t = w;
    t[i].erase(t[i].begin() + static_cast<long>(j) + 1);
    t[i][j] = x[j] + x[j + 1];
    std::vector<int> col(total);
    for (int r = 0; r < total; ++r) col[r] = r < pos[i][j + 1] ? r : r - 1;
    emit(t, col, (j + 1) % 2 ? -1 : 1);
  }
}

}  // namespace

std::vector<int> word_tuple(const OuterWord& w) {
  std::vector<int> t;
  for (const auto& x : w) t.insert(t.end(), x.begin(), x.end());
  return t;
}

int poly_degree(const OuterWord& w) {
  const auto t = word_tuple(w);
  return std::accumulate(t.begin(), t.end(), 0);
}

int bar_degree(const OuterWord& w) {
  int s = 0;
  for (const auto& x : w) s += static_cast<int>(x.size()) + 1;
  return s;
}

std::string to_string(const OuterWord& w) {
  std::string s = "[";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += "|";
    s += "(";
    for (std::size_t j = 0; j < w[i].size(); ++j) s += (j ? "|" : "") + std::to_string(w[i][j]);
    s += ")";
  }
  return s + "]";
}

BasedComplex TwistComplex::evaluate(int n) const {
  std::vector<int> dims;
  for (const auto& o : objects) dims.push_back(symsum_dim(o, n));
  std::vector<FFMatrix> d;
  for (const auto& h : diffs) d.push_back(eval_symhom(h, n));
  return make_complex(F, std::move(dims), std::move(d));
}

TwistComplex inner_bar(FieldPtr F, int d) {
  if (d < 1) throw std::invalid_argument("inner_bar: d >= 1");
  std::vector<OuterWord> all;
  for (const auto& c : compositions(d)) all.push_back(OuterWord{c});
  const Graded g = grade(all, d, [d](const OuterWord& w) { return d - static_cast<int>(w[0].size()); });
  TwistComplex out{F, {}, g.words, {}};
  for (const auto& ws : g.words) out.objects.push_back(sum_of(ws));
  for (int c = 0; c + 1 < d; ++c) {
    SymHom h{F, out.objects[c], out.objects[c + 1], {}};
    for (std::size_t s = 0; s < g.words[c].size(); ++s) {
      const OuterWord& w = g.words[c][s];
      inner_terms(w, 0, [&](const OuterWord& t, const std::vector<int>& col, int sg) {
        h.entries.push_back({g.index[c + 1].at(t), static_cast<int>(s),
                             assignment_pattern(word_tuple(w), col, static_cast<int>(word_tuple(t).size())),
                             sign_in(*F, sg)});
      });
    }
    h.normalize();
    out.diffs.push_back(std::move(h));
  }
  return out;
}

TwistComplex build_Jd(FieldPtr F, int d) {
  if (d < 1) throw std::invalid_argument("build_Jd: d >= 1");
  const int len = 2 * d - 1;
  const Graded g = grade(outer_words(d), len, [d](const OuterWord& w) { return 2 * d - bar_degree(w); });
  TwistComplex out{F, {}, g.words, {}};
  for (const auto& ws : g.words) out.objects.push_back(sum_of(ws));
  for (int c = 0; c + 1 < len; ++c) {
    SymHom h{F, out.objects[c], out.objects[c + 1], {}};
    for (std::size_t s = 0; s < g.words[c].size(); ++s) {
      const OuterWord& w = g.words[c][s];
      const auto src = word_tuple(w);
      const auto pos = factor_positions(w);
      const int nletters = static_cast<int>(w.size());
      auto emit = [&](const OuterWord& t, const std::vector<int>& col, int sg) {
        h.entries.push_back({g.index[c + 1].at(t), static_cast<int>(s),
                             assignment_pattern(src, col, static_cast<int>(word_tuple(t).size())), sign_in(*F, sg)});
      };
      // d_E: letters i, i+1 merged by the shuffle product.
      int eps = 0;
      for (int i = 0; i + 1 < nletters; ++i) {
        eps += static_cast<int>(w[i].size()) + 1;
        const auto& a = w[i];
        const auto& b = w[i + 1];
        for (const auto& sh : shuffles(static_cast<int>(a.size()), static_cast<int>(b.size()))) {
          InnerWord merged(a.size() + b.size());
          for (std::size_t j = 0; j < a.size(); ++j) merged[sh.first[j]] = a[j];
          for (std::size_t j = 0; j < b.size(); ++j) merged[sh.second[j]] = b[j];
          OuterWord t(w.begin(), w.begin() + i);
          t.push_back(merged);
          t.insert(t.end(), w.begin() + i + 2, w.end());
          std::vector<int> col(src.size());
          const int base = pos[i][0];
          for (std::size_t r = 0; r < src.size(); ++r) col[r] = static_cast<int>(r);
          for (std::size_t j = 0; j < a.size(); ++j) col[pos[i][j]] = base + sh.first[j];
          for (std::size_t j = 0; j < b.size(); ++j) col[pos[i + 1][j]] = base + sh.second[j];
          emit(t, col, (eps % 2 ? -1 : 1) * sh.sign);
        }
      }
      // d_I: suspended inner differential (sd = -d) on one letter with the Koszul sign
      // past the earlier letters. With these signs d_E anticommutes with d_I, so the
      // total differential is the plain sum.
      int before = 0;
      for (int i = 0; i < nletters; ++i) {
        const int outer = (before % 2 ? -1 : 1) * -1;
        inner_terms(w, static_cast<std::size_t>(i),
                    [&](const OuterWord& t, const std::vector<int>& col, int sg) { emit(t, col, outer * sg); });
        before += static_cast<int>(w[i].size()) + 1;
      }
    }
    h.normalize();
    out.diffs.push_back(std::move(h));
  }
  return out;
}

std::vector<long long> Jd_dims(int d, int n) {
  std::vector<long long> dims(std::max(2 * d - 1, 0), 0);
  for (const auto& w : outer_words(d)) {
    long long sz = 1;
    for (int x : word_tuple(w)) sz *= binomial(n + x - 1, x);
    dims[2 * d - bar_degree(w)] += sz;
  }
  return dims;
}

JdReport verify_Jd(FieldPtr F, int d, const std::vector<int>& dims) {
  JdReport rep;
  const TwistComplex J = build_Jd(F, d);
  for (std::size_t c = 0; c < J.diffs.size(); ++c)
    if (!twist_lift(J.diffs[c])) {
      rep.differentials_lift = false;
      rep.pass = false;
      rep.detail += "differential " + std::to_string(c) + " does not lift; ";
    }
  for (int n : dims) {
    const BasedComplex C = J.evaluate(n);
    JdRow row{n, homology_dims(C), eval_dim(fx::gamma(d), n), true};
    if (!C.nilpotent()) {
      row.pass = false;
      rep.detail += "d^2 != 0 at n=" + std::to_string(n) + "; ";
    }
    for (std::size_t k = 0; k < row.homology.size(); ++k)
      if (row.homology[k] != (k == 0 ? row.gamma_dim : 0)) row.pass = false;
    // Gamma^d -> (x)^d = J^0 lands in the cycles with image of full rank.
    const FFMatrix incl = d == 1 ? FFMatrix::identity(F, n) : eval_nat(nat::diag_gamma(std::vector<int>(d, 1)), F, n);
    if (!(C.d(0) * incl).is_zero() || rank(incl) != row.gamma_dim) row.pass = false;
    if (!row.pass) {
      rep.pass = false;
      rep.detail += "homology mismatch at n=" + std::to_string(n) + "; ";
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace artifact
