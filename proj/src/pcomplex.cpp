#include "artifact/pcomplex.hpp"

#include <algorithm>
#include <stdexcept>

#include "artifact/linalg.hpp"

namespace artifact {

int contracted_position(int j, int N, int s) { return (j / 2) * N + ((j % 2) ? s : 0); }

BasedComplex contract(const NComplex& C, int s) {
  const int N = C.N();
  if (s < 1 || s > N - 1) throw std::invalid_argument("contraction index out of range");
  int count = 0;
  while (contracted_position(count, N, s) < C.length()) ++count;
  std::vector<int> dims;
  std::vector<FFMatrix> d;
  for (int j = 0; j < count; ++j) {
    const int pos = contracted_position(j, N, s);
    dims.push_back(C.dim(pos));
    d.push_back(C.d_power(pos, (j % 2) ? N - s : s));
  }
  BasedComplex out(C.field(), 2, std::move(dims), std::move(d));
  if (C.has_keys()) {
    std::vector<std::vector<BlockKey>> keys;
    for (int j = 0; j < count; ++j) keys.push_back(C.keys(contracted_position(j, N, s)));
    out.set_keys(std::move(keys));
  }
  return out;
}

ChainMap contract_map(const ChainMap& f, const NComplex& C, const NComplex& D, int s) {
  const int N = C.N();
  ChainMap out;
  const int len = std::max(contract(C, s).length(), contract(D, s).length());
  for (int j = 0; j < len; ++j) {
    const int pos = contracted_position(j, N, s);
    out.f.push_back(f.at(C.field(), pos, D.dim(pos), C.dim(pos)));
  }
  return out;
}

int tilde_source_degree(int i, int N) { return (i % N == 0) ? 2 * (i / N) : 2 * (i / N) + 1; }

NComplex tilde(const BasedComplex& K, int N) {
  if (N < 2) throw std::invalid_argument("tilde needs N >= 2");
  const int L = K.length();
  int len = 0;
  if (L > 0) len = ((L - 1) % 2 == 0) ? ((L - 1) / 2) * N + 1 : ((L - 1) / 2 + 1) * N;
  std::vector<int> dims;
  std::vector<FFMatrix> d;
  for (int i = 0; i < len; ++i) {
    const int j = tilde_source_degree(i, N);
    dims.push_back(K.dim(j));
    const int r = i % N;
    // Inside a block of copies of K^{odd} the map is the identity.
    if (r >= 1 && r < N - 1)
      d.push_back(FFMatrix::identity(K.field(), K.dim(j)));
    else
      d.push_back(K.d(j));
  }
  NComplex out(K.field(), N, std::move(dims), std::move(d));
  if (K.has_keys()) {
    std::vector<std::vector<BlockKey>> keys;
    for (int i = 0; i < len; ++i) keys.push_back(K.keys(tilde_source_degree(i, N)));
    out.set_keys(std::move(keys));
  }
  return out;
}

ChainMap eta(const NComplex& C) {
  const int N = C.N();
  const NComplex src = tilde(contract(C, 1), N);
  ChainMap out;
  const int len = std::max(src.length(), C.length());
  for (int i = 0; i < len; ++i) {
    const int r = i % N;
    if (r == 0)
      out.f.push_back(FFMatrix::identity(C.field(), C.dim(i)));
    else
      out.f.push_back(C.d_power(i - r + 1, r - 1));
  }
  return out;
}

int TensorLayout::offset(int n, int i) const {
  if (n < 0 || n >= static_cast<int>(degrees.size())) return -1;
  for (const auto& s : degrees[n])
    if (s.left == i) return s.offset;
  return -1;
}

TensorLayout tensor_layout(const NComplex& C, const NComplex& D) {
  TensorLayout t;
  const int len = (C.length() == 0 || D.length() == 0) ? 0 : C.length() + D.length() - 1;
  t.degrees.resize(len);
  t.dims.assign(len, 0);
  for (int n = 0; n < len; ++n)
    for (int i = 0; i <= n; ++i) {
      const int sz = C.dim(i) * D.dim(n - i);
      if (sz == 0) continue;
      t.degrees[n].push_back({i, n - i, t.dims[n]});
      t.dims[n] += sz;
    }
  return t;
}

namespace {

// Tensor differential with sign (-1)^i on 1 x d_D when signed.
NComplex tensor_impl(const NComplex& C, const NComplex& D, int N, bool signed_rule) {
  const auto& F = C.field();
  const TensorLayout t = tensor_layout(C, D);
  const int len = static_cast<int>(t.dims.size());
  const fe minus_one = F->neg(1);
  std::vector<FFMatrix> d;
  for (int n = 0; n < len; ++n) {
    std::vector<Triplet> trip;
    for (const auto& s : t.degrees[n]) {
      const int i = s.left, j = s.right;
      const int dj = D.dim(j);
      const int left_off = t.offset(n + 1, i + 1);
      if (left_off >= 0) {
        C.d(i).for_each([&](int r, int c, fe v) {
          for (int b = 0; b < dj; ++b) trip.push_back({left_off + r * dj + b, s.offset + c * dj + b, v});
        });
      }
      const int right_off = t.offset(n + 1, i);
      if (right_off >= 0) {
        const int dj1 = D.dim(j + 1);
        const fe sign = (signed_rule && (i % 2)) ? minus_one : fe{1};
        D.d(j).for_each([&](int r, int c, fe v) {
          const fe w = F->mul(sign, v);
          for (int a = 0; a < C.dim(i); ++a) trip.push_back({right_off + a * dj1 + r, s.offset + a * dj + c, w});
        });
      }
    }
    const int rows = n + 1 < len ? t.dims[n + 1] : 0;
    d.push_back(FFMatrix::from_triplets(F, rows, t.dims[n], std::move(trip)));
  }
  NComplex out(F, N, t.dims, std::move(d), false);
  if (C.has_keys() && D.has_keys()) {
    std::vector<std::vector<BlockKey>> keys(len);
    for (int n = 0; n < len; ++n) {
      keys[n].reserve(t.dims[n]);
      for (const auto& s : t.degrees[n])
        for (BlockKey a : C.keys(s.left))
          for (BlockKey b : D.keys(s.right)) keys[n].push_back(a + b);
    }
    out.set_keys(std::move(keys));
  }
  return out;
}

}  // namespace

NComplex tensor_p(const NComplex& C, const NComplex& D) {
  const int p = C.N();
  if (D.N() != p) throw std::invalid_argument("tensor_p: nilpotency orders differ");
  if (!is_prime(p)) throw std::invalid_argument("tensor_p: N must be prime");
  if (C.field()->p() != p) throw std::invalid_argument("tensor_p: N must equal the field characteristic");
  return tensor_impl(C, D, p, false);
}

BasedComplex tensor_ord(const BasedComplex& K, const BasedComplex& L) {
  if (K.N() != 2 || L.N() != 2) throw std::invalid_argument("tensor_ord needs ordinary complexes");
  return tensor_impl(K, L, 2, true);
}

ChainMap tensor_maps(const ChainMap& f, const ChainMap& g, const NComplex& C, const NComplex& D,
                     const NComplex& C2, const NComplex& D2) {
  const auto& F = C.field();
  const TensorLayout src = tensor_layout(C, D);
  const TensorLayout tgt = tensor_layout(C2, D2);
  const int len = static_cast<int>(std::max(src.dims.size(), tgt.dims.size()));
  ChainMap out;
  for (int n = 0; n < len; ++n) {
    const int rows = n < static_cast<int>(tgt.dims.size()) ? tgt.dims[n] : 0;
    const int cols = n < static_cast<int>(src.dims.size()) ? src.dims[n] : 0;
    std::vector<Triplet> trip;
    if (n < static_cast<int>(src.dims.size())) {
      for (const auto& s : src.degrees[n]) {
        const int toff = tgt.offset(n, s.left);
        if (toff < 0) continue;
        const FFMatrix blk = kron(f.at(F, s.left, C2.dim(s.left), C.dim(s.left)),
                                  g.at(F, s.right, D2.dim(s.right), D.dim(s.right)));
        blk.for_each([&](int r, int c, fe v) { trip.push_back({toff + r, s.offset + c, v}); });
      }
    }
    out.f.push_back(FFMatrix::from_triplets(F, rows, cols, std::move(trip)));
  }
  return out;
}

ChainMap H_map(const BasedComplex& K, const BasedComplex& L, int p) {
  const auto& F = K.field();
  const BasedComplex src = tensor_ord(K, L);
  const NComplex tK = tilde(K, p), tL = tilde(L, p);
  const TensorLayout sl = tensor_layout(K, L);
  const TensorLayout tl = tensor_layout(tK, tL);
  const BasedComplex tgt = contract(tensor_p(tK, tL), 1);
  const int len = std::max(src.length(), tgt.length());
  ChainMap out;
  for (int deg = 0; deg < len; ++deg) {
    std::vector<Triplet> trip;
    const int pos = contracted_position(deg, p, 1);
    if (deg < static_cast<int>(sl.dims.size())) {
      for (const auto& s : sl.degrees[deg]) {
        const int i = s.left;
        const int block = K.dim(i) * L.dim(deg - i);
        auto place = [&](int a, fe coef) {
          const int toff = tl.offset(pos, a);
          if (toff < 0) throw std::logic_error("H_map: missing target summand");
          for (int x = 0; x < block; ++x) trip.push_back({toff + x, s.offset + x, coef});
        };
        const int k = i / 2;
        if (deg % 2 == 0) {
          if (i % 2 == 0) {
            place(k * p, 1);
          } else {
            // Signed diagonal applied to -x': copy r gets (-1)^r.
            for (int r = 1; r <= p - 1; ++r) place(k * p + r, (r % 2) ? F->neg(1) : fe{1});
          }
        } else {
          place(i % 2 == 0 ? k * p : k * p + 1, 1);
        }
      }
    }
    out.f.push_back(FFMatrix::from_triplets(F, tgt.dim(deg), src.dim(deg), std::move(trip)));
  }
  return out;
}

ChainMap h_map(const NComplex& C, const NComplex& D) {
  const int p = C.N();
  const BasedComplex C1 = contract(C, 1), D1 = contract(D, 1);
  const ChainMap H = H_map(C1, D1, p);
  const NComplex tC = tilde(C1, p), tD = tilde(D1, p);
  const ChainMap e = tensor_maps(eta(C), eta(D), tC, tD, C, D);
  const ChainMap ec = contract_map(e, tensor_p(tC, tD), tensor_p(C, D), 1);
  const BasedComplex src = tensor_ord(C1, D1);
  const BasedComplex tgt = contract(tensor_p(C, D), 1);
  const BasedComplex mid = contract(tensor_p(tC, tD), 1);
  const int len = std::max(src.length(), tgt.length());
  ChainMap out;
  for (int j = 0; j < len; ++j) {
    const FFMatrix Hj = H.at(C.field(), j, mid.dim(j), src.dim(j));
    const FFMatrix Ej = ec.at(C.field(), j, tgt.dim(j), Hj.rows());
    out.f.push_back(Ej * Hj);
  }
  return out;
}

PEmbeddings p_embed(const NComplex& C, const NComplex& D) {
  const int p = C.N();
  const auto& F = C.field();
  const TensorLayout lp = tensor_layout(C, D);
  const BasedComplex C1 = contract(C, 1), D1 = contract(D, 1);
  const TensorLayout lo = tensor_layout(C1, D1);
  const BasedComplex tp = contract(tensor_p(C, D), 1);
  const BasedComplex to = tensor_ord(C1, D1);
  const int len = std::max(tp.length(), to.length());
  PEmbeddings out;
  for (int deg = 0; deg < len; ++deg) {
    std::vector<Triplet> ip, io;
    int sdim = 0;
    if (deg % 2 == 0) {
      const int jsum = deg / 2;
      for (int k = 0; k <= jsum; ++k) {
        const int l = jsum - k;
        const int block = C.dim(k * p) * D.dim(l * p);
        if (block == 0) continue;
        const int op = lp.offset(jsum * p, k * p);
        const int oo = lo.offset(deg, 2 * k);
        if (op < 0 || oo < 0) throw std::logic_error("p_embed: summand not found");
        for (int x = 0; x < block; ++x) {
          ip.push_back({op + x, sdim + x, 1});
          io.push_back({oo + x, sdim + x, 1});
        }
        sdim += block;
      }
    }
    out.into_p.source_dims.push_back(sdim);
    out.into_ord.source_dims.push_back(sdim);
    out.into_p.maps.push_back(FFMatrix::from_triplets(F, tp.dim(deg), sdim, std::move(ip)));
    out.into_ord.maps.push_back(FFMatrix::from_triplets(F, to.dim(deg), sdim, std::move(io)));
  }
  return out;
}

CoresolutionReport is_p_coresolution(const NComplex& C, int expected_h0, const FFMatrix* augmentation) {
  CoresolutionReport rep;
  for (int s = 1; s <= C.N() - 1; ++s) {
    const BasedComplex K = contract(C, s);
    std::vector<int> dims = homology_dims(K);
    if (dims.empty()) dims.push_back(0);
    if (dims[0] != expected_h0) {
      rep.pass = false;
      rep.detail += "s=" + std::to_string(s) + ": H^0 dimension " + std::to_string(dims[0]) +
                    " != " + std::to_string(expected_h0) + "; ";
    }
    for (std::size_t k = 1; k < dims.size(); ++k)
      if (dims[k] != 0) {
        rep.pass = false;
        rep.detail += "s=" + std::to_string(s) + ": H^" + std::to_string(k) + " = " +
                      std::to_string(dims[k]) + "; ";
      }
    if (augmentation) {
      if (!(K.d(0) * *augmentation).is_zero()) {
        rep.pass = false;
        rep.detail += "s=" + std::to_string(s) + ": augmentation not killed by d; ";
      }
    }
    rep.homology.push_back(std::move(dims));
  }
  if (augmentation && rank(*augmentation) != expected_h0) {
    rep.pass = false;
    rep.detail += "augmentation rank differs from H^0; ";
  }
  return rep;
}

}  // namespace artifact
