#include "artifact/complex.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "artifact/linalg.hpp"

namespace artifact {

NComplex::NComplex(FieldPtr F, int N, std::vector<int> dims, std::vector<FFMatrix> d, bool check)
    : F_(std::move(F)), N_(N), dims_(std::move(dims)), d_(std::move(d)) {
  if (N_ < 2) throw std::invalid_argument("N-complex needs N >= 2");
  const int len = length();
  if (static_cast<int>(d_.size()) > len) throw std::invalid_argument("too many differentials");
  while (static_cast<int>(d_.size()) < len) {
    const int k = static_cast<int>(d_.size());
    d_.emplace_back(F_, dim(k + 1), dim(k));
  }
  for (int k = 0; k < len; ++k)
    if (d_[k].rows() != dim(k + 1) || d_[k].cols() != dim(k))
      throw std::invalid_argument("differential shape mismatch in degree " + std::to_string(k));
  into_zero_ = FFMatrix(F_, dim(0), 0);
  outside_ = FFMatrix(F_, 0, 0);
  if (check && !nilpotent())
    throw std::invalid_argument("d^" + std::to_string(N_) + " != 0");
}

const FFMatrix& NComplex::d(int k) const {
  if (k >= 0 && k < length()) return d_[k];
  return k == -1 ? into_zero_ : outside_;
}

FFMatrix NComplex::d_power(int k, int r) const {
  FFMatrix out = FFMatrix::identity(F_, dim(k));
  for (int i = 0; i < r; ++i) out = d(k + i) * out;
  return out;
}

bool NComplex::nilpotent() const {
  for (int k = 0; k < length(); ++k)
    if (!d_power(k, N_).is_zero()) return false;
  return true;
}

const std::vector<BlockKey>& NComplex::keys(int k) const {
  static const std::vector<BlockKey> empty;
  if (k < 0 || k >= static_cast<int>(keys_.size())) return empty;
  return keys_[k];
}

void NComplex::set_keys(std::vector<std::vector<BlockKey>> keys) {
  if (keys.empty()) {
    keys_.clear();
    return;
  }
  if (static_cast<int>(keys.size()) != length()) throw std::invalid_argument("key degree count");
  for (int k = 0; k < length(); ++k)
    if (static_cast<int>(keys[k].size()) != dim(k)) throw std::invalid_argument("key count");
  for (int k = 0; k + 1 < length(); ++k)
    d_[k].for_each([&](int r, int c, fe) {
      if (keys[k + 1][r] != keys[k][c])
        throw std::logic_error("differential crosses blocks in degree " + std::to_string(k));
    });
  keys_ = std::move(keys);
}

bool NComplex::operator==(const NComplex& o) const {
  if (N_ != o.N_) return false;
  const int len = std::max(length(), o.length());
  for (int k = 0; k < len; ++k) {
    if (dim(k) != o.dim(k)) return false;
    if (d(k) != o.d(k)) return false;
  }
  return true;
}

BasedComplex make_complex(FieldPtr F, std::vector<int> dims, std::vector<FFMatrix> d) {
  return NComplex(std::move(F), 2, std::move(dims), std::move(d));
}

NComplex direct_sum(FieldPtr F, int N, const std::vector<NComplex>& parts) {
  int len = 0;
  bool keyed = !parts.empty();
  for (const auto& c : parts) {
    len = std::max(len, c.length());
    keyed = keyed && c.has_keys();
  }
  std::vector<int> dims(len, 0);
  std::vector<FFMatrix> d;
  std::vector<std::vector<BlockKey>> keys(len);
  for (int k = 0; k < len; ++k) {
    std::vector<FFMatrix> blocks;
    for (const auto& c : parts) {
      dims[k] += c.dim(k);
      if (k + 1 < len) blocks.push_back(c.d(k));
      if (keyed && k < c.length()) keys[k].insert(keys[k].end(), c.keys(k).begin(), c.keys(k).end());
    }
    if (k + 1 < len) d.push_back(block_diag(F, blocks));
  }
  NComplex out(std::move(F), N, std::move(dims), std::move(d), false);
  if (keyed) out.set_keys(std::move(keys));
  return out;
}

FFMatrix ChainMap::at(const FieldPtr& F, int k, int rows, int cols) const {
  if (k >= 0 && k < static_cast<int>(f.size())) return f[k];
  return FFMatrix(F, rows, cols);
}

bool is_chain_map(const ChainMap& f, const NComplex& C, const NComplex& D) {
  const auto& F = C.field();
  const int len = std::max({C.length(), D.length(), static_cast<int>(f.f.size())});
  for (int k = 0; k < len; ++k) {
    const FFMatrix fk = f.at(F, k, D.dim(k), C.dim(k));
    const FFMatrix fk1 = f.at(F, k + 1, D.dim(k + 1), C.dim(k + 1));
    if (fk.rows() != D.dim(k) || fk.cols() != C.dim(k)) return false;
    if (D.d(k) * fk != fk1 * C.d(k)) return false;
  }
  return true;
}

ChainMap compose(const ChainMap& g, const ChainMap& f, const NComplex& C, const NComplex& E) {
  ChainMap out;
  const int len = std::max(C.length(), E.length());
  const auto& F = C.field();
  for (int k = 0; k < len; ++k) {
    if (k < static_cast<int>(f.f.size()) && k < static_cast<int>(g.f.size()))
      out.f.push_back(g.f[k] * f.f[k]);
    else
      out.f.emplace_back(F, E.dim(k), C.dim(k));
  }
  return out;
}

Homology homology(const BasedComplex& C, int k, bool with_reps) {
  Homology h;
  if (C.dim(k) == 0) return h;
  const FFMatrix& dk = C.d(k);
  KernelRank kr = kernel_rank(dk);
  h.kernel_dim = static_cast<int>(kr.kernel_basis.size());
  const FFMatrix& prev = C.d(k - 1);
  Echelon image(C.field(), C.dim(k));
  for (int c = 0; c < prev.cols(); ++c) image.insert(prev.column(c));
  h.image_rank = image.rank();
  h.dim = h.kernel_dim - h.image_rank;
  if (with_reps) {
    for (auto& z : kr.kernel_basis)
      if (image.insert(z)) h.cycle_reps.push_back(z);
  }
  return h;
}

std::vector<int> homology_dims(const BasedComplex& C) {
  std::vector<int> out;
  for (int k = 0; k < C.length(); ++k) out.push_back(homology(C, k, false).dim);
  return out;
}

namespace {

struct Block {
  std::vector<int> prev, cur, next;  // global indices in degrees k-1, k, k+1
  std::vector<Triplet> in, out;      // entries of d^{k-1} and d^k in local coordinates
};

std::vector<Block> split_blocks(const BasedComplex& C, int k) {
  if (!C.has_keys()) throw std::invalid_argument("complex has no block keys");
  std::map<BlockKey, int> index;
  std::vector<Block> blocks;
  std::vector<int> local_prev(C.dim(k - 1)), local_cur(C.dim(k)), local_next(C.dim(k + 1));
  auto block_of = [&](BlockKey key) {
    auto [it, inserted] = index.emplace(key, static_cast<int>(blocks.size()));
    if (inserted) blocks.emplace_back();
    return it->second;
  };
  for (int i = 0; i < C.dim(k); ++i) {
    Block& b = blocks[block_of(C.keys(k)[i])];
    local_cur[i] = static_cast<int>(b.cur.size());
    b.cur.push_back(i);
  }
  for (int i = 0; i < C.dim(k - 1); ++i) {
    Block& b = blocks[block_of(C.keys(k - 1)[i])];
    local_prev[i] = static_cast<int>(b.prev.size());
    b.prev.push_back(i);
  }
  for (int i = 0; i < C.dim(k + 1); ++i) {
    Block& b = blocks[block_of(C.keys(k + 1)[i])];
    local_next[i] = static_cast<int>(b.next.size());
    b.next.push_back(i);
  }
  C.d(k - 1).for_each([&](int r, int c, fe v) {
    blocks[index.at(C.keys(k)[r])].in.push_back({local_cur[r], local_prev[c], v});
  });
  C.d(k).for_each([&](int r, int c, fe v) {
    blocks[index.at(C.keys(k)[c])].out.push_back({local_next[r], local_cur[c], v});
  });
  return blocks;
}

int block_homology(const FieldPtr& F, Block& b) {
  if (b.cur.empty()) return 0;
  const int n = static_cast<int>(b.cur.size());
  const int r_out = rank(FFMatrix::from_triplets(F, static_cast<int>(b.next.size()), n, std::move(b.out)));
  const int r_in = rank(FFMatrix::from_triplets(F, n, static_cast<int>(b.prev.size()), std::move(b.in)));
  return n - r_out - r_in;
}

}  // namespace

int blocked_homology_dim_serial(const BasedComplex& C, int k) {
  auto blocks = split_blocks(C, k);
  int total = 0;
  for (auto& b : blocks) total += block_homology(C.field(), b);
  return total;
}

int blocked_homology_dim_parallel(const BasedComplex& C, int k) {
  auto blocks = split_blocks(C, k);
  const int nb = static_cast<int>(blocks.size());
  int total = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : total)
  for (int i = 0; i < nb; ++i) total += block_homology(C.field(), blocks[i]);
  return total;
}

}  // namespace artifact
