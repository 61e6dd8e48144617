#include "artifact/linalg.hpp"

#include <stdexcept>

namespace artifact {

namespace {

// Normalize so the leading coefficient is 1.
void make_monic(const Field& F, SparseVec& v) {
  if (v.empty() || v.front().second == 1) return;
  const fe inv = F.inv(v.front().second);
  for (auto& e : v) e.second = F.mul(inv, e.second);
}

// Dense Gauss-Jordan on a row-major buffer; returns RREF rows as sparse vectors.
std::vector<SparseVec> dense_rref(const Field& F, int rows, int cols, std::vector<fe> a) {
  std::vector<SparseVec> out;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (a[static_cast<std::size_t>(i) * cols + c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < cols; ++j)
        std::swap(a[static_cast<std::size_t>(piv) * cols + j], a[static_cast<std::size_t>(r) * cols + j]);
    fe* row = &a[static_cast<std::size_t>(r) * cols];
    const fe inv = F.inv(row[c]);
    for (int j = c; j < cols; ++j) row[j] = F.mul(inv, row[j]);
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      fe* other = &a[static_cast<std::size_t>(i) * cols];
      const fe f = other[c];
      if (f == 0) continue;
      const fe nf = F.neg(f);
      for (int j = c; j < cols; ++j)
        if (row[j] != 0) other[j] = F.add(other[j], F.mul(nf, row[j]));
    }
    ++r;
  }
  for (int i = 0; i < r; ++i) {
    SparseVec v;
    for (int j = 0; j < cols; ++j) {
      const fe x = a[static_cast<std::size_t>(i) * cols + j];
      if (x != 0) v.emplace_back(j, x);
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

bool Echelon::insert(SparseVec v) {
  const Field& F = *F_;
  while (!v.empty()) {
    auto it = rows_.find(v.front().first);
    if (it == rows_.end()) break;
    v = axpy(F, v, F.neg(v.front().second), it->second);
  }
  if (v.empty()) return false;
  make_monic(F, v);
  const int lead = v.front().first;
  rows_.emplace(lead, std::move(v));
  return true;
}

SparseVec Echelon::reduce(SparseVec v) const {
  const Field& F = *F_;
  std::size_t pos = 0;
  while (pos < v.size()) {
    auto it = rows_.find(v[pos].first);
    if (it == rows_.end()) {
      ++pos;
      continue;
    }
    // Stored rows only touch indices >= their lead, so entries before pos are final.
    v = axpy(F, v, F.neg(v[pos].second), it->second);
  }
  return v;
}

void Echelon::make_reduced() {
  const Field& F = *F_;
  // Process from the right so each row is reduced against already-reduced rows.
  for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
    SparseVec& v = it->second;
    std::size_t pos = 1;
    while (pos < v.size()) {
      auto jt = rows_.find(v[pos].first);
      if (jt == rows_.end() || jt->first == it->first) {
        ++pos;
        continue;
      }
      v = axpy(F, v, F.neg(v[pos].second), jt->second);
    }
  }
}

Echelon rref(const FFMatrix& M) {
  Echelon e(M.field(), M.cols());
  if (M.dense()) {
    std::vector<fe> a(static_cast<std::size_t>(M.rows()) * M.cols(), 0);
    M.for_each([&](int r, int c, fe v) { a[static_cast<std::size_t>(r) * M.cols() + c] = v; });
    for (auto& row : dense_rref(*M.field(), M.rows(), M.cols(), std::move(a))) e.insert(std::move(row));
    return e;
  }
  for (auto& row : M.row_vectors()) e.insert(std::move(row));
  e.make_reduced();
  return e;
}

KernelRank kernel_rank(const FFMatrix& M) {
  const Field& F = *M.field();
  Echelon e = rref(M);
  KernelRank out;
  out.rank = e.rank();
  // Column f of the RREF gives, for each pivot c, the coefficient R_c[f].
  std::vector<std::vector<std::pair<int, fe>>> by_col(static_cast<std::size_t>(M.cols()));
  for (const auto& [lead, row] : e.rows())
    for (const auto& [c, v] : row)
      if (c != lead) by_col[c].emplace_back(lead, F.neg(v));
  for (int f = 0; f < M.cols(); ++f) {
    if (e.rows().count(f)) continue;
    SparseVec v = std::move(by_col[f]);
    v.emplace_back(f, 1);
    out.kernel_basis.push_back(normalize_vec(F, std::move(v)));
  }
  return out;
}

int rank(const FFMatrix& M) {
  if (M.rows() < M.cols() && !M.dense()) {
    Echelon e(M.field(), M.cols());
    for (auto& row : M.row_vectors()) e.insert(std::move(row));
    return e.rank();
  }
  if (M.dense()) return rref(M).rank();
  Echelon e(M.field(), M.rows());
  for (int c = 0; c < M.cols(); ++c) e.insert(M.column(c));
  return e.rank();
}

bool SpanSolver::insert(const SparseVec& v) {
  const Field& F = *F_;
  Row r{v, SparseVec{{count_, 1}}};
  ++count_;
  while (!r.vec.empty()) {
    auto it = rows_.find(r.vec.front().first);
    if (it == rows_.end()) break;
    const fe f = F.neg(r.vec.front().second);
    r.vec = axpy(F, r.vec, f, it->second.vec);
    r.combo = axpy(F, r.combo, f, it->second.combo);
  }
  if (r.vec.empty()) return false;
  const fe inv = F.inv(r.vec.front().second);
  r.vec = scaled(F, inv, r.vec);
  r.combo = scaled(F, inv, r.combo);
  const int lead = r.vec.front().first;
  rows_.emplace(lead, std::move(r));
  return true;
}

std::optional<SparseVec> SpanSolver::express(const SparseVec& v) const {
  const Field& F = *F_;
  SparseVec rest = v, x;
  while (!rest.empty()) {
    auto it = rows_.find(rest.front().first);
    if (it == rows_.end()) return std::nullopt;
    const fe a = rest.front().second;
    rest = axpy(F, rest, F.neg(a), it->second.vec);
    x = axpy(F, x, a, it->second.combo);
  }
  return x;
}

std::optional<SparseVec> solve(const FFMatrix& A, const SparseVec& b) {
  SpanSolver s(A.field(), A.rows());
  for (int c = 0; c < A.cols(); ++c) s.insert(A.column(c));
  return s.express(b);
}

std::vector<SparseVec> common_kernel(const std::vector<FFMatrix>& ms, int width, FieldPtr F) {
  Echelon e(F, width);
  for (const auto& m : ms) {
    if (m.cols() != width) throw std::invalid_argument("common_kernel width mismatch");
    for (auto& row : m.row_vectors()) e.insert(std::move(row));
  }
  std::vector<SparseVec> rows;
  for (const auto& [lead, row] : e.rows()) rows.push_back(row);
  return kernel_rank(FFMatrix::from_columns(F, width, std::move(rows)).transpose()).kernel_basis;
}

SparseVec coordinates(const std::vector<SparseVec>& basis, const SparseVec& v, FieldPtr F, int width) {
  SpanSolver s(std::move(F), width);
  for (const auto& b : basis) s.insert(b);
  auto x = s.express(v);
  if (!x) throw std::invalid_argument("vector not in span of basis");
  return *x;
}

}  // namespace artifact
