#include "artifact/matrix.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace artifact {

SparseVec axpy(const Field& F, const SparseVec& y, fe a, const SparseVec& x) {
  if (a == 0 || x.empty()) return y;
  SparseVec out;
  out.reserve(y.size() + x.size());
  std::size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(y[i++]);
    } else if (i == y.size() || x[j].first < y[i].first) {
      out.emplace_back(x[j].first, F.mul(a, x[j].second));
      ++j;
    } else {
      const fe s = F.add(y[i].second, F.mul(a, x[j].second));
      if (s != 0) out.emplace_back(y[i].first, s);
      ++i;
      ++j;
    }
  }
  return out;
}

SparseVec scaled(const Field& F, fe a, const SparseVec& x) {
  if (a == 0) return {};
  SparseVec out = x;
  for (auto& e : out) e.second = F.mul(a, e.second);
  return out;
}

fe coefficient(const SparseVec& v, int index) {
  auto it = std::lower_bound(v.begin(), v.end(), std::make_pair(index, fe{0}),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
  return (it != v.end() && it->first == index) ? it->second : 0;
}

SparseVec normalize_vec(const Field& F, std::vector<std::pair<int, fe>> raw) {
  std::sort(raw.begin(), raw.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec out;
  out.reserve(raw.size());
  for (const auto& [i, v] : raw) {
    if (!out.empty() && out.back().first == i) {
      out.back().second = F.add(out.back().second, v);
      if (out.back().second == 0) out.pop_back();
    } else if (v != 0) {
      out.emplace_back(i, v);
    }
  }
  return out;
}

FFMatrix::FFMatrix(FieldPtr F, int rows, int cols)
    : F_(std::move(F)), rows_(rows), cols_(cols), sparse_cols_(static_cast<std::size_t>(cols)) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
}

FFMatrix FFMatrix::identity(FieldPtr F, int n) {
  FFMatrix m(std::move(F), n, n);
  for (int i = 0; i < n; ++i) m.sparse_cols_[i].emplace_back(i, 1);
  m.compact();
  return m;
}

FFMatrix FFMatrix::from_triplets(FieldPtr F, int rows, int cols, std::vector<Triplet> t) {
  FFMatrix m(F, rows, cols);
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  for (const auto& x : t) {
    if (x.row < 0 || x.row >= rows || x.col < 0 || x.col >= cols)
      throw std::out_of_range("triplet outside matrix");
    auto& col = m.sparse_cols_[x.col];
    if (!col.empty() && col.back().first == x.row) {
      col.back().second = F->add(col.back().second, x.val);
      if (col.back().second == 0) col.pop_back();
    } else if (x.val != 0) {
      col.emplace_back(x.row, x.val);
    }
  }
  m.compact();
  return m;
}

FFMatrix FFMatrix::from_columns(FieldPtr F, int rows, std::vector<SparseVec> cols) {
  FFMatrix m(F, rows, static_cast<int>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (const auto& [r, v] : cols[c])
      if (r < 0 || r >= rows) throw std::out_of_range("column entry outside matrix");
    m.sparse_cols_[c] = std::move(cols[c]);
  }
  m.compact();
  return m;
}

FFMatrix FFMatrix::from_dense(FieldPtr F, int rows, int cols, const std::vector<fe>& row_major) {
  FFMatrix m(F, rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const fe v = row_major[static_cast<std::size_t>(r) * cols + c];
      if (v != 0) m.sparse_cols_[c].emplace_back(r, v);
    }
  m.compact();
  return m;
}

void FFMatrix::compact() {
  if (dense_) return;
  std::size_t n = 0;
  for (const auto& c : sparse_cols_) n += c.size();
  const double cells = static_cast<double>(rows_) * cols_;
  if (cells > 0 && static_cast<double>(n) > kDenseFill * cells && cells <= 4.0e7) {
    dense_data_.assign(static_cast<std::size_t>(rows_) * cols_, 0);
    for (int c = 0; c < cols_; ++c)
      for (const auto& [r, v] : sparse_cols_[c])
        dense_data_[static_cast<std::size_t>(c) * rows_ + r] = v;
    sparse_cols_.clear();
    sparse_cols_.shrink_to_fit();
    dense_ = true;
  }
}

std::size_t FFMatrix::nnz() const {
  std::size_t n = 0;
  if (dense_) {
    for (fe v : dense_data_) n += (v != 0);
  } else {
    for (const auto& c : sparse_cols_) n += c.size();
  }
  return n;
}

fe FFMatrix::get(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("matrix index");
  if (dense_) return dense_data_[static_cast<std::size_t>(c) * rows_ + r];
  return coefficient(sparse_cols_[c], r);
}

SparseVec FFMatrix::column(int c) const {
  if (!dense_) return sparse_cols_[c];
  SparseVec out;
  for (int r = 0; r < rows_; ++r) {
    const fe v = dense_data_[static_cast<std::size_t>(c) * rows_ + r];
    if (v != 0) out.emplace_back(r, v);
  }
  return out;
}

std::vector<Triplet> FFMatrix::triplets() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for_each([&](int r, int c, fe v) { t.push_back({r, c, v}); });
  return t;
}

std::vector<SparseVec> FFMatrix::row_vectors() const {
  std::vector<SparseVec> rows(static_cast<std::size_t>(rows_));
  for_each([&](int r, int c, fe v) { rows[r].emplace_back(c, v); });
  return rows;
}

FFMatrix FFMatrix::transpose() const {
  FFMatrix t(F_, cols_, rows_);
  auto rows = row_vectors();
  for (int r = 0; r < rows_; ++r) t.sparse_cols_[r] = std::move(rows[r]);
  t.compact();
  t.row_labels_ = col_labels_;
  t.col_labels_ = row_labels_;
  return t;
}

SparseVec FFMatrix::apply(const SparseVec& v) const {
  std::vector<std::pair<int, fe>> raw;
  for (const auto& [c, a] : v) {
    if (c < 0 || c >= cols_) throw std::out_of_range("vector index outside matrix columns");
    if (dense_) {
      for (int r = 0; r < rows_; ++r) {
        const fe x = dense_data_[static_cast<std::size_t>(c) * rows_ + r];
        if (x != 0) raw.emplace_back(r, F_->mul(a, x));
      }
    } else {
      for (const auto& [r, x] : sparse_cols_[c]) raw.emplace_back(r, F_->mul(a, x));
    }
  }
  return normalize_vec(*F_, std::move(raw));
}

void FFMatrix::set_labels(Labels rows, Labels cols) {
  auto check = [](const Labels& l, int n) {
    if (!l) return;
    if (static_cast<int>(l->size()) != n) throw std::invalid_argument("label count mismatch");
    std::unordered_set<std::string> seen(l->begin(), l->end());
    if (seen.size() != l->size()) throw std::invalid_argument("basis labels must be unique");
  };
  check(rows, rows_);
  check(cols, cols_);
  row_labels_ = std::move(rows);
  col_labels_ = std::move(cols);
}

bool FFMatrix::operator==(const FFMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  if (F_ && o.F_ && F_ != o.F_ && !(rows_ == 0 || cols_ == 0)) return false;
  for (int c = 0; c < cols_; ++c)
    if (column(c) != o.column(c)) return false;
  return true;
}

FFMatrix operator*(const FFMatrix& a, const FFMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product dimension mismatch");
  const Field& F = *a.field();
  std::vector<fe> acc(static_cast<std::size_t>(a.rows()), 0);
  std::vector<int> touched;
  std::vector<char> mark(static_cast<std::size_t>(a.rows()), 0);
  std::vector<SparseVec> acols(static_cast<std::size_t>(a.cols()));
  for (int k = 0; k < a.cols(); ++k) acols[k] = a.column(k);
  std::vector<SparseVec> cols(static_cast<std::size_t>(b.cols()));
  for (int j = 0; j < b.cols(); ++j) {
    for (const auto& [k, bv] : b.column(j)) {
      for (const auto& [r, av] : acols[k]) {
        if (!mark[r]) {
          mark[r] = 1;
          touched.push_back(r);
        }
        acc[r] = F.add(acc[r], F.mul(av, bv));
      }
    }
    std::sort(touched.begin(), touched.end());
    for (int r : touched) {
      if (acc[r] != 0) cols[j].emplace_back(r, acc[r]);
      acc[r] = 0;
      mark[r] = 0;
    }
    touched.clear();
  }
  return FFMatrix::from_columns(a.field(), a.rows(), std::move(cols));
}

FFMatrix operator+(const FFMatrix& a, const FFMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix sum dimension mismatch");
  std::vector<SparseVec> cols(static_cast<std::size_t>(a.cols()));
  for (int c = 0; c < a.cols(); ++c) cols[c] = axpy(*a.field(), a.column(c), 1, b.column(c));
  return FFMatrix::from_columns(a.field(), a.rows(), std::move(cols));
}

FFMatrix operator-(const FFMatrix& a, const FFMatrix& b) {
  return a + scale(a.field()->neg(1), b);
}

FFMatrix scale(fe s, const FFMatrix& m) {
  std::vector<SparseVec> cols(static_cast<std::size_t>(m.cols()));
  for (int c = 0; c < m.cols(); ++c) cols[c] = scaled(*m.field(), s, m.column(c));
  return FFMatrix::from_columns(m.field(), m.rows(), std::move(cols));
}

FFMatrix kron(const FFMatrix& a, const FFMatrix& b) {
  const Field& F = *a.field();
  std::vector<SparseVec> acols(static_cast<std::size_t>(a.cols())), bcols(static_cast<std::size_t>(b.cols()));
  for (int i = 0; i < a.cols(); ++i) acols[i] = a.column(i);
  for (int j = 0; j < b.cols(); ++j) bcols[j] = b.column(j);
  std::vector<SparseVec> cols(static_cast<std::size_t>(a.cols()) * b.cols());
  for (int i = 0; i < a.cols(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      auto& col = cols[static_cast<std::size_t>(i) * b.cols() + j];
      col.reserve(acols[i].size() * bcols[j].size());
      for (const auto& [ra, va] : acols[i])
        for (const auto& [rb, vb] : bcols[j]) col.emplace_back(ra * b.rows() + rb, F.mul(va, vb));
    }
  return FFMatrix::from_columns(a.field(), a.rows() * b.rows(), std::move(cols));
}

FFMatrix block_diag(FieldPtr F, const std::vector<FFMatrix>& blocks) {
  int rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  std::vector<SparseVec> out;
  out.reserve(static_cast<std::size_t>(cols));
  int roff = 0;
  for (const auto& b : blocks) {
    for (int c = 0; c < b.cols(); ++c) {
      auto col = b.column(c);
      for (auto& e : col) e.first += roff;
      out.push_back(std::move(col));
    }
    roff += b.rows();
  }
  return FFMatrix::from_columns(std::move(F), rows, std::move(out));
}

FFMatrix select_columns(const FFMatrix& m, const std::vector<int>& cols) {
  std::vector<SparseVec> out;
  out.reserve(cols.size());
  for (int c : cols) out.push_back(m.column(c));
  return FFMatrix::from_columns(m.field(), m.rows(), std::move(out));
}

FFMatrix select_rows(const FFMatrix& m, const std::vector<int>& rows) {
  std::vector<int> pos(static_cast<std::size_t>(m.rows()), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) pos[rows[i]] = static_cast<int>(i);
  std::vector<Triplet> t;
  m.for_each([&](int r, int c, fe v) {
    if (pos[r] >= 0) t.push_back({pos[r], c, v});
  });
  return FFMatrix::from_triplets(m.field(), static_cast<int>(rows.size()), m.cols(), std::move(t));
}

FFMatrix matrix_power(const FFMatrix& m, int k) {
  if (m.rows() != m.cols() && k != 1) throw std::invalid_argument("power of non-square matrix");
  FFMatrix out = FFMatrix::identity(m.field(), m.cols());
  for (int i = 0; i < k; ++i) out = m * out;
  return out;
}

FFMatrix frobenius_entries(const FFMatrix& m, int r) {
  auto t = m.triplets();
  for (auto& x : t) x.val = m.field()->frobenius(x.val, r);
  return FFMatrix::from_triplets(m.field(), m.rows(), m.cols(), std::move(t));
}

std::string to_string(const FFMatrix& m) {
  std::ostringstream os;
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m.field()->to_string(m.get(r, c));
    os << "\n";
  }
  return os.str();
}

}  // namespace artifact
