#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "artifact/field.hpp"

namespace artifact {

// Sorted by index, no stored zeros.
using SparseVec = std::vector<std::pair<int, fe>>;

struct Triplet {
  int row;
  int col;
  fe val;
};

using Labels = std::shared_ptr<const std::vector<std::string>>;

// y + a*x
SparseVec axpy(const Field& F, const SparseVec& y, fe a, const SparseVec& x);
SparseVec scaled(const Field& F, fe a, const SparseVec& x);
fe coefficient(const SparseVec& v, int index);
SparseVec normalize_vec(const Field& F, std::vector<std::pair<int, fe>> raw);  // sort, merge, drop zeros

class FFMatrix {
 public:
  FFMatrix() = default;
  FFMatrix(FieldPtr F, int rows, int cols);

  static FFMatrix identity(FieldPtr F, int n);
  // Duplicate positions are summed.
  static FFMatrix from_triplets(FieldPtr F, int rows, int cols, std::vector<Triplet> t);
  static FFMatrix from_columns(FieldPtr F, int rows, std::vector<SparseVec> cols);
  static FFMatrix from_dense(FieldPtr F, int rows, int cols, const std::vector<fe>& row_major);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const FieldPtr& field() const { return F_; }
  std::size_t nnz() const;
  bool dense() const { return dense_; }
  bool is_zero() const { return nnz() == 0; }

  fe get(int r, int c) const;
  SparseVec column(int c) const;
  std::vector<Triplet> triplets() const;  // column-major order
  std::vector<SparseVec> row_vectors() const;
  FFMatrix transpose() const;
  SparseVec apply(const SparseVec& v) const;

  template <class Fn>
  void for_each(Fn&& fn) const {
    if (dense_) {
      for (int c = 0; c < cols_; ++c)
        for (int r = 0; r < rows_; ++r) {
          const fe v = dense_data_[static_cast<std::size_t>(c) * rows_ + r];
          if (v != 0) fn(r, c, v);
        }
    } else {
      for (int c = 0; c < cols_; ++c)
        for (const auto& [r, v] : sparse_cols_[c]) fn(r, c, v);
    }
  }

  const Labels& row_labels() const { return row_labels_; }
  const Labels& col_labels() const { return col_labels_; }
  // Labels must be unique and match the dimension.
  void set_labels(Labels rows, Labels cols);

  bool operator==(const FFMatrix& o) const;
  bool operator!=(const FFMatrix& o) const { return !(*this == o); }

  // Fill ratio above which storage switches to a dense column-major buffer.
  static constexpr double kDenseFill = 0.30;

 private:
  void compact();

  FieldPtr F_;
  int rows_ = 0;
  int cols_ = 0;
  bool dense_ = false;
  std::vector<SparseVec> sparse_cols_;
  std::vector<fe> dense_data_;
  Labels row_labels_;
  Labels col_labels_;
};

FFMatrix operator*(const FFMatrix& a, const FFMatrix& b);
FFMatrix operator+(const FFMatrix& a, const FFMatrix& b);
FFMatrix operator-(const FFMatrix& a, const FFMatrix& b);
FFMatrix scale(fe a, const FFMatrix& m);
FFMatrix kron(const FFMatrix& a, const FFMatrix& b);
FFMatrix block_diag(FieldPtr F, const std::vector<FFMatrix>& blocks);
FFMatrix select_columns(const FFMatrix& m, const std::vector<int>& cols);
FFMatrix select_rows(const FFMatrix& m, const std::vector<int>& rows);
FFMatrix matrix_power(const FFMatrix& m, int k);
FFMatrix frobenius_entries(const FFMatrix& m, int r);
std::string to_string(const FFMatrix& m);

}  // namespace artifact
