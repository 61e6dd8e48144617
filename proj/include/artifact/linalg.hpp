#pragma once

#include <map>
#include <optional>
#include <vector>

#include "artifact/matrix.hpp"

namespace artifact {

// Incremental row echelon form over vectors of a fixed width. Each stored row has a
// distinct leading index and leading coefficient 1. Rows are reduced only by their
// leading entry until make_reduced() is called.
class Echelon {
 public:
  Echelon(FieldPtr F, int width) : F_(std::move(F)), width_(width) {}

  // Returns true when v was independent of the stored rows.
  bool insert(SparseVec v);
  // Residual of v after eliminating every stored leading index.
  SparseVec reduce(SparseVec v) const;
  bool contains(const SparseVec& v) const { return reduce(v).empty(); }
  int rank() const { return static_cast<int>(rows_.size()); }
  int width() const { return width_; }
  // Back-substitute so every leading index appears in exactly one row (unique RREF).
  void make_reduced();
  const std::map<int, SparseVec>& rows() const { return rows_; }
  const FieldPtr& field() const { return F_; }

 private:
  FieldPtr F_;
  int width_;
  std::map<int, SparseVec> rows_;
};

struct KernelRank {
  int rank = 0;
  std::vector<SparseVec> kernel_basis;
};

// Kernel basis read off the unique RREF of M: one vector per free column f with
// v_f = 1, so the basis is itself in echelon form and independent of storage.
KernelRank kernel_rank(const FFMatrix& M);
int rank(const FFMatrix& M);
// Unique reduced row echelon form of the row space of M.
Echelon rref(const FFMatrix& M);

// Columns of a matrix kept in echelon form together with the combination of
// original columns producing each stored row. express() solves A x = b.
class SpanSolver {
 public:
  SpanSolver(FieldPtr F, int width) : F_(std::move(F)), width_(width) {}
  bool insert(const SparseVec& v);  // tag = insertion count
  std::optional<SparseVec> express(const SparseVec& v) const;
  int size() const { return count_; }
  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  struct Row {
    SparseVec vec;
    SparseVec combo;
  };
  FieldPtr F_;
  int width_;
  int count_ = 0;
  std::map<int, Row> rows_;
};

std::optional<SparseVec> solve(const FFMatrix& A, const SparseVec& b);

// Basis of the intersection of the kernels, computed as the kernel of the stacked matrix.
std::vector<SparseVec> common_kernel(const std::vector<FFMatrix>& ms, int width, FieldPtr F);

// Coordinates of v in the basis (must lie in the span). Throws otherwise.
SparseVec coordinates(const std::vector<SparseVec>& basis, const SparseVec& v, FieldPtr F, int width);

}  // namespace artifact
