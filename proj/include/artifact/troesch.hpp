#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "artifact/complex.hpp"
#include "artifact/pcomplex.hpp"
#include "artifact/symtensor.hpp"

namespace artifact {

// Compositions (i_0, ..., i_{p-1}) of m in lexicographic order; the piece
// S^{i_0} x ... x S^{i_{p-1}} sits in degree sum_k k i_k.
struct TroeschPiece {
  std::vector<int> composition;
  int degree;
  FunctorExpr functor;
};
std::vector<TroeschPiece> troesch_pieces(int m, int p);
int troesch_length(int m, int p);  // m (p - 1) + 1

// The differential as a natural map between the piece sums of degrees k and k+1:
// the derivation moving one variable from slot a to slot a+1 (slot p-1 to zero).
SymHom troesch_differential(FieldPtr F, int m, int p, int k);

// Basis of B_m(k^n) = S^m(V^{+p}) per degree. Variable v = slot * n + coordinate;
// a basis element is the sorted variable multiset. Within a degree, pieces follow
// troesch_pieces and each piece uses the tensor-of-monomials order.
class TroeschFactor {
 public:
  TroeschFactor(int p, int m, int n);
  int p() const { return p_; }
  int m() const { return m_; }
  int n() const { return n_; }
  int length() const { return static_cast<int>(basis_.size()); }
  int dim(int k) const { return (k >= 0 && k < length()) ? static_cast<int>(basis_[k].size()) : 0; }
  const Monomial& element(int k, int idx) const { return basis_[k][idx]; }
  int index(int k, const Monomial& x) const;
  int degree(const Monomial& x) const;

 private:
  int p_, m_, n_;
  std::vector<std::vector<Monomial>> basis_;
  std::vector<std::map<Monomial, int>> index_;
};

std::shared_ptr<const TroeschFactor> troesch_factor(int p, int m, int n);  // memoized

// B_{m_1} x ... x B_{m_r} as the left-associated tensor_p; index arithmetic matches
// tensor_layout so maps built here act on complexes built by tensor_p.
class TroeschSpace {
 public:
  TroeschSpace(int p, std::vector<int> factors, int n);
  int length() const { return static_cast<int>(dims_.back().size()); }
  int dim(int k) const;
  int degree(const MonoTuple& x) const;
  int index(const MonoTuple& x) const;
  MonoTuple element(int k, int idx) const;
  const std::vector<int>& factors() const { return factors_; }

 private:
  int index_prefix(const MonoTuple& x, int r, int k) const;
  void element_prefix(int r, int k, int idx, MonoTuple& out) const;

  int p_, n_;
  std::vector<int> factors_;
  std::vector<std::shared_ptr<const TroeschFactor>> f_;
  // dims_[r][k]: degree-k dimension of the tensor of the first r+1 factors.
  std::vector<std::vector<int>> dims_;
  // offsets_[r][k][i]: offset of the summand (prefix degree i, last factor degree k-i).
  std::vector<std::vector<std::vector<int>>> offsets_;
};

// Key of a monomial: sum of coordinate keys of its variables.
BlockKey monomial_key(const Monomial& x, int n, const std::vector<BlockKey>& coord_keys);

// B_m evaluated at V = k^n with the derivation differential. With coord_keys (size
// n) every basis element carries the sum of its coordinates' keys.
NComplex build_troesch(FieldPtr F, int m, int p, int n, const std::vector<BlockKey>& coord_keys = {});
// Left-associated tensor_p of build_troesch(m_i).
NComplex troesch_tensor(FieldPtr F, const std::vector<int>& factors, int p, int n,
                        const std::vector<BlockKey>& coord_keys = {});

// B_{p mu} with its augmentation S^mu(V^(1)) -> S^{p mu}(V) = degree 0.
struct BTuple {
  NComplex complex;
  FFMatrix augmentation;
};
BTuple build_B_tuple(FieldPtr F, const std::vector<int>& mu, int p, int n,
                     const std::vector<BlockKey>& coord_keys = {});

struct TroeschRow {
  int n;
  int s;
  std::vector<int> homology;
  bool pass;
};
struct TroeschReport {
  bool pass = true;
  std::vector<TroeschRow> rows;
  std::string detail;
};
// For p | m: every contraction has homology only in degree 0, of dimension
// dim S^{m/p}(k^n), with the Frobenius inclusion inducing the isomorphism.
// Otherwise every contraction is exact.
TroeschReport verify_troesch(FieldPtr F, int m, int p, const std::vector<int>& dims);

// Unit coordinate keys e_c -> 1 << 4c (n <= 16, polynomial degree <= 15).
std::vector<BlockKey> unit_coordinate_keys(int n);

}  // namespace artifact
