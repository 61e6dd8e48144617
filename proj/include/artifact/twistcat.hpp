#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "artifact/complex.hpp"
#include "artifact/functor.hpp"
#include "artifact/symtensor.hpp"
#include "artifact/troesch.hpp"

namespace artifact {

// Checks performed on a candidate lift fbar of f: the square
//   pi o f(S^p) = fbar o pi  on  S^lambda(S^p) -> S^{p mu}
// at the degree dimension D = p |mu| and at D + 1, and the composite
// S^lambda(I^(1)) -> S^lambda(S^p) -> S^{p lambda} against the Frobenius inclusion.
struct LiftOptions {
  // Basis elements of S^lambda(S^p)(k^n) checked exhaustively up to this count,
  // a seeded uniform sample of this size beyond it.
  int sample_cap = 20000;
  std::uint64_t seed = 1;
};

struct LiftCheck {
  bool candidate = false;      // the multilinear value decomposes into patterns
  bool square_at_D = false;
  bool square_at_D1 = false;
  bool frobenius_composite = false;
  bool lifting_diagram = false;  // fbar o incl = incl o f(I^(1)) at dimension D
  bool sampled = false;          // some square check did not cover the whole basis
  std::string detail;
  bool pass() const { return candidate && square_at_D && square_at_D1 && frobenius_composite && lifting_diagram; }
};

struct LiftResult {
  std::optional<SymHom> lift;  // set only when every check passes
  LiftCheck check;
};

// The unique fbar with pi o f(S^p) = fbar o pi, p = characteristic of f's field.
// Its value on the multilinear element of S^{p lambda} is pi f(S^p) of the product of
// consecutive p-blocks of variables; it is absent when that value is not a pattern
// combination or when the square fails.
LiftResult twist_lift_checked(const SymHom& f, const LiftOptions& opt = {});
std::optional<SymHom> twist_lift(const SymHom& f, const LiftOptions& opt = {});

// Canonical flattening xi_F: F -> F_0 of an iterated symmetric tensor (Id, Sym,
// Tensor, Sum, Const). A tensor of sums becomes the sum over index tuples (j_1..j_k),
// j_1 most significant, of the concatenated tuples.
SymSum flatten(const FunctorExpr& F);
// xi_F at k^n as an index map: basis index of F -> basis index of F_0.
std::vector<int> xi_index(const FunctorExpr& F, int n);
FFMatrix xi_matrix(const FunctorExpr& F, FieldPtr K, int n);

// T(F) = sum_i B_{p lambda^i} over the flattening F_0 = sum_i S^{lambda^i}.
struct TObject {
  SymSum flat;
  int p = 2;
  // Evaluated at k^n: positional direct sum of left-associated Troesch tensors.
  NComplex evaluate(FieldPtr K, int n, const std::vector<BlockKey>& coord_keys = {}) const;
  // Augmentation F_0(I^(1)) -> degree 0, block diagonal Frobenius inclusions.
  FFMatrix augmentation(FieldPtr K, int n) const;
  std::vector<TroeschSpace> spaces(int n) const;  // one per summand
};
TObject T_object(const FunctorExpr& F, int p);
TObject T_object(const SymSum& flat, int p);

// fbar(I^{+p}) at k^n between evaluated T objects; degree 0 is fbar itself.
ChainMap T_map_lifted(const SymHom& fbar, int n);

// The same map applied to vectors of one degree without assembling its matrix.
class TMapAction {
 public:
  TMapAction(SymHom fbar, int n);
  SparseVec column(int k, int i) const;
  SparseVec apply(int k, const SparseVec& v) const;
  int source_dim(int k) const;
  int target_dim(int k) const;
  int length() const;

 private:
  SymHom fbar_;
  std::vector<TroeschSpace> S_, T_;
};
// Lifts f first; throws std::invalid_argument when f is not twist compatible.
ChainMap T_map(const SymHom& f, int n, const LiftOptions& opt = {});

// Coordinates of xi_G o u o xi_F^{-1} read off the multilinear element.
std::optional<SymHom> to_symhom(const NatMap& u, const FunctorExpr& source, const FunctorExpr& target, FieldPtr K);

// Reshuffle T(F) (x) T(G) = tensor_p(T(F), T(G)) -> T(F (x) G).
ChainMap T_monoidal(const FunctorExpr& F, const FunctorExpr& G, int p, int n);

}  // namespace artifact
