#pragma once

#include <memory>
#include <string>
#include <vector>

#include "artifact/matrix.hpp"

namespace artifact {

// Sorted index multisets of size d over {0..n-1}, ascending lexicographic order.
std::vector<std::vector<int>> multisets(int n, int d);
// Strictly increasing index tuples of size d over {0..n-1}, lexicographic order.
std::vector<std::vector<int>> increasing_tuples(int n, int d);
long long binomial(long long n, long long k);

struct FunctorNode;
using FunctorExpr = std::shared_ptr<const FunctorNode>;

enum class FunctorKind { Id, Sym, Gamma, Ext, Tensor, Sum, Compose, Twist, SumPower, Const };

struct FunctorNode {
  FunctorKind kind;
  int a = 0;  // d for Sym/Gamma/Ext, p for Twist/SumPower
  int r = 0;  // twist level
  std::vector<FunctorExpr> children;
  int degree = 0;
  std::string canonical;
};

namespace fx {
FunctorExpr id();
FunctorExpr sym(int d);
FunctorExpr gamma(int d);
FunctorExpr ext(int d);
FunctorExpr tensor(std::vector<FunctorExpr> factors);
FunctorExpr sum(std::vector<FunctorExpr> terms);
FunctorExpr compose(FunctorExpr outer, FunctorExpr inner);
FunctorExpr twist(int p, int r, FunctorExpr inner);
FunctorExpr sumpower(int p);
FunctorExpr constant();
// S^{l_1} x ... x S^{l_k}
FunctorExpr sym_tensor(const std::vector<int>& lambda);
FunctorExpr tensor_power(int d);
}  // namespace fx

// Canonical s-expression, e.g. (compose (sym 2) (sumpow 2)).
std::string to_sexpr(const FunctorExpr& F);
FunctorExpr parse_functor(const std::string& text);

int eval_dim(const FunctorExpr& F, int n);
// Human-readable basis labels at dimension n, unique within the space.
std::vector<std::string> eval_basis(const FunctorExpr& F, int n);
// F(f) for f: k^a -> k^b (b x a matrix); result is dim F(b) x dim F(a).
FFMatrix eval_map(const FunctorExpr& F, const FFMatrix& f);

// Natural transformations stored as recipes so they evaluate at any dimension.
struct NatNode;
using NatMap = std::shared_ptr<const NatNode>;

enum class NatKind { Mul, Comul, Perm, FrobIncl, PowMul, DiagGamma, Identity, Lin, Tens, Block, Comp, Pre };

struct NatNode {
  NatKind kind;
  FunctorExpr source;
  FunctorExpr target;
  std::vector<int> ints;           // parameters (i,j), permutation, partition, ...
  std::vector<NatMap> parts;       // sub-recipes
  std::vector<long long> coeffs;   // Lin coefficients (integers reduced mod p)
  std::vector<std::pair<int, int>> positions;  // Block entries (target term, source term)
  FunctorExpr inner;               // Pre: precomposition functor
  std::string canonical;
};

namespace nat {
NatMap mul(int i, int j);                 // S^i x S^j -> S^{i+j}
NatMap comul(int i, int j);               // S^{i+j} -> S^i x S^j
// Tensor[F_0..F_{k-1}] -> Tensor[F_{s[0]}..F_{s[k-1]}]
NatMap perm(const std::vector<int>& sigma, std::vector<FunctorExpr> factors);
NatMap frob_incl(int p, const std::vector<int>& lambda);  // S^lambda(I^(1)) -> S^{p lambda}
NatMap powmul(int p, int n);              // S^n(S^p) -> S^{np}
NatMap diag_gamma(const std::vector<int>& parts);  // Gamma^{|nu|} -> Gamma^{nu_1} x ...
NatMap identity(FunctorExpr F);
NatMap lin(std::vector<long long> coeffs, std::vector<NatMap> maps);
NatMap tens(std::vector<NatMap> maps);
// Sum[sources] -> Sum[targets] with entry (t, s) given by maps[k] at positions[k].
NatMap block(std::vector<FunctorExpr> sources, std::vector<FunctorExpr> targets,
             std::vector<std::pair<int, int>> positions, std::vector<NatMap> maps);
NatMap comp(NatMap outer, NatMap inner);
NatMap pre(NatMap u, FunctorExpr G);
}  // namespace nat

std::string to_sexpr(const NatMap& u);
NatMap parse_natmap(const std::string& text);

// Matrix of u at V = k^n in the canonical bases (memoized per field, recipe and n).
FFMatrix eval_nat(const NatMap& u, const FieldPtr& F, int n);
void clear_functor_cache();
std::size_t functor_cache_size();

// Action of g on B(k^n, k^n) = F(gl_n): F applied to X -> g X g^{-1}, where gl_n
// has basis e_ij at index i*n + j. Throws on singular g.
FFMatrix conj_matrix(const FFMatrix& g);
FFMatrix gl_eval(const FunctorExpr& F, const FFMatrix& g);

}  // namespace artifact
