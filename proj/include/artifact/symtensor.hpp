#pragma once

#include <functional>
#include <map>
#include <optional>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "artifact/functor.hpp"
#include "artifact/matrix.hpp"

namespace artifact {

// A monomial is the sorted multiset of its variable indices; a basis element of a
// symmetric tensor S^l1 x ... x S^lk is one monomial per factor.
using Monomial = std::vector<int>;
using MonoTuple = std::vector<Monomial>;
using Pattern = std::vector<std::vector<int>>;  // rows = source factors, cols = target factors

// Image of one basis tuple under the pattern map: each source factor i is comultiplied
// into parts of sizes M[i][j], then target factor j multiplies the parts (., j).
// Coefficients are products of multinomials reduced in F.
std::vector<std::pair<MonoTuple, fe>> apply_pattern(const Field& F, const Pattern& M, const MonoTuple& x);

// Finite direct sum of symmetric tensors; tuple entries may be 0 (factor S^0 = k).
struct SymSum {
  std::vector<std::vector<int>> terms;
  int degree() const;  // common total degree, -1 when empty
  bool operator==(const SymSum& o) const { return terms == o.terms; }
};
SymSum scaled_sum(const SymSum& s, int factor);  // (p lambda^i)_i
FunctorExpr symsum_functor(const SymSum& s);
std::string to_string(const SymSum& s);

// All nonnegative integer matrices with row sums lambda and column sums mu,
// in descending row-major lexicographic order (the identity pattern first).
std::vector<Pattern> hom_basis(const std::vector<int>& lambda, const std::vector<int>& mu);

// Natural map between symmetric-tensor sums, as coefficients on pattern maps.
struct SymHom {
  struct Entry {
    int target;  // summand index in target
    int source;  // summand index in source
    Pattern pattern;
    fe coef;
  };
  FieldPtr F;
  SymSum source;
  SymSum target;
  std::vector<Entry> entries;

  // Merge equal (target, source, pattern) entries and drop zeros; sorted order.
  void normalize();
  bool is_zero() const;
};

SymHom sym_zero(FieldPtr F, SymSum source, SymSum target);
SymHom sym_identity(FieldPtr F, const SymSum& s);
SymHom sym_compose(const SymHom& g, const SymHom& f);  // g o f, read off the multilinear element
SymHom sym_add(const SymHom& a, const SymHom& b);
SymHom sym_scale(fe c, const SymHom& a);
bool sym_equal(const SymHom& a, const SymHom& b);

// Basis of S^lambda(k^n) in the functor-engine order (mixed radix, first factor most
// significant, each factor sorted multisets in ascending order).
class SymTensorBasis {
 public:
  SymTensorBasis(int n, std::vector<int> lambda);
  int size() const { return size_; }
  MonoTuple element(int idx) const;
  int index(const MonoTuple& x) const;

 private:
  int n_;
  std::vector<int> lambda_;
  int size_ = 1;
  std::vector<int> radix_;
  std::vector<const std::vector<Monomial>*> lists_;
  std::vector<const std::map<Monomial, int>*> maps_;
};

// Shared per-(n, d) multiset lists and index maps.
const std::vector<Monomial>& monomials(int n, int d);
const std::map<Monomial, int>& monomial_index(int n, int d);

// Image of the basis tuple x of source summand s (variables arbitrary).
std::vector<std::pair<MonoTuple, fe>> apply_symhom(const SymHom& f, int s, const MonoTuple& x);

// Factor i holds the next lambda_i variables: x_0 .. x_{l_0 - 1} | x_{l_0} ..
MonoTuple multilinear_tuple(const std::vector<int>& lambda);
// Pattern coordinates of a natural map S^lambda -> S^mu from its value on the
// multilinear element. A natural map is determined by that value; absent when the
// value is not a combination of pattern maps (so no natural map has it).
std::optional<std::vector<std::pair<Pattern, fe>>> decompose_multilinear(
    const std::vector<int>& lambda, const std::vector<int>& mu,
    const std::vector<std::pair<MonoTuple, fe>>& image);
// Coordinates of a natural map given by its value on each source summand's
// multilinear element, image(s) listing (target summand, tuple, coefficient).
using SummandImage = std::vector<std::tuple<int, MonoTuple, fe>>;
std::optional<SymHom> symhom_from_multilinear(FieldPtr F, const SymSum& source, const SymSum& target,
                                              const std::function<SummandImage(int)>& image);

// Matrix of the map at V = k^n in the basis of symsum_functor (summands concatenated).
FFMatrix eval_symhom(const SymHom& f, int n);
int symsum_dim(const SymSum& s, int n);

// Textual form: "(symhom (source (1 1)) (target (2)) (entry t s ((1) (1)) c) ...)".
std::string to_string(const SymHom& f);

}  // namespace artifact
