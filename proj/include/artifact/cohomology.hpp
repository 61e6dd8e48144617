#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "artifact/bar.hpp"
#include "artifact/complex.hpp"
#include "artifact/functor.hpp"
#include "artifact/serialize.hpp"
#include "artifact/twistcat.hpp"

namespace artifact {

// gl_n is k^{n^2} with E_ij at coordinate i * n + j; g in GL_n acts by X -> g X g^{-1}.

// A based GL_n(F_q)-module, polynomial of bidegree (degree, degree) in gl_n.
struct GlModule {
  FieldPtr F;
  int n = 0;
  int degree = 0;
  int dim = 0;
  std::string key;  // structural description; empty disables caching
  // Images of the vectors vs under the group element g (an n x n matrix).
  std::function<std::vector<SparseVec>(const FFMatrix& g, const std::vector<SparseVec>& vs)> act;
  // Torus weight of every basis element, or empty when unknown.
  std::vector<std::vector<int>> weights;
};

// B(gl_n) for a functor expression B, acting through its evaluation on conjugation.
GlModule functor_module(const FunctorExpr& B, FieldPtr K, int n);

struct GroupElement {
  std::string label;
  FFMatrix g;
};
// Root elements e_ij(t) = 1 + t E_ij (i != j, t != 0) and diag(t, 1, .., 1) (t != 0, 1).
// The elements with t = 1 and t primitive come first; together they generate GL_n(F_q).
std::vector<GroupElement> generator_family(FieldPtr F, int n);
FFMatrix random_invertible(FieldPtr F, int n, std::mt19937_64& rng);

// Coefficients of the action along e_ij(t) are polynomials of degree <= 2d in t and
// those along diag(t, 1, .., 1) Laurent monomials of degree in [-d, d]; with
// q - 1 > 4d (margin 2) fixed points over F_q are rational invariants.
bool admissible_order(std::uint32_t q, int degree);
// Smallest admissible p^e.
std::uint32_t minimal_order(int p, int degree);

struct InvariantOptions {
  const Cache* cache = nullptr;
};
// Common fixed vectors of generator_family as a reduced echelon basis. Restricted to
// weight-zero basis vectors first when weights are known: the family generates the
// diagonal torus, whose fixed vectors are exactly the weight-zero span.
std::vector<SparseVec> invariants(const GlModule& M, const InvariantOptions& opt = {});
// Kernel of the stacked (g - 1) over the whole family on the full basis.
std::vector<SparseVec> invariants_reference(const GlModule& M);

// Coordinates of v in a reduced echelon basis; throws std::domain_error outside the span.
SparseVec echelon_coordinates(const std::vector<SparseVec>& basis, const SparseVec& v, const Field& F);
// sum_i c_i basis_i
SparseVec combine(const std::vector<SparseVec>& basis, const SparseVec& coords, const Field& F);

// The invariants of each degree with the differential they inherit.
struct InvariantComplex {
  std::vector<std::vector<SparseVec>> basis;  // per degree, reduced echelon
  BasedComplex induced;                       // in invariant coordinates
  std::vector<int> homology() const { return homology_dims(induced); }
};
using VectorDifferential = std::function<SparseVec(int k, const SparseVec& v)>;
InvariantComplex invariant_complex(const std::vector<GlModule>& modules, const VectorDifferential& diff,
                                   const InvariantOptions& opt = {});
VectorDifferential matrix_differential(const BasedComplex& C);

// T(F)(gl_n): the Troesch spaces of a T object over V = gl_n, with the conjugation
// action and the p-differential applied to vectors. Degree k is the positional
// direct sum of the summands' degree-k pieces, as in TObject::evaluate.
class GlTObject {
 public:
  GlTObject(TObject T, FieldPtr K, int n);
  int n() const { return n_; }
  int N() const { return n_ * n_; }
  int p() const { return T_.p; }
  int degree() const { return degree_; }  // polynomial degree in gl_n
  const FieldPtr& field() const { return K_; }
  const TObject& object() const { return T_; }
  int length() const;
  int dim(int k) const;
  std::pair<int, MonoTuple> element(int k, int i) const;  // (summand, tuple)
  int index(int summand, const MonoTuple& x) const;       // global index in degree of x
  const std::vector<TroeschSpace>& spaces() const { return spaces_; }

  // p-differential degree k -> k + 1, and its r-th power.
  SparseVec d(int k, const SparseVec& v) const;
  SparseVec d_power(int k, int r, const SparseVec& v) const;
  // F(A) for a linear map A: gl_n -> gl_m (m^2 x n^2), landing in target (same T).
  SparseVec transport(int k, const SparseVec& v, const FFMatrix& A, const GlTObject& target) const;
  SparseVec act(int k, const FFMatrix& g, const SparseVec& v) const;
  GlModule module(int k) const;
  std::vector<int> weight(int k, int i) const;
  // TObject::evaluate at k^{n^2}, with unit coordinate keys when keyed.
  NComplex assemble(bool keyed) const;

 private:
  SparseVec image_of_basis(int k, int i, const std::vector<SparseVec>& columns, const GlTObject& target) const;
  const NComplex& factor_complex(int m) const;

  TObject T_;
  FieldPtr K_;
  int n_;
  int degree_ = 0;
  std::vector<TroeschSpace> spaces_;
  std::shared_ptr<std::map<int, NComplex>> factors_;
};

// Contracted degree j of a p-complex at s = 1 and the power of d leading to j + 1.
int contracted_degree_position(int j, int p);
int contracted_step(int j, int p);

// A homology class of an invariant complex with the chosen representative.
struct CohClass {
  int p = 0;
  int n = 0;
  int degree = 0;
  std::uint32_t q = 0;
  std::vector<int> invariant_dims;  // per contracted degree
  std::vector<int> homology;        // of the invariant complex
  SparseVec representative;         // vector of the underlying object
};

// Invariant complex of (A_1)_[1](gl_n), A_1 = T(S^1). Throws std::runtime_error when
// H^2 is not one-dimensional; the representative is the first reduced-echelon cycle
// outside the boundaries, in A_1^p (contracted degree 2).
CohClass choose_c1(int p, int n, FieldPtr K, const InvariantOptions& opt = {});
InvariantComplex c1_invariant_complex(int p, int n, FieldPtr K, const InvariantOptions& opt = {});

// An element of the bicomplex A(J_d)(gl_n): column, contracted row, vector.
struct Cochain {
  int column = 0;
  int row = 0;
  SparseVec vec;
};

// z[d] = z1^{(x) d} in (A_1^p)^{(x) d} inside column 0, T((x)^d)(gl_n) at position dp;
// z1 lies in T(S^1)(gl_n) at position p. Evaluated at the identity, the diagonal
// Gamma^{dp} -> (Gamma^p)^{(x) d} is the tensor power, hence the plain tensor.
Cochain build_zd(const SparseVec& z1, int p, int d, int n, const FieldPtr& K);

// One verification step as reported: residual counts nonzero entries.
struct Check {
  std::string name;
  bool pass = false;
  std::vector<long long> dims;
  long long residual = 0;
  double wall_ms = 0;
  std::string note;
};

struct CocycleReport {
  bool pass = true;
  bool conclusive = false;  // n >= dp
  std::vector<Check> checks;
};
// Vertical (contracted p-differential) and horizontal (contracted T map of the first
// differential of J) images of z vanish, and tau_k z = z. With assembled, the same
// products are taken with the assembled bicomplex matrices.
CocycleReport verify_cocycle(const Cochain& z, const TwistComplex& J, int n, bool assembled);

// x (x) y in tensor_ord(K, L) of degree a + b; the diagonal of Gamma evaluated at the
// identity makes the cup cocycle the plain tensor of the representatives.
SparseVec cup(const SparseVec& x, const NComplex& K, int a, const SparseVec& y, const NComplex& L, int b);

struct ComparisonOptions {
  bool invariant_tables = false;  // invariant homology of (A_1^{(x) d})_[1] in degrees <= 2d
  InvariantOptions invariants;
};
struct ComparisonReport {
  bool pass = true;
  bool equal = false;
  bool cohomologous = false;
  bool conclusive = false;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, std::vector<int>>> homology_tables;
};
// Pushes the cup cocycle z1^{(x) d} of (A_1[1])^{(x) d} through the iterated comparison
// map h into (A_1^{(x) d})_[1] and compares with z[d]; checks exactness of both
// coresolutions in degrees 1..3 through blocked homology.
ComparisonReport verify_lift(int p, int d, int n, FieldPtr K, const ComparisonOptions& opt = {});

// The bicomplex A(J)(gl_n): columns contract(T(J^c)(gl_n), 1), horizontal maps the
// contracted T maps of the differentials of J. All squares commute.
struct Bicomplex {
  FieldPtr F;
  int p = 0;
  int n = 0;
  std::vector<TObject> objects;
  std::vector<NComplex> columns_p;
  std::vector<BasedComplex> columns;
  std::vector<ChainMap> horizontal;
  bool squares_commute() const;
  // Tot^k = sum_c column_c^{k-c}, differential horizontal + (-1)^c vertical.
  BasedComplex total() const;
};
// Builds the first `columns` columns (all when negative).
Bicomplex build_A(const TwistComplex& J, int n, int columns = -1, bool keyed = false);

struct Estimate {
  int p = 0;
  int d = 0;
  int n = 0;
  long double largest_block = 0;  // dim (A_1^p)^{(x) d}(gl_n) = C(n^2 + p - 1, p)^d
  long double column0_total = 0;  // dim of column 0 summed over degrees
  long double cap = 0;
  bool within = false;
  std::string summary;
};
inline constexpr long double kDefaultDimensionCap = 2e7L;
Estimate estimate_lifted(int p, int d, int n, long double cap = kDefaultDimensionCap);

}  // namespace artifact
