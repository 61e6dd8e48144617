#pragma once

#include <string>
#include <vector>

#include "artifact/complex.hpp"

namespace artifact {

// Position of contracted degree j inside an N-complex for contraction index s.
int contracted_position(int j, int N, int s);
// Ordinary complex C^0 -d^s-> C^s -d^{N-s}-> C^N -> ...
BasedComplex contract(const NComplex& C, int s);
// Chain map induced on contractions by a morphism of N-complexes.
ChainMap contract_map(const ChainMap& f, const NComplex& C, const NComplex& D, int s);

// K^0, (N-1) copies of K^1 joined by identities, K^2, (N-1) copies of K^3, ...
NComplex tilde(const BasedComplex& K, int N);
// Degree of K placed at position i of tilde(K).
int tilde_source_degree(int i, int N);

// Morphism tilde(C_[1]) -> C: identity at positions i with N | i, and the power
// d^{r-1}: C^{mN+1} -> C^{mN+r} at position i = mN + r, r >= 1.
ChainMap eta(const NComplex& C);

// Summand layout of a tensor product in total degree n: pairs (i, n-i) with both
// factors nonzero, ordered by i, each contributing dim C^i * dim D^{n-i} basis
// elements indexed offset + a * dim D^{n-i} + b.
struct TensorLayout {
  struct Summand {
    int left;
    int right;
    int offset;
  };
  std::vector<std::vector<Summand>> degrees;
  std::vector<int> dims;
  int offset(int n, int i) const;  // -1 when absent
};
TensorLayout tensor_layout(const NComplex& C, const NComplex& D);

// Unsigned tensor product d x 1 + 1 x d of two p-complexes; requires N = p = char.
NComplex tensor_p(const NComplex& C, const NComplex& D);
// Koszul-signed tensor product of ordinary complexes: d x 1 + (-1)^i 1 x d.
BasedComplex tensor_ord(const BasedComplex& K, const BasedComplex& L);
// Tensor product of two morphisms of N-complexes, degreewise f^i x g^j.
ChainMap tensor_maps(const ChainMap& f, const ChainMap& g, const NComplex& C, const NComplex& D,
                     const NComplex& C2, const NComplex& D2);

// Comparison map tensor_ord(K, L) -> contract(tensor_p(tilde K, tilde L), 1).
ChainMap H_map(const BasedComplex& K, const BasedComplex& L, int p);
// Comparison map tensor_ord(C_[1], D_[1]) -> contract(tensor_p(C, D), 1).
ChainMap h_map(const NComplex& C, const NComplex& D);

// Coordinate inclusions of p(C, D) = sum C^{kp} x D^{lp} (in degree 2(k+l), summands
// ordered by k) into the two tensor complexes.
struct GradedEmbedding {
  std::vector<int> source_dims;
  std::vector<FFMatrix> maps;
};
struct PEmbeddings {
  GradedEmbedding into_p;    // into contract(tensor_p(C, D), 1)
  GradedEmbedding into_ord;  // into tensor_ord(C_[1], D_[1])
};
PEmbeddings p_embed(const NComplex& C, const NComplex& D);

struct CoresolutionReport {
  bool pass = true;
  // homology[s-1][k] = dim H^k(C_[s])
  std::vector<std::vector<int>> homology;
  std::string detail;
};
// Every contraction must have homology only in degree 0 with H^0 of dimension
// expected_h0. With an augmentation (F -> C^0) the induced map onto H^0 must be
// injective with image equal to the cycles.
CoresolutionReport is_p_coresolution(const NComplex& C, int expected_h0,
                                     const FFMatrix* augmentation = nullptr);

}  // namespace artifact
