#pragma once

#include <cstdint>
#include <vector>

#include "artifact/matrix.hpp"

namespace artifact {

// Additive grading label on basis elements (packed torus weight). Differentials of
// a keyed complex never connect basis elements with different keys.
using BlockKey = std::uint64_t;

// Graded based vector spaces C^0 .. C^{len-1} with d^k: C^k -> C^{k+1} and d^N = 0.
// Degrees outside the stored range are zero.
class NComplex {
 public:
  NComplex() = default;
  NComplex(FieldPtr F, int N, std::vector<int> dims, std::vector<FFMatrix> d, bool check = true);

  static NComplex zero(FieldPtr F, int N) { return NComplex(std::move(F), N, {}, {}); }

  const FieldPtr& field() const { return F_; }
  int N() const { return N_; }
  int length() const { return static_cast<int>(dims_.size()); }
  int dim(int k) const { return (k >= 0 && k < length()) ? dims_[k] : 0; }
  const std::vector<int>& dims() const { return dims_; }
  // d^k : C^k -> C^{k+1}, correctly shaped zero outside the stored range.
  const FFMatrix& d(int k) const;
  // d^r starting in degree k.
  FFMatrix d_power(int k, int r) const;
  // Checks d^N = 0 in every degree.
  bool nilpotent() const;

  bool has_keys() const { return !keys_.empty(); }
  const std::vector<BlockKey>& keys(int k) const;
  // Attach keys; throws if some differential entry connects different keys.
  void set_keys(std::vector<std::vector<BlockKey>> keys);

  bool operator==(const NComplex& o) const;

 private:
  FieldPtr F_;
  int N_ = 2;
  std::vector<int> dims_;
  std::vector<FFMatrix> d_;
  FFMatrix into_zero_;   // C^{-1} -> C^0
  FFMatrix outside_;     // 0 x 0
  std::vector<std::vector<BlockKey>> keys_;
};

// An ordinary complex is the N = 2 case.
using BasedComplex = NComplex;

BasedComplex make_complex(FieldPtr F, std::vector<int> dims, std::vector<FFMatrix> d);

// Positional direct sum: summands concatenated in every degree, keys kept when all
// parts carry keys. All parts share F and N.
NComplex direct_sum(FieldPtr F, int N, const std::vector<NComplex>& parts);

// Degreewise maps f^k: C^k -> D^k.
struct ChainMap {
  std::vector<FFMatrix> f;  // f[k] for k in [0, len)
  FFMatrix at(const FieldPtr& F, int k, int rows, int cols) const;
};

// Exact check of d_D f^k = f^{k+1} d_C in every degree.
bool is_chain_map(const ChainMap& f, const NComplex& C, const NComplex& D);
ChainMap compose(const ChainMap& g, const ChainMap& f, const NComplex& C, const NComplex& E);

struct Homology {
  int dim = 0;
  int kernel_dim = 0;
  int image_rank = 0;
  std::vector<SparseVec> cycle_reps;
};

// Homology of an ordinary complex in degree k.
Homology homology(const BasedComplex& C, int k, bool with_reps = true);
std::vector<int> homology_dims(const BasedComplex& C);

// Homology dimension computed block by block over the key decomposition. The serial
// version is the reference; the parallel version distributes blocks over threads.
int blocked_homology_dim_serial(const BasedComplex& C, int k);
int blocked_homology_dim_parallel(const BasedComplex& C, int k);

}  // namespace artifact
