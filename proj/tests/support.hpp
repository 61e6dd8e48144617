#pragma once

#include <random>
#include <vector>

#include "artifact/complex.hpp"
#include "artifact/linalg.hpp"

namespace testing_support {

using namespace artifact;

inline fe random_element(const Field& F, std::mt19937_64& rng) {
  return static_cast<fe>(std::uniform_int_distribution<std::uint32_t>(0, F.q() - 1)(rng));
}

inline FFMatrix random_matrix(const FieldPtr& F, int rows, int cols, std::mt19937_64& rng,
                              double density = 1.0) {
  std::vector<Triplet> t;
  std::bernoulli_distribution keep(density);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (keep(rng)) t.push_back({r, c, random_element(*F, rng)});
  return FFMatrix::from_triplets(F, rows, cols, std::move(t));
}

inline FFMatrix random_invertible(const FieldPtr& F, int n, std::mt19937_64& rng) {
  for (;;) {
    FFMatrix m = random_matrix(F, n, n, rng);
    if (rank(m) == n) return m;
  }
}

// Every N-complex over a field is a sum of strings e_a -> e_{a+1} -> ... of length <= N.
// Random strings followed by a random change of basis in each degree.
inline NComplex random_ncomplex(const FieldPtr& F, int N, int length, int max_dim, std::mt19937_64& rng) {
  std::vector<int> dims(length, 0);
  std::vector<std::vector<Triplet>> d(length);
  std::uniform_int_distribution<int> start(0, std::max(0, length - 1));
  std::uniform_int_distribution<int> len_dist(1, N);
  for (int attempts = 0; attempts < 4 * length * max_dim; ++attempts) {
    const int a = start(rng);
    const int l = std::min(len_dist(rng), length - a);
    bool fits = true;
    for (int i = a; i < a + l; ++i) fits = fits && dims[i] < max_dim;
    if (!fits) continue;
    int prev = -1;
    for (int i = a; i < a + l; ++i) {
      const int idx = dims[i]++;
      if (prev >= 0) d[i - 1].push_back({idx, prev, 1});
      prev = idx;
    }
  }
  std::vector<FFMatrix> change;
  for (int i = 0; i < length; ++i) {
    FFMatrix g = testing_support::random_invertible(F, dims[i], rng);
    change.push_back(g);
  }
  std::vector<FFMatrix> diffs;
  for (int i = 0; i < length; ++i) {
    const int rows = i + 1 < length ? dims[i + 1] : 0;
    FFMatrix di = FFMatrix::from_triplets(F, rows, dims[i], d[i]);
    if (i + 1 < length) {
      // g_{i+1} d g_i^{-1}, with the inverse obtained by solving column by column.
      std::vector<SparseVec> inv_cols;
      for (int c = 0; c < dims[i]; ++c) inv_cols.push_back(*solve(change[i], SparseVec{{c, 1}}));
      FFMatrix gi_inv = FFMatrix::from_columns(F, dims[i], inv_cols);
      di = change[i + 1] * di * gi_inv;
    }
    diffs.push_back(std::move(di));
  }
  return NComplex(F, N, dims, std::move(diffs));
}

}  // namespace testing_support
