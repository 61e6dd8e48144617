#pragma once

#include <map>
#include <string>
#include <vector>

#include "artifact/complex.hpp"
#include "artifact/symtensor.hpp"

namespace artifact {

// An inner word [s_1|..|s_k] of the bar construction of S^* is its tuple of symmetric
// degrees (n_1..n_k), all positive; an outer word is a list of nonempty inner words.
using InnerWord = std::vector<int>;
using OuterWord = std::vector<InnerWord>;

// Concatenated degrees: the symmetric tensor carrying the word.
std::vector<int> word_tuple(const OuterWord& w);
int poly_degree(const OuterWord& w);
// Degree of w in the total complex of the double bar construction: sum (k_i + 1).
int bar_degree(const OuterWord& w);

// A chain complex of sums of symmetric tensors, graded as stored: objects[c] with
// diffs[c] : objects[c] -> objects[c+1]. Each summand is labeled by its word.
struct TwistComplex {
  FieldPtr F;
  std::vector<SymSum> objects;
  std::vector<std::vector<OuterWord>> words;
  std::vector<SymHom> diffs;
  int length() const { return static_cast<int>(objects.size()); }
  BasedComplex evaluate(int n) const;
};

// Polynomial-degree-d part of the reduced bar construction of S^*, cohomologically
// reindexed: objects[c] = words of length c + 1 (each outer word has one inner word)
// with the differential merging neighbours j, j+1 with sign (-1)^j, j = 1..k-1.
// The complex runs from the longest words, so objects[c] holds length d - c.
TwistComplex inner_bar(FieldPtr F, int d);

// Polynomial-degree-d part of the double bar construction, J_d^c = degree 2d - c.
// The differential is d_E + d_I: d_E merges letters i,
// i+1 through the shuffle product with sign (-1)^{eps_i}, eps_i = sum_{j<=i}(k_j+1);
// d_I applies the suspended inner differential to one letter with the Koszul sign.
TwistComplex build_Jd(FieldPtr F, int d);

// Summand dimensions of J_d at k^n without building any map.
std::vector<long long> Jd_dims(int d, int n);

struct JdRow {
  int n;
  std::vector<int> homology;
  int gamma_dim;
  bool pass;
};
struct JdReport {
  bool pass = true;
  bool differentials_lift = true;
  std::vector<JdRow> rows;
  std::string detail;
};
// Homology is Gamma^d(k^n) in degree 0 with Gamma^d -> (x)^d onto the cycles and
// zero elsewhere; every differential twist-lifts.
JdReport verify_Jd(FieldPtr F, int d, const std::vector<int>& dims);

std::string to_string(const OuterWord& w);

}  // namespace artifact
