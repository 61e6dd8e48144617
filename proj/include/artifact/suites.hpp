#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "artifact/cohomology.hpp"

namespace artifact {

// Result of one verification suite; passes iff every check passes.
struct SuiteResult {
  std::string name;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, std::vector<int>>> homology_tables;
  bool refused = false;  // the size estimate exceeded the cap and the run was skipped
  std::string detail;
  bool pass() const;
};

struct SuiteConfig {
  int p = 2;
  int d = 1;
  std::optional<int> n;            // lifted: defaults to the conclusive value dp
  std::optional<std::uint32_t> q;  // c1 and lifted: defaults to minimal_order
  std::uint64_t seed = 1;
  bool force = false;  // run past the dimension cap
  long double cap = kDefaultDimensionCap;
  int cases = 0;  // random cases, 0 for the suite default
  bool invariant_tables = false;
  const Cache* cache = nullptr;
};

// Random N-complex of the given length: a sum of strings of length <= N, each
// degree at most max_dim, followed by a random change of basis per degree.
NComplex random_ncomplex(FieldPtr F, int N, int length, int max_dim, std::mt19937_64& rng);

// Tensor, contraction and comparison-map identities on random p-complexes over F_p.
SuiteResult suite_pcomplex(const SuiteConfig& c);
// Homology of every contraction of B_m(k^n), m <= 2p, n <= 3.
SuiteResult suite_troesch(const SuiteConfig& c);
// Objects, first differential and homology of J_d.
SuiteResult suite_bar(const SuiteConfig& c);
// Lifts of the differentials of J_d and the lifting laws.
SuiteResult suite_twist(const SuiteConfig& c);
// Functoriality, naturality and dimension counts of the functor engine.
SuiteResult suite_functor(const SuiteConfig& c);
// Invariant homology of (A_1)_[1](gl_n).
SuiteResult suite_c1(const SuiteConfig& c);
// z[d]: cocycle checks and comparison with the lifted cup product; refuses above the cap.
SuiteResult suite_lifted(const SuiteConfig& c);

const std::vector<std::string>& suite_names();
SuiteResult run_suite(const std::string& name, const SuiteConfig& c);

}  // namespace artifact
