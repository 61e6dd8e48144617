// One line per acceptance criterion; exit status 0 iff every criterion passes.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "artifact/suites.hpp"

using namespace artifact;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string summary;
};

// Checks of a suite that failed, one per line.
std::string failures(const SuiteResult& r) {
  std::ostringstream os;
  for (const auto& c : r.checks)
    if (!c.pass) os << "\n    failed: " << r.name << ": " << c.name << (c.note.empty() ? "" : " (" + c.note + ")");
  if (r.refused) os << "\n    refused: " << r.detail;
  return os.str();
}

std::string count(const SuiteResult& r) {
  long long ok = 0;
  for (const auto& c : r.checks) ok += c.pass;
  return std::to_string(ok) + "/" + std::to_string(r.checks.size()) + " checks";
}

bool all_conclusive(const SuiteResult& r, bool expected) {
  bool any = false;
  for (const auto& c : r.checks) {
    if (c.note.find("conclusive") == std::string::npos) continue;
    any = true;
    const bool partial = c.note.find("not conclusive") != std::string::npos;
    if (partial == expected) return false;
  }
  return any;
}

Outcome suite_outcome(const SuiteResult& r, double seconds, double limit) {
  Outcome o;
  o.pass = r.pass() && seconds < limit;
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << count(r) << ", " << seconds << " s (limit " << limit << " s)" << failures(r);
  o.summary = os.str();
  return o;
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 p-complex calculus on 1000 random cases",
       [] {
         SuiteConfig c;
         c.cases = 1000;
         c.seed = 1;
         const auto t0 = Clock::now();
         const SuiteResult r = suite_pcomplex(c);
         return suite_outcome(r, since(t0), 60);
       }},
      {"2 Troesch homology, p in {2,3}, m <= 2p, dims <= 3, every s",
       [] {
         const auto t0 = Clock::now();
         const SuiteResult r = suite_troesch({});
         return suite_outcome(r, since(t0), 120);
       }},
      {"3 bar coresolutions J_d: objects, first differential, homology Gamma^d",
       [] {
         const auto t0 = Clock::now();
         const SuiteResult r = suite_bar({});
         return suite_outcome(r, since(t0), 120);
       }},
      {"4 twist compatibility of J_d, d <= 3; comultiplication rejected",
       [] {
         const auto t0 = Clock::now();
         const SuiteResult r = suite_twist({});
         return suite_outcome(r, since(t0), 60);
       }},
      {"5 dim H^2 = 1 for (A_1)_[1](gl) invariants at (2,2,32) and (3,3,27)",
       [] {
         Outcome o{true, ""};
         for (auto [p, n, q] : std::vector<std::array<int, 3>>{{2, 2, 32}, {3, 3, 27}}) {
           SuiteConfig c;
           c.p = p;
           c.n = n;
           c.q = static_cast<std::uint32_t>(q);
           const auto t0 = Clock::now();
           const SuiteResult r = suite_c1(c);
           const Outcome one = suite_outcome(r, since(t0), 300);
           std::ostringstream os;
           os << (o.summary.empty() ? "" : "; ") << "p=" << p << " n=" << n << " q=" << q << " H=[";
           if (!r.homology_tables.empty())
             for (std::size_t k = 0; k < r.homology_tables[0].second.size(); ++k)
               os << (k ? "," : "") << r.homology_tables[0].second[k];
           os << "] " << one.summary;
           o.summary += os.str();
           o.pass = o.pass && one.pass;
         }
         return o;
       }},
      {"6 p=2 d=2 n=4 q=32: z[2] cocycle, equals lifted cup product, coresolutions exact",
       [] {
         SuiteConfig c;
         c.p = 2;
         c.d = 2;
         c.n = 4;
         c.q = 32;
         c.invariant_tables = true;
         const auto t0 = Clock::now();
         const SuiteResult r = suite_lifted(c);
         Outcome o = suite_outcome(r, since(t0), 900);
         const bool conclusive = all_conclusive(r, true);
         o.pass = o.pass && conclusive;
         o.summary += conclusive ? "; conclusive" : "; NOT conclusive";
         // Exactness is gated on the underlying complexes; the invariant homology is
         // an Ext group and is reported, not gated.
         for (const auto& [label, table] : r.homology_tables) {
           o.summary += "; " + label + " [";
           for (std::size_t k = 0; k < table.size(); ++k) o.summary += (k ? "," : "") + std::to_string(table[k]);
           o.summary += "]";
         }
         return o;
       }},
      {"7 p=3 d=2: partial checks at n in {2,3}, n=6 refused by the estimator",
       [] {
         Outcome o{true, ""};
         for (int n : {2, 3}) {
           SuiteConfig c;
           c.p = 3;
           c.d = 2;
           c.n = n;
           c.q = 27;
           const auto t0 = Clock::now();
           const SuiteResult r = suite_lifted(c);
           const Outcome one = suite_outcome(r, since(t0), 1800);
           const bool labelled = all_conclusive(r, false);
           o.pass = o.pass && one.pass && labelled;
           o.summary += "n=" + std::to_string(n) + ": " + one.summary + (labelled ? ", labelled partial; " : ", label missing; ");
         }
         SuiteConfig full;
         full.p = 3;
         full.d = 2;
         const SuiteResult refused = suite_lifted(full);
         o.pass = o.pass && refused.refused;
         o.summary += "n=6: " + std::string(refused.refused ? "refused (" : "NOT refused (") + refused.detail + ")";
         return o;
       }},
      {"8 functor engine: functoriality and naturality on 500 cases, dimension counts",
       [] {
         SuiteConfig c;
         c.cases = 500;
         c.seed = 1;
         const auto t0 = Clock::now();
         const SuiteResult r = suite_functor(c);
         return suite_outcome(r, since(t0), 120);
       }},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << "criterion " << name << ": " << o.summary << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all 8 criteria passed") << std::endl;
  return failed ? 1 : 0;
}
