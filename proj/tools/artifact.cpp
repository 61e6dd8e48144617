// Command-line driver: verification suites, artifact builds, size estimates, cache access.
#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "artifact/bar.hpp"
#include "artifact/serialize.hpp"
#include "artifact/suites.hpp"

using namespace artifact;
using json = nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRefused = 3;

struct RunConfig {
  std::string suite = "all";
  int p = 2;
  int d = 1;
  int n = 0;  // 0: suite default
  std::uint32_t q = 0;
  std::uint64_t seed = 1;
  int cases = 0;
  bool force = false;
  bool invariant_tables = false;
  bool timings = true;
  int threads = 0;
  std::string report;
  std::string cache_dir;
};

// Throws CLI::ValidationError on an inconsistent configuration.
void validate(const RunConfig& c) {
  if (c.p != 2 && c.p != 3 && c.p != 5) throw CLI::ValidationError("--p", "p must be 2, 3 or 5");
  if (c.d < 1) throw CLI::ValidationError("--d", "d must be >= 1");
  if (c.n < 0) throw CLI::ValidationError("--n", "n must be >= 1");
  if (c.q) {
    std::uint32_t x = c.q;
    while (x % c.p == 0) x /= c.p;
    if (x != 1 || c.q == 1) throw CLI::ValidationError("--q", "q must be a power of p");
    const int degree = c.suite == "c1" ? c.p : c.d * c.p;
    if (!admissible_order(c.q, degree))
      throw CLI::ValidationError("--q", "q - 1 must exceed " + std::to_string(4 * degree) + ", e.g. q = " +
                                            std::to_string(minimal_order(c.p, degree)));
  }
}

json check_json(const Check& c, bool timings) {
  return json{{"name", c.name},
              {"status", c.pass ? "pass" : "fail"},
              {"dims", c.dims},
              {"residual_norm", c.residual},
              {"wall_time_ms", timings ? c.wall_ms : 0.0},
              {"note", c.note}};
}

void write_atomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::trunc);
    f << text;
    if (!f) throw std::runtime_error("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

int run_verify(const RunConfig& c) {
  validate(c);
  if (c.threads > 0) omp_set_num_threads(c.threads);
  std::optional<Cache> cache = c.cache_dir.empty() ? Cache::from_env() : std::optional<Cache>(Cache(c.cache_dir));
  SuiteConfig sc;
  sc.p = c.p;
  sc.d = c.d;
  if (c.n) sc.n = c.n;
  if (c.q) sc.q = c.q;
  sc.seed = c.seed;
  sc.force = c.force;
  sc.cases = c.cases;
  sc.invariant_tables = c.invariant_tables;
  sc.cache = cache ? &*cache : nullptr;

  std::vector<std::string> names;
  if (c.suite == "all")
    names = suite_names();
  else
    names = {c.suite};

  json report;
  report["params"] = {{"suite", c.suite}, {"p", c.p},         {"d", c.d},         {"n", c.n ? json(c.n) : json()},
                      {"q", c.q ? json(c.q) : json()},     {"seed", c.seed},   {"cases", c.cases},
                      {"force", c.force}, {"threads", omp_get_max_threads()}};
  report["checks"] = json::array();
  report["homology_tables"] = json::object();
  report["suites"] = json::array();
  bool pass = true, refused = false;
  for (const auto& name : names) {
    std::cerr << "suite " << name << " ..." << std::endl;
    SuiteResult r;
    try {
      r = run_suite(name, sc);
    } catch (const std::exception& e) {
      r.name = name;
      r.checks.push_back(Check{"suite raised an error", false, {}, 1, 0, e.what()});
    }
    for (const auto& ch : r.checks) {
      json j = check_json(ch, c.timings);
      j["suite"] = name;
      report["checks"].push_back(j);
      std::cout << (ch.pass ? "PASS " : "FAIL ") << name << ": " << ch.name;
      if (!ch.note.empty()) std::cout << " (" << ch.note << ")";
      std::cout << "\n";
    }
    for (const auto& [label, table] : r.homology_tables) report["homology_tables"][name + ": " + label] = table;
    report["suites"].push_back({{"name", name}, {"pass", r.pass()}, {"refused", r.refused}, {"detail", r.detail}});
    if (!r.detail.empty()) std::cout << "  " << r.detail << "\n";
    pass = pass && r.pass();
    refused = refused || r.refused;
  }
  report["pass"] = pass;
  if (!c.report.empty()) write_atomically(c.report, report.dump(2) + "\n");
  std::cout << (pass ? "all checks passed" : refused ? "refused: size estimate exceeds the cap" : "checks failed")
            << std::endl;
  if (refused) return kExitRefused;
  return pass ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification suites for strict polynomial functor cohomology computations"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto* verify = app.add_subcommand("verify", "run a verification suite; exit 0 iff every check passes");
  std::vector<std::string> choices = suite_names();
  choices.push_back("all");
  verify->add_option("suite", cfg.suite, "suite to run")->required()->check(CLI::IsMember(choices));
  verify->add_option("--p", cfg.p, "characteristic (2, 3 or 5)");
  verify->add_option("--d", cfg.d, "degree d of the lifted class");
  verify->add_option("--n", cfg.n, "dimension n of gl_n; default dp (below dp checks are sound, not conclusive)");
  verify->add_option("--q", cfg.q, "order of the field for invariants; default the smallest admissible");
  verify->add_option("--seed", cfg.seed, "seed for random suites");
  verify->add_option("--cases", cfg.cases, "number of random cases (suite default when 0)");
  verify->add_option("--report", cfg.report, "write the JSON report here");
  verify->add_option("--threads", cfg.threads, "OpenMP threads");
  verify->add_option("--cache-dir", cfg.cache_dir, "invariant cache directory (default $ARTIFACT_CACHE_DIR)");
  verify->add_flag("--force", cfg.force, "run even when the size estimate exceeds the cap");
  verify->add_flag("--invariant-tables", cfg.invariant_tables, "add invariant homology tables to the lifted suite");
  verify->add_flag("!--timings", cfg.timings, "record zero wall times so reports are byte-reproducible");

  int bp = 2, bd = 2, bn = 2;
  std::string bout;
  auto* build = app.add_subcommand("build", "build an artifact and serialize it");
  auto* build_bar = build->add_subcommand("bar", "J_d evaluated at k^n");
  build->require_subcommand(1);
  build_bar->add_option("--p", bp, "characteristic");
  build_bar->add_option("--d", bd, "degree");
  build_bar->add_option("--n", bn, "dimension");
  build_bar->add_option("--out", bout, "output file")->required();

  int ep = 2, ed = 2, en = 0;
  double ecap = static_cast<double>(kDefaultDimensionCap);
  auto* estimate = app.add_subcommand("estimate", "predicted dimensions of the lifted suite");
  estimate->add_option("--p", ep, "characteristic");
  estimate->add_option("--d", ed, "degree");
  estimate->add_option("--n", en, "dimension (default dp)");
  estimate->add_option("--cap", ecap, "largest admissible block dimension");

  std::string ckey, cfile, cdir;
  auto* cache = app.add_subcommand("cache", "store or fetch a cache entry");
  cache->require_subcommand(1);
  auto* cput = cache->add_subcommand("put", "store the bytes of a file under a key");
  auto* cget = cache->add_subcommand("get", "write the entry of a key to a file");
  for (auto* s : {cput, cget}) {
    s->add_option("--key", ckey, "entry key")->required();
    s->add_option("--file", cfile, "file to read or write")->required();
    s->add_option("--dir", cdir, "cache directory (default $ARTIFACT_CACHE_DIR)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) return run_verify(cfg);
    if (*build_bar) {
      const BasedComplex C = build_Jd(Field::get(bp), bd).evaluate(bn);
      write_atomically(bout, serialize(C));
      std::cout << "J_" << bd << "(k^" << bn << ") over F_" << bp << ": dims";
      for (int x : C.dims()) std::cout << " " << x;
      std::cout << ", " << std::filesystem::file_size(bout) << " bytes, crc32 " << std::hex << crc32(serialize(C))
                << std::dec << "\n";
      return 0;
    }
    if (*estimate) {
      const Estimate e = estimate_lifted(ep, ed, en ? en : ed * ep, static_cast<long double>(ecap));
      std::cout << e.summary << "\n";
      return e.within ? 0 : kExitRefused;
    }
    if (*cache) {
      std::optional<Cache> store = cdir.empty() ? Cache::from_env() : std::optional<Cache>(Cache(cdir));
      if (!store) {
        std::cerr << "no cache directory: pass --dir or set ARTIFACT_CACHE_DIR\n";
        return kExitUsage;
      }
      if (*cput) {
        std::ifstream f(cfile, std::ios::binary);
        if (!f) throw std::runtime_error("cannot read " + cfile);
        std::stringstream ss;
        ss << f.rdbuf();
        store->put(ckey, ss.str());
        std::cout << store->path_for(ckey).string() << "\n";
        return 0;
      }
      const auto hit = store->get(ckey);
      if (!hit) {
        std::cerr << "miss: " << ckey << "\n";
        return kExitFailure;
      }
      write_atomically(cfile, *hit);
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
