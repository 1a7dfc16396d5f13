// Acceptance gate: one line per criterion, exit code = number of failures.
// Each criterion is a self-contained run of the corresponding scan with the
// bounds frozen inside the library; the timed ones also enforce their
// runtime budget here.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <modloc/suites.hpp>

#ifndef MODLOC_BIN
#error "MODLOC_BIN must point at the command line binary"
#endif

namespace {

using modloc::ModelConfig;
using modloc::TableReport;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Outcome from_report(const TableReport& rep, double elapsed = -1.0,
                    double budget = -1.0) {
  Outcome o;
  o.pass = rep.passed();
  if (!o.pass) {
    o.detail = std::to_string(rep.failure_count()) + " failing rows; " +
               rep.failure_json();
  }
  if (budget > 0.0 && elapsed > budget) {
    o.pass = false;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += "runtime " + std::to_string(elapsed) + " s over the " +
                std::to_string(budget) + " s budget";
  }
  return o;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int exit_code = -1;
  std::string out;
};

CliRun run_cli(const std::string& args, int tag) {
  const std::string out_path = "acceptance_cli_" + std::to_string(tag) + ".txt";
  const std::string cmd = "\"" MODLOC_BIN "\" " + args + " >" + out_path +
                          " 2>" + out_path + ".err";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  std::remove(out_path.c_str());
  std::remove((out_path + ".err").c_str());
  return r;
}

Outcome determinism_criterion() {
  // Every subcommand, run twice at sizes that keep the loop quick.
  const std::vector<std::string> commands = {
      "gleason --dim 3 --samples 20 --seed 1",
      "lattice-selftest --dim 4 --instances 20 --seed 1",
      "modular --samples 5 --seed 1",
      "region \"W & W'\"",
      "cluster-scan --N 256 --dmin 2 --dmax 3 --points 3 --seed 1",
      "commutator --N 256 --samples 10 --seed 1",
      "observable-audit --N 256 --seed 1",
      "nw-compare --N 256 --iterations 50 --seed 1",
      "bgl-wedge --M 256 --kappa_max 6 --seed 1",
  };
  Outcome o;
  o.pass = true;
  int tag = 0;
  for (const std::string& args : commands) {
    const CliRun first = run_cli(args, ++tag);
    const CliRun second = run_cli(args, ++tag);
    if (first.exit_code != second.exit_code || first.out != second.out) {
      o.pass = false;
      o.detail += "nondeterministic: " + args + "; ";
    }
    if (first.exit_code != 0) {
      o.pass = false;
      o.detail += "exit " + std::to_string(first.exit_code) + ": " + args + "; ";
    }
  }
  return o;
}

}  // namespace

int main() {
  const ModelConfig reference;  // N=1024, a=0.05, m=1, M=512, kappa_max=8

  struct Criterion {
    std::string name;
    std::function<Outcome()> run;
  };

  const std::vector<Criterion> criteria = {
      {"symplectic measure: exact rank ratio on random subspaces",
       [] {
         const auto t0 = std::chrono::steady_clock::now();
         const TableReport rep = modloc::gleason_suite(2, 5, 200, 1);
         return from_report(rep, seconds_since(t0), 10.0);
       }},
      {"plane chains: length <= 4 with one-dimensional hinges",
       [] {
         const auto t0 = std::chrono::steady_clock::now();
         const TableReport rep = modloc::plane_chain_suite(4, 10, 500, 1);
         return from_report(rep, seconds_since(t0), 30.0);
       }},
      {"real-subspace lattice axioms",
       [] { return from_report(modloc::lattice_selftest(8, 200, 1)); }},
      {"modular data round trip",
       [] { return from_report(modloc::modular_suite(100, 1)); }},
      {"additivity defect identity and five-block splitting",
       [] { return from_report(modloc::defect_suite(200, 1)); }},
      {"causal region calculus: exact identities and sampled complements",
       [] {
         const auto t0 = std::chrono::steady_clock::now();
         const TableReport rep = modloc::causal_suite(100, 10000, 1);
         return from_report(rep, seconds_since(t0), 10.0);
       }},
      {"commutator causality on the reference lattice",
       [&] { return from_report(modloc::commutator_scan(reference, 100)); }},
      {"cluster decay and defect bound with doubled-lattice check",
       [&] {
         return from_report(modloc::cluster_scan(reference, 2.0, 6.0, 9, true));
       }},
      {"fuzzy localization measure on random packets",
       [&] { return from_report(modloc::fuzzy_suite(reference, 50)); }},
      {"wedge subspaces: duality, boost invariance, lightlike inclusion",
       [&] { return from_report(modloc::bgl_suite(reference)); }},
      {"meet-iterate incompatibility decays below threshold",
       [&] { return from_report(modloc::nw_compare_suite(reference, 200)); }},
      {"byte-identical reruns of every subcommand",
       [] { return determinism_criterion(); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& err) {
      o.pass = false;
      o.detail = std::string("exception: ") + err.what();
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << (i + 1)
              << ": " << criteria[i].name << "\n";
    if (!o.detail.empty()) std::cout << "      " << o.detail << "\n";
    std::cout.flush();
  }
  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criteria failed")
            << "\n";
  return failures;
}
