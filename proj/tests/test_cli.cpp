#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef MODLOC_BIN
#error "MODLOC_BIN must point at the command line binary"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int g_counter = 0;

// Shells out to the installed binary; env_prefix may set variables.
RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const std::string tag = std::to_string(++g_counter);
  const std::string out_path = "cli_out_" + tag + ".txt";
  const std::string err_path = "cli_err_" + tag + ".txt";
  std::string cmd = env_prefix.empty() ? std::string() : env_prefix + " ";
  cmd += "\"" MODLOC_BIN "\" " + args + " >" + out_path + " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

}  // namespace

TEST_CASE("region subcommand prints the evaluated region") {
  const RunResult empty = run_cli("region \"W & W'\"");
  CHECK(empty.exit_code == 0);
  CHECK(empty.out == "empty\n");
  const RunResult wedge = run_cli("region \"W''\"");
  CHECK(wedge.exit_code == 0);
  CHECK(wedge.out.find("cell") != std::string::npos);
  const RunResult full = run_cli("region full");
  CHECK(full.exit_code == 0);
  CHECK(full.out == "full\n");
}

TEST_CASE("parse errors exit 1 with a position-bearing record") {
  const RunResult r = run_cli("region \"c([0,1]) &\"");
  CHECK(r.exit_code == 1);
  CHECK(r.out.empty());
  CHECK(r.err.find("\"schema\":\"modloc-1\"") != std::string::npos);
  CHECK(r.err.find("\"column\":10") != std::string::npos);
  CHECK(r.err.find("\"line\":1") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli("no-such-subcommand").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("gleason --dim").exit_code == 2);
  const RunResult help = run_cli("--help");
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("gleason") != std::string::npos);
}

TEST_CASE("reports are deterministic byte for byte") {
  const std::string args = "gleason --dim 3 --samples 5 --seed 7";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("# modloc-1", 0) == 0);
  CHECK(a.out.find("parameter,value,bound,pass") != std::string::npos);
  // Thread count must not leak into the bytes.
  const RunResult one = run_cli(args, "MODLOC_THREADS=1");
  const RunResult four = run_cli(args, "MODLOC_THREADS=4");
  CHECK(one.out == four.out);
  CHECK(one.out == a.out);
}

TEST_CASE("different seeds change the sampled content") {
  const RunResult a = run_cli("gleason --dim 3 --samples 5 --seed 7");
  const RunResult b = run_cli("gleason --dim 3 --samples 5 --seed 8");
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  CHECK(a.out != b.out);
}

TEST_CASE("config files feed defaults and flags override them") {
  const std::string path = "cli_config_test.cfg";
  {
    std::ofstream cfg(path);
    cfg << "# small lattice\n";
    cfg << "N = 128\n";
    cfg << "a = 0.1\n";
    cfg << "seed = 3\n";
  }
  const RunResult viaConfig =
      run_cli("commutator --config " + path + " --samples 4");
  const RunResult viaFlags =
      run_cli("commutator --N 128 --a 0.1 --seed 3 --samples 4");
  CHECK(viaConfig.exit_code == viaFlags.exit_code);
  CHECK(viaConfig.out == viaFlags.out);
  // A flag beats the file for the same key.
  const RunResult overridden =
      run_cli("commutator --config " + path + " --seed 4 --samples 4");
  CHECK(overridden.out != viaConfig.out);
  std::remove(path.c_str());
  const RunResult missing = run_cli("commutator --config nope.cfg");
  CHECK(missing.exit_code != 0);
}

TEST_CASE("reports can be routed to a file unchanged") {
  const std::string path = "cli_out_file.csv";
  const RunResult direct = run_cli("lattice-selftest --dim 3 --instances 4");
  const RunResult routed =
      run_cli("lattice-selftest --dim 3 --instances 4 --out " + path);
  CHECK(direct.exit_code == 0);
  CHECK(routed.exit_code == 0);
  CHECK(routed.out.empty());
  CHECK(slurp(path) == direct.out);
  std::remove(path.c_str());
}
