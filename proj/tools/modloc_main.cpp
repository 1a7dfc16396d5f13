// Command line front end: every subcommand prints one modloc-1 CSV table to
// stdout (or --out) and exits 0 only if all of its assertions pass. Failures
// add a one-line JSON record on stderr and exit 1; usage problems exit 2.
// MODLOC_THREADS caps the worker count; outputs are byte-identical across
// runs and thread counts.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <modloc/numfmt.hpp>
#include <modloc/regionexpr.hpp>
#include <modloc/suites.hpp>

namespace {

using modloc::ModelConfig;
using modloc::TableReport;

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\')
      out += std::string("\\") + c;
    else if (c == '\n')
      out += "\\n";
    else if (static_cast<unsigned char>(c) < 0x20)
      out += ' ';
    else
      out += c;
  }
  return out;
}

// Shared model flags. A --config file is read first, then explicit flags
// override its values.
struct ConfigFlags {
  std::string config_path;
  int n_sites = 0;
  double spacing = 0, mass = 0, theta_max = 0;
  int rapidity_grid = 0, mode_cutoff = 0;
  std::uint64_t seed = 0;
  CLI::Option *o_n = nullptr, *o_a = nullptr, *o_m = nullptr,
              *o_theta = nullptr, *o_grid = nullptr, *o_kappa = nullptr,
              *o_seed = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "flat key = value parameter file");
    o_n = cmd->add_option("--N", n_sites, "lattice site count");
    o_a = cmd->add_option("--a", spacing, "lattice spacing");
    o_m = cmd->add_option("--m", mass, "mass");
    o_theta = cmd->add_option("--Theta", theta_max, "rapidity half range");
    o_grid = cmd->add_option("--M", rapidity_grid, "rapidity grid size");
    o_kappa = cmd->add_option("--kappa_max", mode_cutoff, "mode cutoff");
    o_seed = cmd->add_option("--seed", seed, "random seed");
  }

  ModelConfig resolve() const {
    ModelConfig cfg = config_path.empty()
                          ? ModelConfig{}
                          : modloc::config_from_file(config_path);
    if (o_n->count()) cfg.n_sites = n_sites;
    if (o_a->count()) cfg.spacing = spacing;
    if (o_m->count()) cfg.mass = mass;
    if (o_theta->count()) cfg.theta_max = theta_max;
    if (o_grid->count()) cfg.rapidity_grid = rapidity_grid;
    if (o_kappa->count()) cfg.mode_cutoff = mode_cutoff;
    if (o_seed->count()) cfg.seed = seed;
    return cfg;
  }
};

int emit(const TableReport& report, const std::string& out_path) {
  const std::string csv = report.to_csv();
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot open output file: " << out_path << "\n";
      return 2;
    }
    out << csv;
  }
  if (!report.passed()) {
    std::cerr << report.failure_json() << "\n";
    return 1;
  }
  return 0;
}

int run_region(const std::string& text) {
  try {
    const modloc::CausalRegion region =
        modloc::evaluate_region(*modloc::parse_region(text));
    if (region.is_empty()) {
      std::cout << "empty\n";
    } else if (region.is_full()) {
      std::cout << "full\n";
    } else {
      for (const modloc::LightconeBox& b : region.cells())
        std::cout << "cell u=[" << modloc::format_double(b.u1) << ","
                  << modloc::format_double(b.u2) << "] v=["
                  << modloc::format_double(b.v1) << ","
                  << modloc::format_double(b.v2) << "]\n";
      for (const modloc::UVPoint& p : region.punctures())
        std::cout << "puncture u=" << modloc::format_double(p.u)
                  << " v=" << modloc::format_double(p.v) << "\n";
    }
    return 0;
  } catch (const modloc::ParseError& err) {
    std::cerr << "{\"schema\":\"modloc-1\",\"check\":\"region\",\"error\":\""
              << json_escape(err.what())
              << "\",\"line\":" << err.line()
              << ",\"column\":" << err.column() << "}\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modloc: exact checks for lattice localization"};
  app.require_subcommand(0, 1);
  std::string out_path;

  ConfigFlags gleason_cfg;
  int gleason_dim = 5, gleason_samples = 200;
  CLI::App* cmd_gleason = app.add_subcommand(
      "gleason", "rational rank measure on random symplectic subspaces");
  gleason_cfg.attach(cmd_gleason);
  cmd_gleason->add_option("--dim", gleason_dim, "largest half dimension");
  cmd_gleason->add_option("--samples", gleason_samples, "samples per dim");
  cmd_gleason->add_option("--out", out_path, "write the CSV here");

  ConfigFlags lattice_cfg;
  int lattice_dim = 8, lattice_instances = 200;
  CLI::App* cmd_lattice = app.add_subcommand(
      "lattice-selftest", "complement and de Morgan laws on random subspaces");
  lattice_cfg.attach(cmd_lattice);
  cmd_lattice->add_option("--dim", lattice_dim, "largest complex dimension");
  cmd_lattice->add_option("--instances", lattice_instances, "instance count");
  cmd_lattice->add_option("--out", out_path, "write the CSV here");

  ConfigFlags modular_cfg;
  int modular_samples = 100;
  CLI::App* cmd_modular = app.add_subcommand(
      "modular", "modular data residuals on random standard subspaces");
  modular_cfg.attach(cmd_modular);
  cmd_modular->add_option("--samples", modular_samples, "samples per dim");
  cmd_modular->add_option("--out", out_path, "write the CSV here");

  std::string region_text;
  CLI::App* cmd_region = app.add_subcommand(
      "region", "evaluate a causal region expression");
  cmd_region->add_option("expr", region_text, "expression, e.g. \"W & W'\"")
      ->required();

  ConfigFlags cluster_cfg;
  double cluster_dmin = 2.0, cluster_dmax = 6.0;
  int cluster_points = 9;
  bool cluster_doubled = false;
  CLI::App* cmd_cluster = app.add_subcommand(
      "cluster-scan", "projection overlap decay against exp(-m d)");
  cluster_cfg.attach(cmd_cluster);
  cmd_cluster->add_option("--dmin", cluster_dmin, "smallest distance");
  cmd_cluster->add_option("--dmax", cluster_dmax, "largest distance");
  cmd_cluster->add_option("--points", cluster_points, "distance count");
  cmd_cluster->add_flag("--doubled", cluster_doubled,
                        "re-run at doubled N and compare");
  cmd_cluster->add_option("--out", out_path, "write the CSV here");

  ConfigFlags comm_cfg;
  int comm_samples = 100;
  CLI::App* cmd_comm = app.add_subcommand(
      "commutator", "smeared commutator at spacelike and timelike points");
  comm_cfg.attach(cmd_comm);
  cmd_comm->add_option("--samples", comm_samples, "spacelike sample count");
  cmd_comm->add_option("--out", out_path, "write the CSV here");

  ConfigFlags audit_cfg;
  CLI::App* cmd_audit = app.add_subcommand(
      "observable-audit", "localization axioms over an interval family");
  audit_cfg.attach(cmd_audit);
  cmd_audit->add_option("--out", out_path, "write the CSV here");

  ConfigFlags nw_cfg;
  int nw_iterations = 200;
  CLI::App* cmd_nw = app.add_subcommand(
      "nw-compare", "alternating product of the two localization schemes");
  nw_cfg.attach(cmd_nw);
  cmd_nw->add_option("--iterations", nw_iterations, "product length");
  cmd_nw->add_option("--out", out_path, "write the CSV here");

  ConfigFlags bgl_cfg;
  CLI::App* cmd_bgl = app.add_subcommand(
      "bgl-wedge", "wedge subspace residuals in the rapidity model");
  bgl_cfg.attach(cmd_bgl);
  cmd_bgl->add_option("--out", out_path, "write the CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    std::cerr << err.what() << "\n\n" << app.help();
    return 2;
  }

  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 2;
  }

  try {
    if (cmd_gleason->parsed()) {
      const ModelConfig cfg = gleason_cfg.resolve();
      return emit(modloc::gleason_suite(2, gleason_dim, gleason_samples,
                                        cfg.seed),
                  out_path);
    }
    if (cmd_lattice->parsed()) {
      const ModelConfig cfg = lattice_cfg.resolve();
      return emit(
          modloc::lattice_selftest(lattice_dim, lattice_instances, cfg.seed),
          out_path);
    }
    if (cmd_modular->parsed()) {
      const ModelConfig cfg = modular_cfg.resolve();
      return emit(modloc::modular_suite(modular_samples, cfg.seed), out_path);
    }
    if (cmd_region->parsed()) return run_region(region_text);
    if (cmd_cluster->parsed()) {
      return emit(modloc::cluster_scan(cluster_cfg.resolve(), cluster_dmin,
                                       cluster_dmax, cluster_points,
                                       cluster_doubled),
                  out_path);
    }
    if (cmd_comm->parsed())
      return emit(modloc::commutator_scan(comm_cfg.resolve(), comm_samples),
                  out_path);
    if (cmd_audit->parsed())
      return emit(modloc::observable_audit_suite(audit_cfg.resolve()),
                  out_path);
    if (cmd_nw->parsed())
      return emit(modloc::nw_compare_suite(nw_cfg.resolve(), nw_iterations),
                  out_path);
    if (cmd_bgl->parsed())
      return emit(modloc::bgl_suite(bgl_cfg.resolve()), out_path);
  } catch (const std::exception& err) {
    std::cerr << "{\"schema\":\"modloc-1\",\"check\":\""
              << app.get_subcommands().front()->get_name()
              << "\",\"error\":\"" << json_escape(err.what()) << "\"}\n";
    return 1;
  }
  std::cerr << app.help();
  return 2;
}
