#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <modloc/scalarmodel.hpp>

namespace modloc {

// One assertion of a scan: a named parameter point, the measured value, the
// bound it was held to, and the verdict. Whether the bound is an upper or a
// lower limit is the row's business; the pass flag is authoritative.
struct TableRow {
  std::string parameter;
  double value = 0;
  double bound = 0;
  bool pass = true;
};

struct TableReport {
  std::string name;
  std::vector<TableRow> rows;

  void add(std::string parameter, double value, double bound, bool pass);
  bool passed() const;
  int failure_count() const;
  // "# modloc-1" comment line, "parameter,value,bound,pass" header, then one
  // row per line with shortest round-trip number formatting.
  std::string to_csv() const;
  // One-line JSON record of the failing rows (empty string when none).
  std::string failure_json() const;
};

// Shared scan parameters. The flat "key = value" config file and the CLI
// flags both write into this; keys are N, a, m, Theta, M, kappa_max, seed.
struct ModelConfig {
  int n_sites = 1024;
  double spacing = 0.05;
  double mass = 1.0;
  double theta_max = 6.283185307179586;
  int rapidity_grid = 512;
  int mode_cutoff = 8;
  std::uint64_t seed = 1;
};

void set_config(ModelConfig& cfg, const std::string& key,
                const std::string& value);
ModelConfig config_from_file(const std::string& path);

// Worker cap: MODLOC_THREADS when set to a positive integer, hardware
// concurrency otherwise.
int thread_budget();

// Runs body(0), ..., body(count - 1) across the worker budget. Callers keep
// one result slot per index and derive one RNG stream per index, so reports
// come out byte-identical no matter how the work is scheduled.
void parallel_for(int count, const std::function<void(int)>& body);

// rank/(2n) measure on random subspaces of the standard symplectic R^{2n}:
// normalization, known-rank construction, monotonicity, and additivity over
// sigma-orthogonal pairs, all compared in exact rational arithmetic.
TableReport gleason_suite(int dim_min, int dim_max, int samples_per_dim,
                          std::uint64_t seed);

// Complement involution, de Morgan, order reversal, and the complex-subspace
// embedding, on random real subspaces of C^n for n <= max_complex_dim.
TableReport lattice_selftest(int max_complex_dim, int instances,
                             std::uint64_t seed);

// Chains of symplectic planes between random endpoint pairs: length at most
// four, endpoints matched, adjacent members meeting in exactly one dimension.
TableReport plane_chain_suite(int real_dim_min, int real_dim_max,
                              int pairs_per_dim, std::uint64_t seed);

// Modular data on random standard subspaces of C^n, n = 2..8: J H = H',
// Delta^{it} H = H, covariance transport, and projection reconstruction.
// Ill-conditioned draws are excluded and their fraction reported.
TableReport modular_suite(int samples_per_dim, std::uint64_t seed);

// ||E + F - E v F|| = ||EF|| and the five-block orthogonal splitting on
// random projection pairs.
TableReport defect_suite(int pairs, std::uint64_t seed);

// Exact region identities (wedge, cones, point joins, the textbook
// non-distributive configuration), random staircases checked against a
// pointwise complement oracle, and the spatial embedding homomorphism.
TableReport causal_suite(int staircases, int sample_points,
                         std::uint64_t seed);

// Smeared field commutator on the lattice: random spacelike separations
// with a three-site margin held to 1e-6 relative size, plus a timelike
// witness that must stay above 1e-3.
TableReport commutator_scan(const ModelConfig& cfg, int spacelike_samples);

// Interval pairs at distances dmin..dmax: commutation premise, ||EF|| decay
// against its exponential bound, additivity defect, strict monotonicity and
// log-slope, optionally re-run at doubled N for the no-regression check.
TableReport cluster_scan(const ModelConfig& cfg, double dmin, double dmax,
                         int points, bool compare_doubled);

// Localization probability of random wave packets: normalization,
// monotonicity, and the additivity defect against exp(-m d) plus the frozen
// lattice allowance.
TableReport fuzzy_suite(const ModelConfig& cfg, int triples);

// Wedge subspace residuals in the rapidity model: duality, boost
// invariance, lightlike inclusion, fixed-space dimension, conditioning.
TableReport bgl_suite(const ModelConfig& cfg);

// Decay of ||(E P)^k|| for the overlapping two-site fixture, down through
// the 0.05 threshold.
TableReport nw_compare_suite(const ModelConfig& cfg, int iterations);

// Localization-axiom audit over a fixed four-member interval family.
TableReport observable_audit_suite(const ModelConfig& cfg);

}  // namespace modloc
