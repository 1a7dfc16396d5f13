#include <modloc/suites.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <Eigen/QR>
#include <boost/rational.hpp>

#include <modloc/causal1d.hpp>
#include <modloc/linalg.hpp>
#include <modloc/modular.hpp>
#include <modloc/numfmt.hpp>
#include <modloc/realspace.hpp>
#include <modloc/rng.hpp>
#include <modloc/symplectic.hpp>

namespace modloc {
namespace {

using cplx = std::complex<double>;
using rational = boost::rational<long>;

std::uint64_t stream_seed(std::uint64_t seed, int index) {
  return seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
}

CMat complex_gaussian(Rng& rng, int rows, int cols) {
  const Mat re = rng.gaussian(rows, cols);
  const Mat im = rng.gaussian(rows, cols);
  return (re.cast<cplx>() + cplx(0, 1) * im.cast<cplx>()) / std::sqrt(2.0);
}

CMat random_unitary(Rng& rng, int n) {
  Eigen::HouseholderQR<CMat> qr(complex_gaussian(rng, n, n));
  return CMat(qr.householderQ());
}

// Real 2n x 2n representation of a complex-linear map on C^n.
Mat real_linear_of(const ComplexSpace& space, const CMat& u) {
  const int d = space.real_dim();
  return space.embed_cols(u * space.extract_cols(Mat::Identity(d, d)));
}

// Pointwise conjugation (a; b) -> (a; -b): orthogonal and antilinear.
Mat conjugation_matrix(const ComplexSpace& space) {
  const int n = space.complex_dim();
  Mat c = Mat::Identity(2 * n, 2 * n);
  c.bottomRightCorner(n, n) *= -1.0;
  return c;
}

RealProjection random_projection(Rng& rng, const ComplexSpace& space) {
  const int d = rng.uniform_int(0, space.real_dim());
  if (d == 0) return RealProjection::zero(space);
  return projector_from_span(space, rng.gaussian(space.real_dim(), d));
}

double safe_containment(const RealProjection& outer,
                        const RealProjection& inner) {
  if (inner.rank() == 0) return 0.0;
  return containment_residual(outer, inner);
}

bool same_span(const Mat& a, const Mat& b, double tol) {
  if (a.cols() != b.cols()) return false;
  if (a.cols() == 0) return true;
  const double ra = spectral_norm(Mat(a - b * (b.transpose() * a)));
  const double rb = spectral_norm(Mat(b - a * (a.transpose() * b)));
  return std::max(ra, rb) <= tol;
}

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

void TableReport::add(std::string parameter, double value, double bound,
                      bool pass) {
  rows.push_back({std::move(parameter), value, bound, pass});
}

bool TableReport::passed() const { return failure_count() == 0; }

int TableReport::failure_count() const {
  int n = 0;
  for (const TableRow& r : rows)
    if (!r.pass) ++n;
  return n;
}

std::string TableReport::to_csv() const {
  std::string out = "# modloc-1\nparameter,value,bound,pass\n";
  for (const TableRow& r : rows) {
    out += r.parameter;
    out += ',';
    out += format_double(r.value);
    out += ',';
    out += format_double(r.bound);
    out += ',';
    out += r.pass ? "true" : "false";
    out += '\n';
  }
  return out;
}

std::string TableReport::failure_json() const {
  if (passed()) return {};
  std::string out = "{\"schema\":\"modloc-1\",\"check\":\"" + name +
                    "\",\"failed\":" + std::to_string(failure_count()) +
                    ",\"total\":" + std::to_string(rows.size()) +
                    ",\"rows\":[";
  int listed = 0;
  for (const TableRow& r : rows) {
    if (r.pass) continue;
    if (listed == 16) {
      out += ",{\"parameter\":\"...\"}";
      break;
    }
    if (listed > 0) out += ',';
    out += "{\"parameter\":\"" + r.parameter +
           "\",\"value\":" + format_double(r.value) +
           ",\"bound\":" + format_double(r.bound) + "}";
    ++listed;
  }
  out += "]}";
  return out;
}

void set_config(ModelConfig& cfg, const std::string& key,
                const std::string& value) {
  try {
    if (key == "N")
      cfg.n_sites = std::stoi(value);
    else if (key == "a")
      cfg.spacing = std::stod(value);
    else if (key == "m")
      cfg.mass = std::stod(value);
    else if (key == "Theta")
      cfg.theta_max = std::stod(value);
    else if (key == "M")
      cfg.rapidity_grid = std::stoi(value);
    else if (key == "kappa_max")
      cfg.mode_cutoff = std::stoi(value);
    else if (key == "seed")
      cfg.seed = std::stoull(value);
    else
      throw std::invalid_argument("unknown config key: " + key);
  } catch (const std::invalid_argument&) {
    if (key == "N" || key == "a" || key == "m" || key == "Theta" ||
        key == "M" || key == "kappa_max" || key == "seed")
      throw std::invalid_argument("bad config value for " + key + ": " +
                                  value);
    throw;
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("bad config value for " + key + ": " + value);
  }
}

ModelConfig config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ModelConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trimmed(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line needs key = value: " + body);
    set_config(cfg, trimmed(body.substr(0, eq)), trimmed(body.substr(eq + 1)));
  }
  return cfg;
}

int thread_budget() {
  if (const char* env = std::getenv("MODLOC_THREADS")) {
    const int k = std::atoi(env);
    if (k >= 1) return k;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int count, const std::function<void(int)>& body) {
  if (count <= 0) return;
  const int workers = std::min(thread_budget(), count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex error_lock;
  std::exception_ptr error;
  auto drain = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> hold(error_lock);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(drain);
  drain();
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

TableReport gleason_suite(int dim_min, int dim_max, int samples_per_dim,
                          std::uint64_t seed) {
  if (dim_min < 1 || dim_max < dim_min || samples_per_dim < 1)
    throw std::invalid_argument("bad gleason suite sizes");
  TableReport report{"gleason", {}};
  const int dims = dim_max - dim_min + 1;
  std::vector<std::shared_ptr<const SymplecticSpace>> spaces;
  for (int i = 0; i < dims; ++i)
    spaces.push_back(std::make_shared<SymplecticSpace>(
        SymplecticSpace::standard(dim_min + i)));

  for (int i = 0; i < dims; ++i) {
    const int n = dim_min + i;
    const SymplecticSubspace full(spaces[i], Mat::Identity(2 * n, 2 * n));
    const SymplecticSubspace zero(spaces[i], Mat(2 * n, 0));
    const bool ok = gleason_measure(full) == rational(1) &&
                    gleason_measure(zero) == rational(0);
    report.add("n=" + std::to_string(n) + "/normalization", ok ? 0.0 : 1.0,
               0.0, ok);
  }

  const int total = dims * samples_per_dim;
  std::vector<std::array<TableRow, 3>> slots(total);
  parallel_for(total, [&](int idx) {
    const int di = idx / samples_per_dim;
    const int s = idx % samples_per_dim;
    const int n = dim_min + di;
    Rng rng(stream_seed(seed, idx));
    const auto& space = spaces[di];
    const std::string tag =
        "n=" + std::to_string(n) + "/s=" + std::to_string(s);

    // Complex unitaries act symplectically here, so a rotated bundle of k
    // coordinate planes plus c isotropic directions has rank exactly 2k.
    const ComplexSpace cspace(n);
    const Mat rot = real_linear_of(cspace, random_unitary(rng, n));
    const int k = rng.uniform_int(0, n);
    const int c = rng.uniform_int(0, n - k);
    Mat span = Mat::Zero(2 * n, 2 * k + c);
    for (int j = 0; j < k; ++j) {
      span(j, 2 * j) = 1.0;
      span(n + j, 2 * j + 1) = 1.0;
    }
    for (int j = 0; j < c; ++j) span(k + j, 2 * k + j) = 1.0;
    const SymplecticSubspace h(space, Mat(rot * span));
    const rational mu = gleason_measure(h);
    const bool known_ok = mu == rational(2 * k, 2 * n);
    slots[idx][0] = {tag + "/rank=" + std::to_string(2 * k),
                     boost::rational_cast<double>(mu), k / double(n),
                     known_ok};

    // Monotone under enlargement.
    const int extra = rng.uniform_int(0, 2 * n - h.dim());
    Mat wider(2 * n, h.dim() + extra);
    wider.leftCols(h.dim()) = h.basis();
    if (extra > 0) wider.rightCols(extra) = rng.gaussian(2 * n, extra);
    const rational mu2 = gleason_measure(SymplecticSubspace(space, wider));
    slots[idx][1] = {tag + "/monotone",
                     boost::rational_cast<double>(mu2 - mu), 0.0, mu2 >= mu};

    // Additive over a sigma-orthogonal pair: random subspaces of disjoint
    // plane blocks, rotated together.
    std::vector<int> sites_a, sites_b;
    for (int j = 0; j < n; ++j)
      (rng.uniform() < 0.5 ? sites_a : sites_b).push_back(j);
    auto block_subspace = [&](const std::vector<int>& sites) {
      const int nb = 2 * static_cast<int>(sites.size());
      const int db = nb == 0 ? 0 : rng.uniform_int(0, nb);
      Mat out = Mat::Zero(2 * n, db);
      if (db > 0) {
        const Mat coeff = rng.gaussian(nb, db);
        for (std::size_t r = 0; r < sites.size(); ++r) {
          out.row(sites[r]) = coeff.row(2 * r);
          out.row(n + sites[r]) = coeff.row(2 * r + 1);
        }
      }
      return Mat(rot * out);
    };
    const Mat ba = block_subspace(sites_a);
    const Mat bb = block_subspace(sites_b);
    Mat both(2 * n, ba.cols() + bb.cols());
    both.leftCols(ba.cols()) = ba;
    both.rightCols(bb.cols()) = bb;
    const rational mu_a = gleason_measure(SymplecticSubspace(space, ba));
    const rational mu_b = gleason_measure(SymplecticSubspace(space, bb));
    const rational mu_ab = gleason_measure(SymplecticSubspace(space, both));
    slots[idx][2] = {tag + "/additive",
                     boost::rational_cast<double>(mu_ab - mu_a - mu_b), 0.0,
                     mu_ab == mu_a + mu_b};
  });
  for (const auto& slot : slots)
    for (const TableRow& row : slot) report.rows.push_back(row);
  return report;
}

TableReport lattice_selftest(int max_complex_dim, int instances,
                             std::uint64_t seed) {
  if (max_complex_dim < 1 || instances < 1)
    throw std::invalid_argument("bad lattice suite sizes");
  TableReport report{"lattice", {}};
  std::vector<TableRow> slots(instances);
  parallel_for(instances, [&](int idx) {
    Rng rng(stream_seed(seed, idx));
    const int n = rng.uniform_int(1, max_complex_dim);
    const ComplexSpace space(n);
    const RealProjection e = random_projection(rng, space);
    const RealProjection f = random_projection(rng, space);
    const RealProjection g = random_projection(rng, space);
    double worst = 0;

    worst = std::max(
        worst, projection_distance(
                   symplectic_complement(symplectic_complement(e)), e));
    worst = std::max(
        worst,
        projection_distance(
            symplectic_complement(join(e, f)),
            meet(symplectic_complement(e), symplectic_complement(f))));
    const RealProjection wider = join(e, g);
    worst = std::max(worst, safe_containment(symplectic_complement(e),
                                             symplectic_complement(wider)));

    // Complex subspaces: sigma-complement equals the real orthocomplement
    // and the projection commutes with i.
    const int k = rng.uniform_int(0, n);
    RealProjection ek = RealProjection::zero(space);
    if (k > 0) {
      Eigen::HouseholderQR<CMat> qr(complex_gaussian(rng, n, k));
      const CMat q = CMat(qr.householderQ()).leftCols(k);
      ek = RealProjection(RealSubspace(space, space.embed_cols(q)));
    }
    worst = std::max(worst, ek.is_complex_linear() ? 0.0 : 1.0);
    worst = std::max(worst, projection_distance(symplectic_complement(ek),
                                                real_orthocomplement(ek)));

    slots[idx] = {"n=" + std::to_string(n) + "/s=" + std::to_string(idx),
                  worst, 1e-8, worst <= 1e-8};
  });
  report.rows = std::move(slots);
  return report;
}

TableReport plane_chain_suite(int real_dim_min, int real_dim_max,
                              int pairs_per_dim, std::uint64_t seed) {
  if (real_dim_min < 4 || real_dim_max < real_dim_min ||
      real_dim_min % 2 != 0 || real_dim_max % 2 != 0 || pairs_per_dim < 1)
    throw std::invalid_argument("bad plane suite sizes");
  TableReport report{"planes", {}};
  std::vector<int> dims;
  for (int d = real_dim_min; d <= real_dim_max; d += 2) dims.push_back(d);
  std::vector<std::shared_ptr<const SymplecticSpace>> spaces;
  for (int d : dims)
    spaces.push_back(
        std::make_shared<SymplecticSpace>(SymplecticSpace::standard(d / 2)));

  const int total = static_cast<int>(dims.size()) * pairs_per_dim;
  std::vector<TableRow> slots(total);
  parallel_for(total, [&](int idx) {
    const int di = idx / pairs_per_dim;
    const int s = idx % pairs_per_dim;
    const int dim = dims[di];
    Rng rng(stream_seed(seed, idx));
    const auto& space = spaces[di];
    auto random_plane = [&]() {
      for (int tries = 0; tries < 256; ++tries) {
        SymplecticSubspace p(space, rng.gaussian(dim, 2));
        if (p.dim() == 2 && symplectic_rank(p).rank == 2) return p;
      }
      throw std::runtime_error("plane sampling failed");
    };
    const SymplecticSubspace k = random_plane();
    const SymplecticSubspace h = random_plane();
    const auto chain = plane_chain(k, h);
    bool ok = !chain.empty() && chain.size() <= 4;
    if (ok) {
      ok = same_span(chain.front().basis(), k.basis(), 1e-9) &&
           same_span(chain.back().basis(), h.basis(), 1e-9);
      for (const SymplecticSubspace& node : chain)
        ok = ok && node.dim() == 2 && symplectic_rank(node).rank == 2;
      for (std::size_t i = 0; ok && i + 1 < chain.size(); ++i)
        ok = intersection_basis(chain[i].basis(), chain[i + 1].basis(), dim,
                                1e-9)
                 .cols() == 1;
    }
    slots[idx] = {"dim=" + std::to_string(dim) + "/s=" + std::to_string(s),
                  double(chain.size()), 4.0, ok};
  });
  report.rows = std::move(slots);
  return report;
}

TableReport modular_suite(int samples_per_dim, std::uint64_t seed) {
  if (samples_per_dim < 1)
    throw std::invalid_argument("bad modular suite sizes");
  TableReport report{"modular", {}};
  const int dim_lo = 2, dim_hi = 8;
  const int dims = dim_hi - dim_lo + 1;
  const int total = dims * samples_per_dim;
  struct Slot {
    TableRow row;
    bool excluded = false;
  };
  std::vector<Slot> slots(total);
  const WarningSink quiet = [](const std::string&) {};
  parallel_for(total, [&](int idx) {
    const int n = dim_lo + idx / samples_per_dim;
    const int s = idx % samples_per_dim;
    Rng rng(stream_seed(seed, idx));
    const ComplexSpace space(n);
    const std::string tag =
        "n=" + std::to_string(n) + "/s=" + std::to_string(s);

    Mat b;
    for (int tries = 0;; ++tries) {
      b = orthonormal_span(rng.gaussian(2 * n, n));
      if (b.cols() == n &&
          complex_core_hull(RealSubspace(space, b)).standard)
        break;
      if (tries == 256) throw std::runtime_error("standard sampling failed");
    }
    const StandardSubspace h{RealSubspace(space, b)};
    const ModularData md = modular_data(h, quiet);
    if (md.condition() > 1e10) {
      slots[idx].excluded = true;
      slots[idx].row = {tag + "/excluded", md.condition(), 1e10, true};
      return;
    }
    const RealProjection eh{RealSubspace(space, b)};
    double worst = 0;

    worst = std::max(
        worst, projection_distance(projector_from_span(space, Mat(md.J() * b)),
                                   symplectic_complement(eh)));
    for (double t : {0.3, 1.0, 2.7})
      worst = std::max(worst, projection_distance(
                                  projector_from_span(
                                      space, Mat(md.delta_it(t) * b)),
                                  eh));

    Mat u = real_linear_of(space, random_unitary(rng, n));
    if (s % 2 == 1) u = Mat(u * conjugation_matrix(space));
    const ModularData md2 =
        modular_data(StandardSubspace{RealSubspace(space, Mat(u * b))}, quiet);
    const ModularData moved = covariance_transport(md, u);
    worst = std::max(worst, spectral_norm(Mat(moved.J() - md2.J())));
    worst = std::max(
        worst, spectral_norm(Mat(moved.delta_it(1.0) - md2.delta_it(1.0))));

    worst =
        std::max(worst, projection_distance(projection_from_modular(md), eh));
    slots[idx].row = {tag, worst, 1e-8, worst <= 1e-8};
  });
  for (const Slot& slot : slots) report.rows.push_back(slot.row);
  for (int d = 0; d < dims; ++d) {
    int excluded = 0;
    for (int s = 0; s < samples_per_dim; ++s)
      if (slots[d * samples_per_dim + s].excluded) ++excluded;
    const double frac = excluded / double(samples_per_dim);
    report.add("n=" + std::to_string(dim_lo + d) + "/excluded-fraction", frac,
               0.05, frac < 0.05);
  }
  return report;
}

TableReport defect_suite(int pairs, std::uint64_t seed) {
  if (pairs < 1) throw std::invalid_argument("bad defect suite sizes");
  TableReport report{"defect", {}};
  std::vector<std::array<TableRow, 2>> slots(pairs);
  parallel_for(pairs, [&](int idx) {
    Rng rng(stream_seed(seed, idx));
    const int n = rng.uniform_int(2, 8);
    const ComplexSpace space(n);
    const RealProjection e = random_projection(rng, space);
    const RealProjection f = random_projection(rng, space);
    const DefectReport rep = defect_operator(e, f);
    const std::string tag = "n=" + std::to_string(n) + "/s=" +
                            std::to_string(idx);

    const double mismatch = std::abs(rep.norm_X - rep.norm_EF);
    slots[idx][0] = {tag + "/norm-identity", mismatch, 1e-9,
                     mismatch <= 1e-9};

    // Halmos blocks: mutually orthogonal, summing to one, commuting with
    // both projections.
    double worst = 0;
    const Mat em = e.matrix();
    const Mat fm = f.matrix();
    Mat sum = Mat::Zero(2 * n, 2 * n);
    for (std::size_t i = 0; i < rep.blocks.size(); ++i) {
      const Mat bi = rep.blocks[i].matrix();
      sum += bi;
      worst = std::max(worst, spectral_norm(Mat(bi * em - em * bi)));
      worst = std::max(worst, spectral_norm(Mat(bi * fm - fm * bi)));
      for (std::size_t j = i + 1; j < rep.blocks.size(); ++j)
        worst = std::max(worst, cross_norm(rep.blocks[i], rep.blocks[j]));
    }
    worst = std::max(
        worst, spectral_norm(Mat(sum - Mat::Identity(2 * n, 2 * n))));
    slots[idx][1] = {tag + "/halmos", worst, 1e-9, worst <= 1e-9};
  });
  for (const auto& slot : slots)
    for (const TableRow& row : slot) report.rows.push_back(row);
  return report;
}

namespace {

// Exact membership in the complement of a union of closed boxes: x must be
// non-timelike to, and distinct from, every point of every box.
bool oracle_in_complement(const std::vector<LightconeBox>& cells, double u,
                          double v) {
  for (const LightconeBox& b : cells) {
    if (u > b.u1 && v > b.v1) return false;  // strictly later than some point
    if (u < b.u2 && v < b.v2) return false;  // strictly earlier than some
    if (b.contains(u, v)) return false;      // coincides with some point
  }
  return true;
}

}  // namespace

TableReport causal_suite(int staircases, int sample_points,
                         std::uint64_t seed) {
  if (staircases < 1 || sample_points < 1)
    throw std::invalid_argument("bad causal suite sizes");
  TableReport report{"causal", {}};
  auto exact = [&](const std::string& parameter, bool ok) {
    report.add(parameter, ok ? 0.0 : 1.0, 0.0, ok);
  };

  // Wedge fixtures.
  const CausalRegion w = CausalRegion::box(-kInf, 0.0, 0.0, kInf);
  const CausalRegion wc = causal_complement(w);
  const CausalRegion wl = CausalRegion::box(0.0, kInf, -kInf, 0.0);
  exact("wedge/meet-complement-empty", region_meet(w, wc).is_empty());
  exact("wedge/join-complement-full", region_join(w, wc).is_full());
  exact("wedge/double-complement", causal_complement(wc) == w);
  exact("wedge/complement-closure",
        region_contains(wc, wl) && region_contains(wl, wc));
  exact("wedge/complement-corner-removed",
        !wc.contains_event(0.0, 0.0) && wl.contains_event(0.0, 0.0));
  for (double t : {1.5, -1.5}) {
    const auto slice = time_slice(w, t);
    exact("wedge/time-slice-t=" + format_double(t),
          slice.size() == 1 && slice[0].lo == -std::abs(t) &&
              slice[0].hi == kInf);
  }

  // The standard non-distributive configuration, and a disjoint pair that
  // is not separated.
  const CausalRegion o1 = CausalRegion::box(-1.25, 0.0, 0.0, 1.5);
  const CausalRegion o2 = CausalRegion::box(-1.5, -0.25, -1.5, -0.25);
  const CausalRegion o3 = CausalRegion::box(0.25, 1.5, -0.5, 0.75);
  exact("figure/meets-empty",
        region_meet(o1, o2).is_empty() && region_meet(o1, o3).is_empty());
  const CausalRegion j23 = region_join(o2, o3);
  exact("figure/join-hull", j23 == CausalRegion::box(-1.5, 1.5, -1.5, 0.75));
  exact("figure/nondistributive", !region_meet(o1, j23).is_empty());
  exact("figure/disjoint-not-separated",
        region_meet(CausalRegion::box(0.0, 1.0, 0.0, 1.5), o2).is_empty() &&
            !region_separated(CausalRegion::box(0.0, 1.0, 0.0, 1.5), o2));

  // Joins of points: timelike pairs span a punctured diamond, spacelike
  // pairs stay discrete.
  const CausalRegion p0 = CausalRegion::point(0.0, 0.0);
  const CausalRegion p2 = CausalRegion::point(2.0, 0.0);
  const CausalRegion jp = region_join(p0, p2);
  const CausalRegion diamond = CausalRegion::box(0.0, 2.0, 0.0, 2.0);
  exact("points/timelike-join-closure",
        region_contains(jp, diamond) && region_contains(diamond, jp));
  exact("points/timelike-join-punctured",
        !jp.contains_event(1.0, 1.0) && !jp.contains_event(1.0, -1.0) &&
            jp.contains_event(1.0, 0.0));
  exact("points/spacelike-join-discrete",
        region_join(p0, CausalRegion::point(0.0, 3.0)) ==
            region_union(p0, CausalRegion::point(0.0, 3.0)));
  exact("points/nondistributive",
        !region_meet(jp, CausalRegion::point(1.0, 0.0)).is_empty() &&
            region_meet(p0, CausalRegion::point(1.0, 0.0)).is_empty() &&
            region_meet(p2, CausalRegion::point(1.0, 0.0)).is_empty());

  // Spatial embedding fixtures.
  const CausalRegion c01 = spatial_completion({{0.0, 1.0}});
  const CausalRegion c12 = spatial_completion({{1.0, 2.0}});
  exact("embed/touching-join",
        region_join(c01, c12) == spatial_completion({{0.0, 2.0}}));
  exact("embed/touching-separated", region_separated(c01, c12));
  exact("embed/empty-and-full",
        spatial_completion({}).is_empty() &&
            spatial_completion({{-kInf, kInf}}).is_full());

  // Random staircases against the pointwise oracle.
  const int per_region = std::max(1, sample_points / staircases);
  std::vector<std::array<TableRow, 4>> stair(staircases);
  parallel_for(staircases, [&](int idx) {
    Rng rng(stream_seed(seed, idx));
    auto random_region = [&]() {
      const int k = rng.uniform_int(1, 3);
      std::vector<LightconeBox> boxes;
      for (int b = 0; b < k; ++b) {
        double u1 = rng.uniform(-3.0, 3.0), u2 = rng.uniform(-3.0, 3.0);
        if (u2 < u1) std::swap(u1, u2);
        if (rng.uniform() < 0.2) u2 = u1;  // null segments allowed
        double v1 = rng.uniform(-3.0, 3.0), v2 = rng.uniform(-3.0, 3.0);
        if (v2 < v1) std::swap(v1, v2);
        boxes.push_back({u1, u2, v1, v2});
      }
      return CausalRegion::from_boxes(boxes);
    };
    const CausalRegion r1 = random_region();
    const CausalRegion r2 = random_region();
    const CausalRegion r1c = causal_complement(r1);
    const std::string tag = "stair/s=" + std::to_string(idx);

    stair[idx][0] = {tag + "/triple-complement",
                     causal_complement(causal_complement(r1c)) == r1c ? 0.0
                                                                      : 1.0,
                     0.0, causal_complement(causal_complement(r1c)) == r1c};
    const bool dm =
        causal_complement(region_union(r1, r2)) ==
        region_meet(r1c, causal_complement(r2));
    stair[idx][1] = {tag + "/de-morgan", dm ? 0.0 : 1.0, 0.0, dm};
    const bool cc = causal_completion(r1c) == r1c;
    stair[idx][2] = {tag + "/complement-complete", cc ? 0.0 : 1.0, 0.0, cc};

    int disagreements = 0;
    for (int p = 0; p < per_region; ++p) {
      const double u = rng.uniform(-8.0, 8.0);
      const double v = rng.uniform(-8.0, 8.0);
      if (r1c.contains_uv(u, v) != oracle_in_complement(r1.cells(), u, v))
        ++disagreements;
    }
    stair[idx][3] = {tag + "/oracle-agreement", double(disagreements), 0.0,
                     disagreements == 0};
  });
  for (const auto& slot : stair)
    for (const TableRow& row : slot) report.rows.push_back(row);

  // Spatial embedding homomorphism over random disjoint interval families.
  std::vector<std::array<TableRow, 4>> hom(staircases);
  parallel_for(staircases, [&](int idx) {
    Rng rng(stream_seed(seed, staircases + idx));
    std::vector<SpatialInterval> pieces(4);
    double x = -6.0;
    for (auto& piece : pieces) {
      const double lo = x + 0.2 + rng.uniform(0.0, 1.5);
      const double hi = lo + 0.3 + rng.uniform(0.0, 2.0);
      piece = {lo, hi};
      x = hi;
    }
    const std::vector<SpatialInterval> fam_a = {pieces[0], pieces[2]};
    const std::vector<SpatialInterval> fam_b = {pieces[1], pieces[3]};
    const CausalRegion ca = spatial_completion(fam_a);
    const CausalRegion cb = spatial_completion(fam_b);
    const std::string tag = "hom/s=" + std::to_string(idx);

    const auto slice = time_slice(ca, 0.0);
    bool recovered = slice.size() == fam_a.size();
    for (std::size_t i = 0; recovered && i < slice.size(); ++i)
      recovered = slice[i].lo == fam_a[i].lo && slice[i].hi == fam_a[i].hi;
    hom[idx][0] = {tag + "/recover", recovered ? 0.0 : 1.0, 0.0, recovered};

    const bool sep = region_separated(ca, cb);
    hom[idx][1] = {tag + "/disjoint-separated", sep ? 0.0 : 1.0, 0.0, sep};

    const bool additive = region_join(ca, cb) == spatial_completion(pieces);
    hom[idx][2] = {tag + "/additive", additive ? 0.0 : 1.0, 0.0, additive};

    const double s = rng.uniform(-2.0, 2.0);
    std::vector<SpatialInterval> shifted = fam_a;
    for (auto& piece : shifted) piece = {piece.lo + s, piece.hi + s};
    const bool covariant =
        poincare_apply({0.0, 0.0, s, false, false}, ca) ==
        spatial_completion(shifted);
    hom[idx][3] = {tag + "/covariant", covariant ? 0.0 : 1.0, 0.0, covariant};
  });
  for (const auto& slot : hom)
    for (const TableRow& row : slot) report.rows.push_back(row);
  return report;
}

TableReport commutator_scan(const ModelConfig& cfg, int spacelike_samples) {
  if (spacelike_samples < 1)
    throw std::invalid_argument("bad commutator suite sizes");
  TableReport report{"commutator", {}};
  const PositionModel model(cfg.n_sites, cfg.spacing, cfg.mass);
  const int n = cfg.n_sites;
  const double a = cfg.spacing;
  const int len = n / 16;
  const int s1_lo = n / 8, s1_hi = s1_lo + len;
  const int s2_lo = n / 2, s2_hi = s2_lo + len;
  const Vec f1 = bump_vector(model, s1_lo, s1_hi);
  const Vec f2 = bump_vector(model, s2_lo, s2_hi);
  const double n1 = model.norm(model.momentum_from_position(f1.cast<cplx>()));
  const double n2 = model.norm(model.momentum_from_position(f2.cast<cplx>()));
  const double scale = n1 * n2;
  const double gap_direct = a * (s2_lo - s1_hi);
  const double gap_wrap = a * (n - s2_hi + s1_lo);

  std::vector<TableRow> slots(spacelike_samples);
  parallel_for(spacelike_samples, [&](int idx) {
    Rng rng(stream_seed(cfg.seed, idx));
    // Keep both the direct and the wrap-around gap open, then stay three
    // sites inside the light cone of the closer one.
    const double x1 = rng.uniform(-0.3, 0.3) * gap_direct;
    const double reach = std::min(gap_direct + x1, gap_wrap - x1) - 3 * a;
    const double x0 = rng.uniform(-reach, reach);
    const double ratio =
        std::abs(commutator_function(model, f1, f2, x0, x1)) / scale;
    slots[idx] = {"x0=" + format_double(x0) + "/x1=" + format_double(x1),
                  ratio, 1e-6, ratio <= 1e-6};
  });
  report.rows = std::move(slots);

  // Timelike witness: align the support centers and step inside the cone.
  const double center_shift =
      a * 0.5 * ((s1_lo + s1_hi) - (s2_lo + s2_hi));
  double best = 0, best_x0 = 0;
  for (double c : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    const double x0 = c / cfg.mass;
    const double ratio =
        std::abs(commutator_function(model, f1, f2, x0, center_shift)) /
        scale;
    if (ratio > best) {
      best = ratio;
      best_x0 = x0;
    }
  }
  report.add("timelike/x0=" + format_double(best_x0), best, 1e-3,
             best >= 1e-3);
  return report;
}

TableReport cluster_scan(const ModelConfig& cfg, double dmin, double dmax,
                         int points, bool compare_doubled) {
  if (!(dmin > 0) || !(dmax > dmin) || points < 2)
    throw std::invalid_argument("bad cluster scan range");
  TableReport report{"cluster", {}};

  struct PointResult {
    double d = 0, premise = 0, norm_ef = 0, defect = 0, decay_bound = 0;
    bool premise_ok = false, decay_ok = false, meet_trivial = false;
  };
  const double premise_tol = 1e-6;
  const double lattice_slack = 1e-3;

  auto run_at = [&](int n_sites) {
    const PositionModel model(n_sites, cfg.spacing, cfg.mass);
    const TimeTranslationFamily family(model);
    const int len = std::min(100, n_sites / 6);
    std::vector<PointResult> out(points);
    parallel_for(points, [&](int i) {
      const double d_req = dmin + (dmax - dmin) * i / (points - 1);
      const int gap = static_cast<int>(std::lround(d_req / cfg.spacing)) + 1;
      const SiteSet sa = SiteSet::interval(0, len - 1);
      const SiteSet sb = SiteSet::interval(len - 1 + gap,
                                           len - 1 + gap + len - 1);
      const double d = site_distance(model, sa, sb);
      const RealProjection e = local_subspace(model, sa);
      const RealProjection f = local_subspace(model, sb);
      ClusterOptions opts;
      opts.tol_premise = premise_tol;
      opts.slack = lattice_slack;
      const ClusterReport rep = cluster_check(
          e, f, family, cfg.mass, d - 10 * cfg.spacing, opts);
      PointResult& r = out[i];
      r.d = d;
      r.premise = rep.premise_worst;
      r.norm_ef = rep.norm_EF;
      r.defect = defect_norm(e, f);
      r.decay_bound = rep.bound + lattice_slack;
      r.premise_ok = rep.premise_ok;
      r.decay_ok = rep.decay_ok;
      r.meet_trivial = rep.meet_trivial;
    });
    return out;
  };

  const auto base = run_at(cfg.n_sites);
  for (const PointResult& r : base) {
    const std::string tag = "d=" + format_double(r.d);
    report.add(tag + "/premise", r.premise, premise_tol, r.premise_ok);
    report.add(tag + "/meet-trivial", r.meet_trivial ? 0.0 : 1.0, 0.0,
               r.meet_trivial);
    report.add(tag + "/norm-EF", r.norm_ef, r.decay_bound, r.decay_ok);
    const double defect_bound =
        std::exp(-cfg.mass * r.d) + lattice_slack;
    report.add(tag + "/defect", r.defect, defect_bound,
               r.defect <= defect_bound);
  }

  double min_drop = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < points; ++i)
    min_drop = std::min(min_drop, base[i].norm_ef - base[i + 1].norm_ef);
  report.add("monotone/min-drop", min_drop, 0.0, min_drop > 0);

  // Least-squares slope of log ||EF|| against d.
  double sd = 0, sl = 0, sdd = 0, sdl = 0;
  for (const PointResult& r : base) {
    const double l = std::log(r.norm_ef);
    sd += r.d;
    sl += l;
    sdd += r.d * r.d;
    sdl += r.d * l;
  }
  const double slope =
      (points * sdl - sd * sl) / (points * sdd - sd * sd);
  report.add("log-slope", slope, -0.75 * cfg.mass,
             slope <= -0.75 * cfg.mass);

  if (compare_doubled) {
    const auto doubled = run_at(2 * cfg.n_sites);
    // The interval geometry is pinned in physical units, so refining the
    // box must not push any residual up beyond roundoff.
    double max_increase = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) {
      max_increase = std::max(max_increase,
                              doubled[i].premise - base[i].premise);
      max_increase = std::max(max_increase,
                              doubled[i].norm_ef - base[i].norm_ef);
      max_increase = std::max(max_increase,
                              doubled[i].defect - base[i].defect);
    }
    report.add("doubling/max-increase", max_increase, 1e-10,
               max_increase <= 1e-10);
  }
  return report;
}

TableReport fuzzy_suite(const ModelConfig& cfg, int triples) {
  if (triples < 1) throw std::invalid_argument("bad fuzzy suite sizes");
  TableReport report{"fuzzy", {}};
  const PositionModel model(cfg.n_sites, cfg.spacing, cfg.mass);
  const int n = cfg.n_sites;
  std::vector<std::array<TableRow, 3>> slots(triples);
  parallel_for(triples, [&](int idx) {
    Rng rng(stream_seed(cfg.seed, idx));
    const std::string tag = "s=" + std::to_string(idx);
    const double xbar = rng.uniform(0.0, n * cfg.spacing);
    const double p0 = rng.uniform(-2.0, 2.0) * cfg.mass;
    const double sigma_x = rng.uniform(0.5, 2.0);
    const CVec psi = gaussian_packet(model, xbar, p0, sigma_x);

    const int la = rng.uniform_int(20, 80);
    const int lb = rng.uniform_int(20, 80);
    const int gap = rng.uniform_int(21, 101);
    const int start = rng.uniform_int(0, n - la - lb - gap - 1);
    const SiteSet sa = SiteSet::interval(start, start + la - 1);
    const SiteSet sb = SiteSet::interval(start + la - 1 + gap,
                                         start + la - 1 + gap + lb - 1);
    const double d = site_distance(model, sa, sb);

    const double mu_a = fuzzy_measure(model, psi, sa);
    const double mu_b = fuzzy_measure(model, psi, sb);
    const double mu_ab = fuzzy_measure(model, psi, sa.unite(sb));

    const double norm_err =
        std::abs(fuzzy_measure(model, psi, SiteSet{})) +
        std::abs(fuzzy_measure(model, psi, SiteSet::interval(0, n - 1)) -
                 1.0);
    slots[idx][0] = {tag + "/normalization", norm_err, 1e-12,
                     norm_err <= 1e-12};
    const double mono = std::max(mu_a - mu_ab, mu_b - mu_ab);
    slots[idx][1] = {tag + "/monotone", mono, 1e-12, mono <= 1e-12};
    const double defect = std::abs(mu_ab - mu_a - mu_b);
    const double bound = std::exp(-cfg.mass * d) + 1e-3;
    slots[idx][2] = {tag + "/additive/d=" + format_double(d), defect, bound,
                     defect <= bound};
  });
  for (const auto& slot : slots)
    for (const TableRow& row : slot) report.rows.push_back(row);
  return report;
}

TableReport bgl_suite(const ModelConfig& cfg) {
  TableReport report{"bgl", {}};
  const RapidityModel model(cfg.rapidity_grid, cfg.theta_max, cfg.mass,
                            cfg.mode_cutoff);
  const BglReport rep = bgl_report(model, 1e-8);
  report.add("fixed-dim", double(rep.fixed_dim),
             double(2 * cfg.mode_cutoff + 1),
             rep.fixed_dim == 2 * cfg.mode_cutoff + 1);
  report.add("duality", rep.duality_residual, 1e-6,
             rep.duality_residual <= 1e-6);
  report.add("boost/t=" + format_double(rep.boost_step), rep.boost_residual,
             1e-8, rep.boost_residual <= 1e-8);
  report.add("lightlike/s=" + format_double(rep.lightlike_shift),
             rep.lightlike_residual, 1e-5, rep.lightlike_residual <= 1e-5);
  report.add("condition", rep.condition_bound, 1e12,
             rep.condition_bound <= 1e12);
  return report;
}

TableReport nw_compare_suite(const ModelConfig& cfg, int iterations) {
  if (iterations < 2) throw std::invalid_argument("bad nw suite sizes");
  TableReport report{"nw", {}};
  const PositionModel model(cfg.n_sites, cfg.spacing, cfg.mass);
  const int n = cfg.n_sites;
  const SiteSet region = SiteSet::interval(n / 2 - 1, n / 2);
  const auto trace = nw_incompatibility(model, region, region, iterations);
  // sigma^(2k-1) < 0.05 at k = iterations needs sigma below this root.
  const double sigma_bound = std::pow(0.05, 1.0 / (2.0 * iterations - 1.0));
  report.add("overlap-sigma", trace[0], sigma_bound,
             trace[0] < sigma_bound);
  double worst_step = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < trace.size(); ++i)
    worst_step = std::max(worst_step, trace[i + 1] - trace[i]);
  report.add("strictly-decreasing", worst_step, 0.0, worst_step < 0);
  report.add("final-norm/k=" + std::to_string(iterations), trace.back(),
             0.05, trace.back() < 0.05);
  return report;
}

TableReport observable_audit_suite(const ModelConfig& cfg) {
  TableReport report{"audit", {}};
  const PositionModel model(cfg.n_sites, cfg.spacing, cfg.mass);
  const int n = cfg.n_sites;
  const int len = n / 8;
  const SiteSet a1 = SiteSet::interval(n / 16, n / 16 + len - 1);
  const SiteSet a2 = SiteSet::interval(5 * n / 16, 5 * n / 16 + len - 1);
  const SiteSet a3 = SiteSet::interval(9 * n / 16, 9 * n / 16 + len - 1);
  const std::vector<SiteSet> family = {a1, a2, a3, a1.complement(n)};
  const ObservableAudit audit = observable_audit(model, family);
  report.add("normalization", audit.normalization, 0.0,
             audit.normalization == 0.0);
  report.add("additivity", audit.additivity, 1e-9, audit.additivity <= 1e-9);
  report.add("separation", audit.separation, 1e-9, audit.separation <= 1e-9);
  report.add("covariance", audit.covariance, 1e-9, audit.covariance <= 1e-9);
  report.add("complement-duality", audit.complement_duality, 1e-9,
             audit.complement_duality <= 1e-9);
  report.add("separated-pairs", double(audit.separated_pairs), 4.0,
             audit.separated_pairs == 4);
  report.add("separation-flags-agree", audit.separation_agrees ? 0.0 : 1.0,
             0.0, audit.separation_agrees);
  return report;
}

}  // namespace modloc
