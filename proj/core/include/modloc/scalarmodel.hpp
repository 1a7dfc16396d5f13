#pragma once

#include <complex>
#include <initializer_list>
#include <memory>
#include <vector>

#include <modloc/causal1d.hpp>
#include <modloc/modular.hpp>
#include <modloc/realspace.hpp>

namespace modloc {

// Closed range of lattice site indices, lo..hi inclusive.
struct SiteInterval {
  int lo = 0;
  int hi = 0;
  friend bool operator==(const SiteInterval&, const SiteInterval&) = default;
};

// Union of site intervals, normalized: sorted, disjoint, and with at least
// one site of gap between parts (touching parts are fused).
class SiteSet {
 public:
  SiteSet() = default;
  SiteSet(std::initializer_list<SiteInterval> parts);
  explicit SiteSet(std::vector<SiteInterval> parts);
  static SiteSet interval(int lo, int hi);

  const std::vector<SiteInterval>& parts() const noexcept { return parts_; }
  bool empty() const noexcept { return parts_.empty(); }
  int count() const noexcept;
  int min_site() const;
  int max_site() const;
  bool contains(int site) const noexcept;
  std::vector<int> sites() const;  // ascending

  SiteSet unite(const SiteSet& other) const;
  SiteSet complement(int n_sites) const;      // within [0, n_sites)
  SiteSet shifted(int step, int n_sites) const;  // cyclic
  // Grow every part by r sites on both ends. Throws std::invalid_argument
  // ("enlarged region wraps the periodic box") if a part leaves [0, n_sites).
  SiteSet dilated(int r, int n_sites) const;

  friend bool operator==(const SiteSet&, const SiteSet&) = default;

 private:
  std::vector<SiteInterval> parts_;
};

// Plans both unnormalized DFT directions once and keeps them immutable:
// forward_k = sum_j in_j e^{-2 pi i jk/n}, backward_j = sum_k in_k
// e^{+2 pi i jk/n}. Execution on distinct buffers is thread-safe.
class Fft {
 public:
  explicit Fft(int n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  int size() const noexcept;
  CVec forward(const CVec& in) const;
  CVec backward(const CVec& in) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Momentum-grid model of a mass-m scalar particle on an N-site periodic
// lattice of spacing a. States are complex N-vectors in the momentum
// representation; entry k carries p_k = 2 pi k~/(N a) with k~ the signed
// alias of k in [-N/2, N/2), and the dispersion omega = sqrt(m^2 + p^2) is
// the continuum one sampled on the grid, so omega >= m holds exactly.
// The physical inner product weights entry k by a/(N omega_k);
// to_canonical rescales by sqrt of the weight so the weighted inner product
// becomes the plain one, which is the coordinate frame every RealProjection
// produced here acts in.
class PositionModel {
 public:
  PositionModel(int n_sites, double spacing, double mass);

  int sites() const noexcept { return n_; }
  double spacing() const noexcept { return a_; }
  double mass() const noexcept { return m_; }
  double box_length() const noexcept { return n_ * a_; }
  ComplexSpace space() const noexcept { return ComplexSpace(n_); }

  const Vec& momenta() const noexcept { return p_; }
  const Vec& omega() const noexcept { return omega_; }
  const Vec& weights() const noexcept { return w_; }

  std::complex<double> inner(const CVec& psi, const CVec& phi) const;
  double norm(const CVec& psi) const;

  CVec to_canonical(const CVec& psi) const;
  CVec from_canonical(const CVec& chi) const;

  // Lattice transcriptions of the continuum transforms: momentum_from_position
  // is a * DFT (integral against e^{-ipx}), position_from_momentum divides the
  // inverse DFT by a so the pair is mutually inverse.
  CVec momentum_from_position(const CVec& f) const;
  CVec position_from_momentum(const CVec& psi) const;

  const Fft& fft() const noexcept { return *fft_; }

 private:
  int n_;
  double a_, m_;
  Vec p_, omega_, w_, sqrt_w_;
  std::shared_ptr<const Fft> fft_;
};

// Group element acting on spacetime as y -> R Lambda(rapidity) y + x, where
// R applies time reflection and/or parity. compose follows that convention,
// so U(g) U(h) = U(compose(g, h)) on any model representing both factors.
struct LatticeSymmetry {
  double x0 = 0;
  double x1 = 0;
  double rapidity = 0;
  bool time_reflect = false;
  bool parity = false;
};
LatticeSymmetry compose(const LatticeSymmetry& g, const LatticeSymmetry& h);

// Translations multiply by e^{i(x0 omega - x1 p)}; time reflection maps
// psi(p) to conj(psi(-p)), parity to psi(-p). Nonzero rapidity throws
// std::invalid_argument("boost requires rapidity model").
CVec apply_symmetry(const PositionModel& model, const CVec& psi,
                    const LatticeSymmetry& g);

struct CauchyPair {
  CVec plus;   // time-reflection invariant part, (psi + U(T)psi)/2
  CVec minus;  // (psi - U(T)psi)/(2 i omega); psi = plus + i omega minus
};
CauchyPair cauchy_split(const PositionModel& model, const CVec& psi);

// psi whose Cauchy components have the given real position-space data.
CVec state_from_cauchy(const PositionModel& model, const Vec& phi,
                       const Vec& pi);

// Real span of the Cauchy-data generators of the sites of region: for each
// site x the pair (delta at x, 0) and (0, delta at x). The empty region
// gives the zero projection and the full lattice the identity, so the set
// function is normalized; proper regions have rank exactly 2 * count.
RealProjection local_subspace(const PositionModel& model,
                              const SiteSet& region);

// Multiplication by the indicator of region conjugated into the momentum
// representation; complex-linear, built from exactly orthogonal DFT columns.
RealProjection nw_projection(const PositionModel& model,
                             const SiteSet& region);

// Per-site weights <psi, P(site) psi> of the position system of
// imprimitivity underlying nw_projection; sums to the squared norm.
Vec nw_position_density(const PositionModel& model, const CVec& psi);

// Im <f1~, U(x) f2~> for real position-space test vectors f1, f2.
double commutator_function(const PositionModel& model, const Vec& f1,
                           const Vec& f2, double x0, double x1);

// ||E(region) psi||^2 for a unit vector psi; throws std::invalid_argument
// ("state is not normalized") when | ||psi|| - 1 | > 1e-10.
double fuzzy_measure(const PositionModel& model, const CVec& psi,
                     const SiteSet& region);
double fuzzy_measure(const PositionModel& model, const CVec& psi,
                     const RealProjection& localized);

// ||(1 - E(region grown by |t| + delta)) U(t e0) E(region)||. The growth
// radius is floor((|t| + delta)/a) sites; leaving the box throws the
// dilated() error.
double propagation_check(const PositionModel& model, const SiteSet& region,
                         double t, double delta);

// Norms ||(E_local(a) P_nw(b))^n|| for n = 1..n_iter. Both projections are
// spanned by orthonormal bases B_E, B_P, so with M = B_E^T B_P the n-th
// norm is sigma_max(M)^(2n-1); the whole trace costs one SVD.
std::vector<double> nw_incompatibility(const PositionModel& model,
                                       const SiteSet& a, const SiteSet& b,
                                       int n_iter);

// Distance between the closed cell footprints of the two site sets on the
// periodic ring: a * (min site gap - 1), and 0 when they touch or overlap.
double site_distance(const PositionModel& model, const SiteSet& a,
                     const SiteSet& b);

// Cell footprint of one site interval: site j occupies
// [a (j - 1/2), a (j + 1/2)], so disjoint site sets map to regions that at
// most touch and shared sites force a genuine overlap.
SpatialInterval physical_interval(const PositionModel& model,
                                  const SiteInterval& part);
CausalRegion completion_of(const PositionModel& model, const SiteSet& region);

// Smooth bump supported exactly on sites lo..hi (zero at the ends).
Vec bump_vector(const PositionModel& model, int lo, int hi);

// Momentum-representation Gaussian packet centered at position xbar with
// mean momentum p0 and position width sigma_x, normalized to unit norm.
CVec gaussian_packet(const PositionModel& model, double xbar, double p0,
                     double sigma_x);

// V(t) = U(t e0): diagonal phase e^{i t omega} in canonical coordinates.
// The generator spectrum is the omega grid, whose minimum is the mass
// exactly (attained at p = 0).
class TimeTranslationFamily final : public UnitaryFamily {
 public:
  explicit TimeTranslationFamily(const PositionModel& model);
  Mat apply(double t, const Mat& cols) const override;
  double spectrum_min() const override { return mass_; }

 private:
  ComplexSpace space_;
  Vec omega_;
  double mass_;
};

// Worst residuals of the localization axioms over a finite family of
// regions. Pairs are tested when their cell footprints are causally
// separated, which on the lattice coincides with site disjointness.
struct ObservableAudit {
  double normalization = 0;  // ||E(empty)|| and ||1 - E(full)||
  double additivity = 0;     // ||join(E_A, E_B) - E(A u B)|| over separated pairs
  double separation = 0;     // ||E_A i E_B|| over separated pairs
  double covariance = 0;     // ||U(0, s a) E(A) U* - E(A + s)||
  double complement_duality = 0;  // containment E(A) <= E(A^c)'
  int separated_pairs = 0;
  bool separation_agrees = true;  // is_separated matched region_separated
  double worst() const;
};
ObservableAudit observable_audit(const PositionModel& model,
                                 const std::vector<SiteSet>& family);

// Rapidity-grid model for boosts: M points theta_j = -Theta + j dtheta with
// the flat measure dtheta (the mass shell measure dp/omega in rapidity
// coordinates), dtheta = 2 Theta / M. Mode functions e^{i nu_n theta} with
// nu_n = pi n / Theta and |n| <= kappa_max diagonalize the boost generator;
// boosting by a grid multiple of dtheta is an exact cyclic shift of grid
// samples. The wedge reflection kernel e^{-pi nu} caps the usable cutoff:
// its condition number e^{2 pi^2 kappa_max / Theta} must stay <= 1e12.
class RapidityModel {
 public:
  RapidityModel(int grid_size, double theta_max, double mass,
                int mode_cutoff);

  int grid_size() const noexcept { return m_grid_; }
  double theta_max() const noexcept { return theta_; }
  double mass() const noexcept { return mass_; }
  int mode_cutoff() const noexcept { return kappa_; }
  int mode_count() const noexcept { return 2 * kappa_ + 1; }
  double dtheta() const noexcept { return 2 * theta_ / m_grid_; }
  const Vec& theta_grid() const noexcept { return theta_grid_; }
  const Vec& nu() const noexcept { return nu_; }
  ComplexSpace mode_space() const noexcept {
    return ComplexSpace(mode_count());
  }
  double condition_bound() const noexcept;
  static int max_mode_cutoff(double theta_max);  // largest cutoff within guard

  std::complex<double> inner(const CVec& f, const CVec& g) const;

  CVec grid_from_modes(const CVec& modes) const;
  CVec modes_from_grid(const CVec& f) const;  // band compression
  // Band compression Phi* diag(g) Phi of a pointwise grid multiplier.
  CMat compress_diagonal(const CVec& grid_multiplier) const;
  CVec translation_multiplier(double x0, double x1) const;

  // Grid action of a symmetry: translations are diagonal multipliers,
  // reflections index maps, boosts cyclic shifts at grid multiples of
  // dtheta and band-exact spectral shifts otherwise.
  CVec apply_symmetry_grid(const CVec& f, const LatticeSymmetry& g) const;

 private:
  int m_grid_;
  double theta_, mass_;
  int kappa_;
  Vec theta_grid_, nu_;
  std::shared_ptr<const Fft> fft_;
};

enum class Wedge { kRight, kLeft };

// Projection onto the fixed space of T = J e^{-pi K} in mode coordinates,
// J being pointwise conjugation in rapidity (the PT operator) and the
// multiplier restricted to |nu| <= nu_max. The fixed space is extracted
// from the real-linear matrix of (1 + T)/2 with relative rank cutoff 1e-8;
// the conditioning guard keeps the genuine singular values (cosh pi nu_n,
// between 1 and sqrt(cond)/2) clear of that cutoff. The left wedge is the
// parity conjugate; a translate compresses the grid multiplier to the band
// and re-spans, exact in the band limit.
RealProjection bgl_wedge_space(const RapidityModel& model, Wedge wedge,
                               double x0 = 0, double x1 = 0);

struct BglReport {
  int fixed_dim = 0;
  double duality_residual = 0;    // ||E_left - E_right'||
  double boost_residual = 0;      // ||U(t) E_right U(t)* - E_right||
  double boost_step = 0;          // the shift-exact t used
  double lightlike_residual = 0;  // ||(1 - E_right) U(s(1,1)) B_right||
  double lightlike_shift = 0;
  double condition_bound = 0;
};
BglReport bgl_report(const RapidityModel& model, double lightlike_shift);

}  // namespace modloc
