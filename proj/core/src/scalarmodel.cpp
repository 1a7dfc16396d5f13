#include <modloc/scalarmodel.hpp>

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

#include <modloc/linalg.hpp>

namespace modloc {

namespace {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

std::vector<SiteInterval> normalize_parts(std::vector<SiteInterval> parts) {
  for (const SiteInterval& p : parts)
    if (p.hi < p.lo) throw std::invalid_argument("site interval is empty");
  std::sort(parts.begin(), parts.end(),
            [](const SiteInterval& x, const SiteInterval& y) {
              return x.lo < y.lo;
            });
  std::vector<SiteInterval> out;
  for (const SiteInterval& p : parts) {
    if (!out.empty() && p.lo <= out.back().hi + 1)
      out.back().hi = std::max(out.back().hi, p.hi);
    else
      out.push_back(p);
  }
  return out;
}

int checked_site_bounds(const SiteSet& region, int n) {
  for (const SiteInterval& part : region.parts())
    if (part.lo < 0 || part.hi >= n)
      throw std::invalid_argument("site interval outside the lattice");
  return region.count();
}

// Column of the DFT matrix for one site: entries e^{-i p_k x_site}. The
// phase is reduced by integer arithmetic so distinct columns stay
// orthogonal to machine precision regardless of the site index.
CVec dft_column(int n, int site) {
  CVec col(n);
  for (int k = 0; k < n; ++k) {
    const long long alias = k < n / 2 ? k : k - n;
    long long r = (alias * site) % n;
    if (r < 0) r += n;
    col(k) = std::polar(1.0, -2.0 * kPi * static_cast<double>(r) / n);
  }
  return col;
}

void check_state(const PositionModel& model, const CVec& psi) {
  if (psi.size() != model.sites())
    throw std::invalid_argument("state size does not match the lattice");
  if (!psi.allFinite())
    throw std::invalid_argument("state has non-finite entries");
}

double projection_gap(const RealProjection& e, const RealProjection& f) {
  // projections of different rank sit at distance exactly one; equal-rank
  // zero or full pairs are the same projection
  if (e.rank() != f.rank()) return 1.0;
  if (e.rank() == 0 || e.rank() == e.space().real_dim()) return 0.0;
  return std::max(containment_residual(e, f), containment_residual(f, e));
}

}  // namespace

SiteSet::SiteSet(std::initializer_list<SiteInterval> parts)
    : parts_(normalize_parts(std::vector<SiteInterval>(parts))) {}

SiteSet::SiteSet(std::vector<SiteInterval> parts)
    : parts_(normalize_parts(std::move(parts))) {}

SiteSet SiteSet::interval(int lo, int hi) { return SiteSet({{lo, hi}}); }

int SiteSet::count() const noexcept {
  int total = 0;
  for (const SiteInterval& p : parts_) total += p.hi - p.lo + 1;
  return total;
}

int SiteSet::min_site() const {
  if (parts_.empty()) throw std::invalid_argument("empty site set");
  return parts_.front().lo;
}

int SiteSet::max_site() const {
  if (parts_.empty()) throw std::invalid_argument("empty site set");
  return parts_.back().hi;
}

bool SiteSet::contains(int site) const noexcept {
  for (const SiteInterval& p : parts_)
    if (p.lo <= site && site <= p.hi) return true;
  return false;
}

std::vector<int> SiteSet::sites() const {
  std::vector<int> out;
  out.reserve(count());
  for (const SiteInterval& p : parts_)
    for (int j = p.lo; j <= p.hi; ++j) out.push_back(j);
  return out;
}

SiteSet SiteSet::unite(const SiteSet& other) const {
  std::vector<SiteInterval> parts = parts_;
  parts.insert(parts.end(), other.parts_.begin(), other.parts_.end());
  return SiteSet(std::move(parts));
}

SiteSet SiteSet::complement(int n_sites) const {
  if (!parts_.empty() && (parts_.front().lo < 0 || parts_.back().hi >= n_sites))
    throw std::invalid_argument("site interval outside the lattice");
  std::vector<SiteInterval> out;
  int next = 0;
  for (const SiteInterval& p : parts_) {
    if (p.lo > next) out.push_back({next, p.lo - 1});
    next = p.hi + 1;
  }
  if (next <= n_sites - 1) out.push_back({next, n_sites - 1});
  return SiteSet(std::move(out));
}

SiteSet SiteSet::shifted(int step, int n_sites) const {
  std::vector<SiteInterval> out;
  for (int j : sites()) {
    int s = (j + step) % n_sites;
    if (s < 0) s += n_sites;
    out.push_back({s, s});
  }
  return SiteSet(std::move(out));
}

SiteSet SiteSet::dilated(int r, int n_sites) const {
  if (r < 0) throw std::invalid_argument("dilation radius must be nonnegative");
  std::vector<SiteInterval> out;
  for (const SiteInterval& p : parts_) {
    if (p.lo - r < 0 || p.hi + r >= n_sites)
      throw std::invalid_argument("enlarged region wraps the periodic box");
    out.push_back({p.lo - r, p.hi + r});
  }
  return SiteSet(std::move(out));
}

struct Fft::Impl {
  int n = 0;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

namespace {
// FFTW plan creation and destruction are not thread-safe; execution on
// distinct buffers is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
}  // namespace

Fft::Fft(int n) : impl_(std::make_unique<Impl>()) {
  if (n < 1) throw std::invalid_argument("transform size must be positive");
  impl_->n = n;
  CVec a = CVec::Zero(n), b = CVec::Zero(n);
  std::lock_guard<std::mutex> lock(plan_mutex());
  impl_->fwd = fftw_plan_dft_1d(n, as_fftw(a.data()), as_fftw(b.data()),
                                FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  impl_->bwd = fftw_plan_dft_1d(n, as_fftw(a.data()), as_fftw(b.data()),
                                FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!impl_->fwd || !impl_->bwd)
    throw std::runtime_error("failed to plan the transform");
}

Fft::~Fft() {
  if (!impl_) return;
  std::lock_guard<std::mutex> lock(plan_mutex());
  if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
  if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
}

int Fft::size() const noexcept { return impl_->n; }

CVec Fft::forward(const CVec& in) const {
  if (in.size() != impl_->n)
    throw std::invalid_argument("transform input has the wrong size");
  CVec src = in, out(impl_->n);
  fftw_execute_dft(impl_->fwd, as_fftw(src.data()), as_fftw(out.data()));
  return out;
}

CVec Fft::backward(const CVec& in) const {
  if (in.size() != impl_->n)
    throw std::invalid_argument("transform input has the wrong size");
  CVec src = in, out(impl_->n);
  fftw_execute_dft(impl_->bwd, as_fftw(src.data()), as_fftw(out.data()));
  return out;
}

PositionModel::PositionModel(int n_sites, double spacing, double mass)
    : n_(n_sites), a_(spacing), m_(mass) {
  if (n_ < 2 || (n_ & (n_ - 1)) != 0)
    throw std::invalid_argument("site count must be a power of two");
  if (!(a_ > 0))
    throw std::invalid_argument("lattice spacing must be positive");
  if (!(m_ > 0)) throw std::invalid_argument("mass must be positive");
  p_.resize(n_);
  omega_.resize(n_);
  w_.resize(n_);
  sqrt_w_.resize(n_);
  for (int k = 0; k < n_; ++k) {
    const int alias = k < n_ / 2 ? k : k - n_;
    p_(k) = 2.0 * kPi * alias / (n_ * a_);
    omega_(k) = std::sqrt(m_ * m_ + p_(k) * p_(k));
    w_(k) = a_ / (n_ * omega_(k));
    sqrt_w_(k) = std::sqrt(w_(k));
  }
  fft_ = std::make_shared<Fft>(n_);
}

std::complex<double> PositionModel::inner(const CVec& psi,
                                          const CVec& phi) const {
  check_state(*this, psi);
  check_state(*this, phi);
  return (psi.conjugate().array() * phi.array() * w_.array().cast<cplx>())
      .sum();
}

double PositionModel::norm(const CVec& psi) const {
  check_state(*this, psi);
  return std::sqrt((psi.array().abs2() * w_.array()).sum());
}

CVec PositionModel::to_canonical(const CVec& psi) const {
  check_state(*this, psi);
  return psi.array() * sqrt_w_.array().cast<cplx>();
}

CVec PositionModel::from_canonical(const CVec& chi) const {
  check_state(*this, chi);
  return chi.array() / sqrt_w_.array().cast<cplx>();
}

CVec PositionModel::momentum_from_position(const CVec& f) const {
  check_state(*this, f);
  return a_ * fft_->forward(f);
}

CVec PositionModel::position_from_momentum(const CVec& psi) const {
  check_state(*this, psi);
  return fft_->backward(psi) / (n_ * a_);
}

LatticeSymmetry compose(const LatticeSymmetry& g, const LatticeSymmetry& h) {
  LatticeSymmetry out;
  out.time_reflect = g.time_reflect != h.time_reflect;
  out.parity = g.parity != h.parity;
  // pulling the rapidity of g past the reflections of h flips its sign once
  // per reflection
  const double flip = (h.time_reflect != h.parity) ? -1.0 : 1.0;
  out.rapidity = flip * g.rapidity + h.rapidity;
  const double c = std::cosh(g.rapidity), s = std::sinh(g.rapidity);
  double y0 = c * h.x0 + s * h.x1;
  double y1 = s * h.x0 + c * h.x1;
  if (g.time_reflect) y0 = -y0;
  if (g.parity) y1 = -y1;
  out.x0 = g.x0 + y0;
  out.x1 = g.x1 + y1;
  return out;
}

CVec apply_symmetry(const PositionModel& model, const CVec& psi,
                    const LatticeSymmetry& g) {
  check_state(model, psi);
  if (g.rapidity != 0.0)
    throw std::invalid_argument("boost requires rapidity model");
  const int n = model.sites();
  CVec out = psi;
  if (g.parity != g.time_reflect) {
    CVec r(n);
    for (int k = 0; k < n; ++k) r(k) = out((n - k) % n);
    out.swap(r);
  }
  if (g.time_reflect) out = out.conjugate();
  if (g.x0 != 0.0 || g.x1 != 0.0) {
    for (int k = 0; k < n; ++k)
      out(k) *= std::polar(1.0, g.x0 * model.omega()(k) -
                                    g.x1 * model.momenta()(k));
  }
  return out;
}

CauchyPair cauchy_split(const PositionModel& model, const CVec& psi) {
  LatticeSymmetry t;
  t.time_reflect = true;
  const CVec tpsi = apply_symmetry(model, psi, t);
  CauchyPair out;
  out.plus = 0.5 * (psi + tpsi);
  out.minus = ((psi - tpsi).array() /
               (cplx(0.0, 2.0) * model.omega().array().cast<cplx>()))
                  .matrix();
  return out;
}

CVec state_from_cauchy(const PositionModel& model, const Vec& phi,
                       const Vec& pi) {
  if (phi.size() != model.sites() || pi.size() != model.sites())
    throw std::invalid_argument("state size does not match the lattice");
  const CVec fphi = model.momentum_from_position(phi.cast<cplx>());
  const CVec fpi = model.momentum_from_position(pi.cast<cplx>());
  return fphi.array() +
         cplx(0.0, 1.0) * model.omega().array().cast<cplx>() * fpi.array();
}

RealProjection local_subspace(const PositionModel& model,
                              const SiteSet& region) {
  const int n = model.sites();
  const int cnt = checked_site_bounds(region, n);
  const ComplexSpace space = model.space();
  if (cnt == 0 || cnt == n)
    throw std::invalid_argument(
        "localization region must be a nonempty proper subset of the "
        "lattice");
  const std::vector<int> xs = region.sites();
  Mat spans(2 * n, 2 * cnt);
  for (int i = 0; i < cnt; ++i) {
    const CVec base = dft_column(n, xs[i]);
    CVec u(n), v(n);
    for (int k = 0; k < n; ++k) {
      const double s = model.spacing() * std::sqrt(model.weights()(k));
      u(k) = s * base(k);
      v(k) = cplx(0.0, s * model.omega()(k)) * base(k);
    }
    spans.col(2 * i) = space.embed(u) / u.norm();
    spans.col(2 * i + 1) = space.embed(v) / v.norm();
  }
  RealProjection proj = projector_from_span(space, spans);
  if (proj.rank() != 2 * cnt)
    throw std::runtime_error("local subspace rank collapsed");
  return proj;
}

RealProjection nw_projection(const PositionModel& model,
                             const SiteSet& region) {
  const int n = model.sites();
  const int cnt = checked_site_bounds(region, n);
  const ComplexSpace space = model.space();
  if (cnt == 0) return RealProjection::zero(space);
  if (cnt == n) return RealProjection::identity(space);
  const std::vector<int> xs = region.sites();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Mat basis(2 * n, 2 * cnt);
  for (int i = 0; i < cnt; ++i) {
    const CVec u = scale * dft_column(n, xs[i]);
    basis.col(2 * i) = space.embed(u);
    basis.col(2 * i + 1) = space.embed((cplx(0.0, 1.0) * u.array()).matrix());
  }
  return RealProjection(RealSubspace(space, std::move(basis)));
}

Vec nw_position_density(const PositionModel& model, const CVec& psi) {
  const CVec chi = model.to_canonical(psi);
  const CVec raw = model.fft().backward(chi);
  return raw.array().abs2() / model.sites();
}

double commutator_function(const PositionModel& model, const Vec& f1,
                           const Vec& f2, double x0, double x1) {
  if (f1.size() != model.sites() || f2.size() != model.sites())
    throw std::invalid_argument("state size does not match the lattice");
  const CVec t1 = model.momentum_from_position(f1.cast<cplx>());
  const CVec t2 = model.momentum_from_position(f2.cast<cplx>());
  cplx acc = 0;
  for (int k = 0; k < model.sites(); ++k) {
    const cplx phase = std::polar(
        1.0, x0 * model.omega()(k) - x1 * model.momenta()(k));
    acc += std::conj(t1(k)) * phase * t2(k) * model.weights()(k);
  }
  return acc.imag();
}

double fuzzy_measure(const PositionModel& model, const CVec& psi,
                     const RealProjection& localized) {
  if (std::abs(model.norm(psi) - 1.0) > 1e-10)
    throw std::invalid_argument("state is not normalized");
  const Vec x = model.space().embed(model.to_canonical(psi));
  if (localized.rank() == 0) return 0.0;
  return (localized.basis().transpose() * x).squaredNorm();
}

double fuzzy_measure(const PositionModel& model, const CVec& psi,
                     const SiteSet& region) {
  return fuzzy_measure(model, psi, local_subspace(model, region));
}

double propagation_check(const PositionModel& model, const SiteSet& region,
                         double t, double delta) {
  const int n = model.sites();
  checked_site_bounds(region, n);
  if (!(delta >= 0))
    throw std::invalid_argument("margin must be nonnegative");
  const int radius = static_cast<int>(
      std::floor((std::abs(t) + delta) / model.spacing() + 1e-12));
  const SiteSet grown = region.dilated(radius, n);
  const RealProjection start = local_subspace(model, region);
  if (start.rank() == 0) return 0.0;
  const RealProjection target = local_subspace(model, grown);
  const ComplexSpace space = model.space();
  CMat cols = space.extract_cols(start.basis());
  for (int k = 0; k < n; ++k)
    cols.row(k) *= std::polar(1.0, t * model.omega()(k));
  const Mat moved = space.embed_cols(cols);
  return spectral_norm(moved -
                       target.basis() * (target.basis().transpose() * moved));
}

std::vector<double> nw_incompatibility(const PositionModel& model,
                                       const SiteSet& a, const SiteSet& b,
                                       int n_iter) {
  if (n_iter < 1)
    throw std::invalid_argument("iteration count must be positive");
  if (a.empty() || b.empty())
    throw std::invalid_argument("regions must be nonempty");
  const RealProjection e = local_subspace(model, a);
  const RealProjection p = nw_projection(model, b);
  double sigma = 0;
  if (e.rank() > 0 && p.rank() > 0)
    sigma = spectral_norm(e.basis().transpose() * p.basis());
  std::vector<double> trace(n_iter);
  double value = sigma;
  const double square = sigma * sigma;
  for (int i = 0; i < n_iter; ++i) {
    trace[i] = value;
    value *= square;
  }
  return trace;
}

double site_distance(const PositionModel& model, const SiteSet& a,
                     const SiteSet& b) {
  const int n = model.sites();
  checked_site_bounds(a, n);
  checked_site_bounds(b, n);
  if (a.empty() || b.empty())
    throw std::invalid_argument("distance needs nonempty regions");
  long best = n;
  for (const SiteInterval& pa : a.parts()) {
    for (const SiteInterval& pb : b.parts()) {
      if (pa.lo <= pb.hi && pb.lo <= pa.hi) return 0.0;
      const long g1 = ((pb.lo - pa.hi) % n + n) % n;
      const long g2 = ((pa.lo - pb.hi) % n + n) % n;
      best = std::min(best, std::min(g1, g2));
    }
  }
  return model.spacing() * static_cast<double>(std::max<long>(0, best - 1));
}

SpatialInterval physical_interval(const PositionModel& model,
                                  const SiteInterval& part) {
  return {model.spacing() * (part.lo - 0.5), model.spacing() * (part.hi + 0.5)};
}

CausalRegion completion_of(const PositionModel& model, const SiteSet& region) {
  checked_site_bounds(region, model.sites());
  if (region.empty()) return CausalRegion::empty();
  std::vector<SpatialInterval> intervals;
  intervals.reserve(region.parts().size());
  for (const SiteInterval& part : region.parts())
    intervals.push_back(physical_interval(model, part));
  return spatial_completion(intervals);
}

Vec bump_vector(const PositionModel& model, int lo, int hi) {
  const int n = model.sites();
  if (lo < 0 || hi >= n || hi - lo < 2)
    throw std::invalid_argument("bump support needs at least three sites");
  Vec f = Vec::Zero(n);
  for (int j = lo + 1; j < hi; ++j) {
    const double u = -1.0 + 2.0 * (j - lo) / (hi - lo);
    f(j) = std::exp(-1.0 / (1.0 - u * u));
  }
  return f;
}

CVec gaussian_packet(const PositionModel& model, double xbar, double p0,
                     double sigma_x) {
  if (!(sigma_x > 0))
    throw std::invalid_argument("packet width must be positive");
  const int n = model.sites();
  CVec psi(n);
  for (int k = 0; k < n; ++k) {
    const double dp = model.momenta()(k) - p0;
    psi(k) = std::polar(std::exp(-0.5 * sigma_x * sigma_x * dp * dp),
                        -model.momenta()(k) * xbar);
  }
  return psi / model.norm(psi);
}

TimeTranslationFamily::TimeTranslationFamily(const PositionModel& model)
    : space_(model.space()), omega_(model.omega()), mass_(model.mass()) {}

Mat TimeTranslationFamily::apply(double t, const Mat& cols) const {
  CMat z = space_.extract_cols(cols);
  for (int k = 0; k < omega_.size(); ++k)
    z.row(k) *= std::polar(1.0, t * omega_(k));
  return space_.embed_cols(z);
}

double ObservableAudit::worst() const {
  double w = std::max(normalization, additivity);
  w = std::max(w, separation);
  w = std::max(w, covariance);
  return std::max(w, complement_duality);
}

ObservableAudit observable_audit(const PositionModel& model,
                                 const std::vector<SiteSet>& family) {
  const int n = model.sites();
  ObservableAudit report;
  // normalization via a partition: local data of A and its complement span
  // everything, so their join must be the identity (rank says it all: a
  // projection of full rank is 1)
  {
    const SiteSet half = SiteSet::interval(0, n / 2 - 1);
    const RealProjection ea = local_subspace(model, half);
    const RealProjection eac = local_subspace(model, half.complement(n));
    report.normalization = join(ea, eac).rank() == 2 * n ? 0.0 : 1.0;
  }

  std::vector<RealProjection> proj;
  std::vector<CausalRegion> regions;
  proj.reserve(family.size());
  regions.reserve(family.size());
  for (const SiteSet& a : family) {
    proj.push_back(local_subspace(model, a));
    regions.push_back(completion_of(model, a));
  }

  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      const bool sep_regions = region_separated(regions[i], regions[j]);
      const bool sep_sympl = is_separated(proj[i], proj[j]);
      if (sep_regions != sep_sympl) report.separation_agrees = false;
      if (sep_regions) {
        ++report.separated_pairs;
        report.separation =
            std::max(report.separation, separation_norm(proj[i], proj[j]));
        const RealProjection joined = join(proj[i], proj[j]);
        const RealProjection direct =
            local_subspace(model, family[i].unite(family[j]));
        report.additivity =
            std::max(report.additivity, projection_gap(joined, direct));
      }
      // E(A) <= E(A^c)' has residual ||(1 - E(A^c)') B_A|| = ||E(A^c) i E(A)||
      // because the range of 1 - E' is i times the range of E
      if (family[j] == family[i].complement(n) ||
          family[i] == family[j].complement(n))
        report.complement_duality = std::max(
            report.complement_duality, separation_norm(proj[i], proj[j]));
    }
  }

  const ComplexSpace space = model.space();
  const int shifts[] = {1, n / 8 + 1, n / 3 + 2};
  for (std::size_t i = 0; i < family.size(); ++i) {
    const int cnt = family[i].count();
    if (cnt == 0 || cnt == n) continue;
    // gaps are invariant under the complement and translation commutes with
    // it, so a member covering most of the box is audited through its small
    // partner instead of hauling a near-full-rank basis around
    const bool big = 2 * cnt > n;
    const SiteSet probe = big ? family[i].complement(n) : family[i];
    const RealProjection base = big ? local_subspace(model, probe) : proj[i];
    for (int s : shifts) {
      CMat cols = space.extract_cols(base.basis());
      for (int k = 0; k < n; ++k)
        cols.row(k) *=
            std::polar(1.0, -s * model.spacing() * model.momenta()(k));
      const RealProjection moved(
          RealSubspace(space, space.embed_cols(cols)));
      const RealProjection target =
          local_subspace(model, probe.shifted(s, n));
      report.covariance =
          std::max(report.covariance, projection_gap(moved, target));
    }
  }
  return report;
}

RapidityModel::RapidityModel(int grid_size, double theta_max, double mass,
                             int mode_cutoff)
    : m_grid_(grid_size), theta_(theta_max), mass_(mass), kappa_(mode_cutoff) {
  if (m_grid_ < 2)
    throw std::invalid_argument("rapidity grid needs at least two points");
  if (!(theta_ > 0))
    throw std::invalid_argument("rapidity range must be positive");
  if (!(mass_ > 0)) throw std::invalid_argument("mass must be positive");
  if (kappa_ < 0)
    throw std::invalid_argument("mode cutoff must be nonnegative");
  if (2 * kappa_ + 1 > m_grid_)
    throw std::invalid_argument("mode cutoff exceeds the rapidity grid");
  if (condition_bound() > 1e12)
    throw std::invalid_argument(
        "boost kernel condition exceeds 1e12; largest usable mode cutoff "
        "here is " +
        std::to_string(max_mode_cutoff(theta_)));
  theta_grid_.resize(m_grid_);
  for (int j = 0; j < m_grid_; ++j) theta_grid_(j) = -theta_ + j * dtheta();
  nu_.resize(mode_count());
  for (int i = 0; i < mode_count(); ++i)
    nu_(i) = kPi * (i - kappa_) / theta_;
  fft_ = std::make_shared<Fft>(m_grid_);
}

double RapidityModel::condition_bound() const noexcept {
  return std::exp(2.0 * kPi * kPi * kappa_ / theta_);
}

int RapidityModel::max_mode_cutoff(double theta_max) {
  return static_cast<int>(
      std::floor(theta_max * std::log(1e12) / (2.0 * kPi * kPi)));
}

std::complex<double> RapidityModel::inner(const CVec& f, const CVec& g) const {
  if (f.size() != m_grid_ || g.size() != m_grid_)
    throw std::invalid_argument("state size does not match the grid");
  return dtheta() * (f.conjugate().array() * g.array()).sum();
}

CVec RapidityModel::grid_from_modes(const CVec& modes) const {
  if (modes.size() != mode_count())
    throw std::invalid_argument("mode vector has the wrong size");
  const double scale = 1.0 / std::sqrt(static_cast<double>(m_grid_));
  CVec f = CVec::Zero(m_grid_);
  for (int i = 0; i < mode_count(); ++i)
    for (int j = 0; j < m_grid_; ++j)
      f(j) += modes(i) * std::polar(scale, theta_grid_(j) * nu_(i));
  return f;
}

CVec RapidityModel::modes_from_grid(const CVec& f) const {
  if (f.size() != m_grid_)
    throw std::invalid_argument("state size does not match the grid");
  const double scale = 1.0 / std::sqrt(static_cast<double>(m_grid_));
  CVec modes = CVec::Zero(mode_count());
  for (int i = 0; i < mode_count(); ++i)
    for (int j = 0; j < m_grid_; ++j)
      modes(i) += std::polar(scale, -theta_grid_(j) * nu_(i)) * f(j);
  return modes;
}

CMat RapidityModel::compress_diagonal(const CVec& grid_multiplier) const {
  if (grid_multiplier.size() != m_grid_)
    throw std::invalid_argument("multiplier size does not match the grid");
  const int d = mode_count();
  CMat out = CMat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int i2 = 0; i2 < d; ++i2) {
      cplx acc = 0;
      for (int j = 0; j < m_grid_; ++j)
        acc += std::polar(1.0, theta_grid_(j) * (nu_(i2) - nu_(i))) *
               grid_multiplier(j);
      out(i, i2) = acc / static_cast<double>(m_grid_);
    }
  return out;
}

CVec RapidityModel::translation_multiplier(double x0, double x1) const {
  CVec mult(m_grid_);
  for (int j = 0; j < m_grid_; ++j) {
    const double omega = mass_ * std::cosh(theta_grid_(j));
    const double p = mass_ * std::sinh(theta_grid_(j));
    mult(j) = std::polar(1.0, x0 * omega - x1 * p);
  }
  return mult;
}

CVec RapidityModel::apply_symmetry_grid(const CVec& f,
                                        const LatticeSymmetry& g) const {
  if (f.size() != m_grid_)
    throw std::invalid_argument("state size does not match the grid");
  CVec out = f;
  if (g.parity != g.time_reflect) {
    CVec r(m_grid_);
    for (int j = 0; j < m_grid_; ++j) r(j) = out((m_grid_ - j) % m_grid_);
    out.swap(r);
  }
  if (g.time_reflect) out = out.conjugate();
  if (g.rapidity != 0.0) {
    const double steps = g.rapidity / dtheta();
    const double nearest = std::round(steps);
    if (std::abs(steps - nearest) <= 1e-9 * std::max(1.0, std::abs(steps))) {
      // exact cyclic shift: (U(t) f)(theta) = f(theta - t)
      const int s = static_cast<int>(nearest);
      CVec r(m_grid_);
      for (int j = 0; j < m_grid_; ++j) {
        int src = (j - s) % m_grid_;
        if (src < 0) src += m_grid_;
        r(j) = out(src);
      }
      out.swap(r);
    } else {
      CVec hat = fft_->forward(out);
      for (int k = 0; k < m_grid_; ++k) {
        const int alias = k < m_grid_ / 2 ? k : k - m_grid_;
        hat(k) *= std::polar(1.0, -g.rapidity * kPi * alias / theta_);
      }
      out = fft_->backward(hat) / static_cast<double>(m_grid_);
    }
  }
  if (g.x0 != 0.0 || g.x1 != 0.0)
    out = out.cwiseProduct(translation_multiplier(g.x0, g.x1));
  return out;
}

namespace {

// Real-linear matrix of c -> e^{pi nu} conj(reverse(c)), the product of the
// rapidity conjugation with the wedge reflection multiplier on the modes.
Mat wedge_involution_matrix(const RapidityModel& model) {
  const int d = model.mode_count();
  const ComplexSpace space = model.mode_space();
  Mat t(2 * d, 2 * d);
  for (int col = 0; col < 2 * d; ++col) {
    Vec probe = Vec::Zero(2 * d);
    probe(col) = 1.0;
    const CVec c = space.extract(probe);
    CVec tc(d);
    for (int i = 0; i < d; ++i)
      tc(i) = std::exp(kPi * model.nu()(i)) * std::conj(c(d - 1 - i));
    t.col(col) = space.embed(tc);
  }
  return t;
}

RealProjection parity_conjugate(const RapidityModel& model,
                                const RealProjection& e) {
  const int d = model.mode_count();
  const ComplexSpace space = model.mode_space();
  CMat cols = space.extract_cols(e.basis());
  CMat flipped(d, cols.cols());
  for (int i = 0; i < d; ++i) flipped.row(i) = cols.row(d - 1 - i);
  return RealProjection(RealSubspace(space, space.embed_cols(flipped)));
}

}  // namespace

RealProjection bgl_wedge_space(const RapidityModel& model, Wedge wedge,
                               double x0, double x1) {
  if (model.condition_bound() > 1e12)
    throw std::invalid_argument(
        "boost kernel condition exceeds 1e12; largest usable mode cutoff "
        "here is " +
        std::to_string(RapidityModel::max_mode_cutoff(model.theta_max())));
  const int d = model.mode_count();
  const ComplexSpace space = model.mode_space();
  const Mat half = 0.5 * (Mat::Identity(2 * d, 2 * d) +
                          wedge_involution_matrix(model));
  const Mat basis = orthonormal_span(half, 1e-8);
  if (basis.cols() != d)
    throw std::runtime_error("wedge fixed space rank mismatch");
  RealProjection proj((RealSubspace(space, basis)));
  if (wedge == Wedge::kLeft) proj = parity_conjugate(model, proj);
  if (x0 != 0.0 || x1 != 0.0) {
    const CMat mover =
        model.compress_diagonal(model.translation_multiplier(x0, x1));
    CMat cols = space.extract_cols(proj.basis());
    return projector_from_span(space, space.embed_cols(CMat(mover * cols)));
  }
  return proj;
}

BglReport bgl_report(const RapidityModel& model, double lightlike_shift) {
  BglReport report;
  report.condition_bound = model.condition_bound();
  report.lightlike_shift = lightlike_shift;
  const ComplexSpace space = model.mode_space();
  const RealProjection right = bgl_wedge_space(model, Wedge::kRight);
  const RealProjection left = bgl_wedge_space(model, Wedge::kLeft);
  report.fixed_dim = right.rank();

  report.duality_residual =
      projection_distance(left, symplectic_complement(right));

  // boosts act diagonally on the modes and commute with the involution, so
  // any parameter works; a grid multiple keeps the grid picture exact too
  report.boost_step = 8.0 * model.dtheta();
  CMat boosted = space.extract_cols(right.basis());
  for (int i = 0; i < model.mode_count(); ++i)
    boosted.row(i) *= std::polar(1.0, -model.nu()(i) * report.boost_step);
  const RealProjection moved(
      RealSubspace(space, space.embed_cols(boosted)));
  report.boost_residual = projection_distance(moved, right);

  // null translation x = s (1, 1) multiplies by e^{i s m e^{-theta}} and
  // maps the wedge space into itself for s >= 0
  CVec mult(model.grid_size());
  for (int j = 0; j < model.grid_size(); ++j)
    mult(j) = std::polar(
        1.0, lightlike_shift * model.mass() * std::exp(-model.theta_grid()(j)));
  const CMat mover = model.compress_diagonal(mult);
  CMat cols = space.extract_cols(right.basis());
  const RealProjection translated =
      projector_from_span(space, space.embed_cols(CMat(mover * cols)));
  report.lightlike_residual = containment_residual(right, translated);
  return report;
}

}  // namespace modloc
