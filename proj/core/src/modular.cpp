#include <modloc/modular.hpp>

#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace modloc {

namespace {

using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

MatL apply_i_l(const MatL& cols) {
  const Eigen::Index n = cols.rows() / 2;
  MatL y(cols.rows(), cols.cols());
  y.topRows(n) = -cols.bottomRows(n);
  y.bottomRows(n) = cols.topRows(n);
  return y;
}

}  // namespace

StandardSubspace::StandardSubspace(RealSubspace subspace, double angle_tol)
    : sub_(std::move(subspace)) {
  CoreHull ch = complex_core_hull(sub_, angle_tol);
  if (!ch.standard) throw std::invalid_argument("subspace not standard");
}

ModularData::ModularData(ComplexSpace space, Mat J, Mat delta_eigenvectors,
                         Vec delta_eigenvalues, double condition)
    : space_(space),
      J_(std::move(J)),
      evecs_(std::move(delta_eigenvectors)),
      evals_(std::move(delta_eigenvalues)),
      cond_(condition) {
  const int d = space_.real_dim();
  if (J_.rows() != d || J_.cols() != d || evecs_.rows() != d ||
      evecs_.cols() != d || evals_.size() != d)
    throw std::invalid_argument("modular data has wrong dimensions");
  if (evals_.minCoeff() <= 0)
    throw std::runtime_error("modular spectrum not positive");
  delta_ = evecs_ * evals_.asDiagonal() * evecs_.transpose();
  delta_ = 0.5 * (delta_ + delta_.transpose());

  // Validation tolerances widen with the square of the conditioning past
  // cond = 1e10: the eigensystem of Delta loses digits at that rate, and
  // construction is documented to proceed (with a warning) rather than die.
  const double slack = std::max(1.0, std::pow(cond_ / 1e10, 2));
  const Mat eye = Mat::Identity(d, d);
  if (spectral_norm(J_ * J_ - eye) > 1e-9 * slack ||
      spectral_norm(J_.transpose() * J_ - eye) > 1e-9 * slack)
    throw std::runtime_error("conjugation is not an orthogonal involution");
  RealLinearOperator jop{space_, J_};
  if (!jop.is_antilinear(1e-9 * slack))
    throw std::runtime_error("conjugation does not anticommute with i");
  RealLinearOperator dop{space_, delta_};
  if (!dop.is_complex_linear(1e-9 * slack))
    throw std::runtime_error("modular operator is not complex-linear");
  Mat dinv = delta_power(-1.0);
  if (spectral_norm(J_ * delta_ * J_ - dinv) >
      1e-8 * slack * spectral_norm(dinv))
    throw std::runtime_error("modular pair fails J Delta J = Delta^{-1}");
}

Mat ModularData::delta_power(double s) const {
  Vec powered(evals_.size());
  for (Eigen::Index k = 0; k < evals_.size(); ++k)
    powered(k) = std::pow(evals_(k), s);
  return evecs_ * powered.asDiagonal() * evecs_.transpose();
}

Mat ModularData::delta_it(double t) const {
  Vec c(evals_.size()), s(evals_.size());
  for (Eigen::Index k = 0; k < evals_.size(); ++k) {
    const double phase = t * std::log(evals_(k));
    c(k) = std::cos(phase);
    s(k) = std::sin(phase);
  }
  Mat re = evecs_ * c.asDiagonal() * evecs_.transpose();
  Mat im = evecs_ * s.asDiagonal() * evecs_.transpose();
  return re + space_.apply_i(im);
}

Mat ModularData::apply_S(const Mat& cols) const {
  Vec root(evals_.size());
  for (Eigen::Index k = 0; k < evals_.size(); ++k)
    root(k) = std::sqrt(evals_(k));
  return J_ * (evecs_ * (root.asDiagonal() *
                         (evecs_.transpose() * cols)));
}

ModularData modular_data(const StandardSubspace& H, WarningSink warn) {
  const ComplexSpace& sp = H.space();
  const int n = sp.complex_dim();
  const int d = 2 * n;
  MatL B = H.subspace().basis().cast<long double>();
  MatL iB = apply_i_l(B);

  MatL A(d, d), T(d, d);
  A << B, iB;
  T << B, -iB;

  Eigen::JacobiSVD<MatL> asvd(A);
  const long double smax = asvd.singularValues()(0);
  const long double smin = asvd.singularValues()(d - 1);
  // S = T A^{-1} with kappa(T) = kappa(A), so kappa(S) = kappa(A)^2.
  const long double cond_a = smax / smin;
  const double cond = static_cast<double>(cond_a * cond_a);
  if (cond > 1e12) {
    std::ostringstream os;
    os << "modular operator S is ill-conditioned: cond = " << cond;
    if (warn)
      warn(os.str());
    else
      std::cerr << "warning: " << os.str() << "\n";
  }

  // S A = T, solved as A^T S^T = T^T
  MatL S = A.transpose().fullPivLu().solve(T.transpose()).transpose();

  MatL delta = S.transpose() * S;
  delta = 0.5L * (delta + delta.transpose());
  // project onto the complex-linear part (iMi = -M); exact for the true Delta
  delta = 0.5L * (delta + apply_i_l(apply_i_l(delta.transpose()).transpose()));
  delta = 0.5L * (delta + delta.transpose());

  Eigen::SelfAdjointEigenSolver<MatL> es(delta);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("modular eigendecomposition failed");
  VecL evals = es.eigenvalues();
  MatL V = es.eigenvectors();
  // The true spectrum comes in reciprocal pairs {lambda, 1/lambda}.  The
  // upper half is computed accurately even when the lower half sits below
  // roundoff (it can even come out negative there), so rebuild the lower
  // half from the upper.  Eigenvalues arrive in ascending order.
  for (int k = 0; k < d / 2; ++k) evals(k) = 1.0L / evals(d - 1 - k);
  if (evals.minCoeff() <= 0)
    throw std::runtime_error("modular spectrum not positive");

  VecL isqrt(d);
  for (int k = 0; k < d; ++k) isqrt(k) = 1.0L / std::sqrt(evals(k));
  MatL J = S * (V * isqrt.asDiagonal() * V.transpose());

  // The true conjugation is antilinear, symmetric and involutive; project
  // the computed one onto that structure so the rounded-double operator
  // satisfies the identities exactly at working precision.
  J = 0.5L * (J - apply_i_l(apply_i_l(J.transpose()).transpose()));
  J = 0.5L * (J + J.transpose());
  Eigen::SelfAdjointEigenSolver<MatL> js(J);
  MatL sign = MatL::Zero(d, d);
  {
    VecL jev = js.eigenvalues();
    VecL signs(d);
    for (int k = 0; k < d; ++k) signs(k) = jev(k) >= 0 ? 1.0L : -1.0L;
    sign = js.eigenvectors() * signs.asDiagonal() *
           js.eigenvectors().transpose();
  }
  J = 0.5L * (sign + sign.transpose());

  // fixed-space sanity: S must hold H pointwise.  Attainable accuracy
  // degrades with the conditioning, so the gate loosens past cond = 1e10;
  // the warning above is the user-facing signal in that regime.
  {
    VecL sqrtv(d);
    for (int k = 0; k < d; ++k) sqrtv(k) = std::sqrt(evals(k));
    MatL SB = J * (V * (sqrtv.asDiagonal() * (V.transpose() * B)));
    const double slack = std::max(1.0, std::pow(cond / 1e10, 2));
    if ((SB - B).cwiseAbs().maxCoeff() > 1e-8 * slack)
      throw std::runtime_error("modular fixed space mismatch");
  }

  return ModularData(sp, J.cast<double>(), V.cast<double>(),
                     evals.cast<double>(), cond);
}

RealProjection projection_from_modular(const ModularData& md) {
  const int d = md.space().real_dim();
  Mat S = md.apply_S(Mat::Identity(d, d));
  Mat M = Mat::Identity(d, d) + S;
  Mat onePlusDelta = Mat::Identity(d, d) + md.delta();
  Mat E = onePlusDelta.transpose()
              .llt()
              .solve(M.transpose())
              .transpose();  // E = M (1 + Delta)^{-1}
  // E is idempotent with singular values split at {0, 1}
  return RealProjection(RealSubspace(md.space(), orthonormal_span(E, 0.5)));
}

ModularData covariance_transport(const ModularData& md, const Mat& U,
                                 double tol) {
  const int d = md.space().real_dim();
  if (U.rows() != d || U.cols() != d)
    throw std::invalid_argument("transport operator has wrong dimensions");
  if (spectral_norm(U.transpose() * U - Mat::Identity(d, d)) > tol)
    throw std::invalid_argument("transport operator is not orthogonal");
  RealLinearOperator uop{md.space(), U};
  if (!uop.is_complex_linear(1e-10) && !uop.is_antilinear(1e-10))
    throw std::invalid_argument(
        "transport operator must be complex-linear or antilinear");
  // U V diagonalizes U Delta U^T in both the linear and antilinear case
  return ModularData(md.space(), U * md.J() * U.transpose(),
                     U * md.delta_eigenvectors(), md.delta_eigenvalues(),
                     md.condition());
}

double defect_norm(const RealProjection& E, const RealProjection& F) {
  RealProjection j = join(E, F);
  if (j.rank() == 0) return 0.0;
  const Mat& bj = j.basis();
  Mat ce = bj.transpose() * E.basis();
  Mat cf = bj.transpose() * F.basis();
  Mat xr = ce * ce.transpose() + cf * cf.transpose() -
           Mat::Identity(j.rank(), j.rank());
  return sym_spectral_norm(xr);
}

std::array<RealProjection, 5> halmos_decompose(const RealProjection& E,
                                               const RealProjection& F,
                                               double angle_tol) {
  RealProjection fperp = real_orthocomplement(F);
  RealProjection eperp = real_orthocomplement(E);
  RealProjection both = meet(E, F, angle_tol);
  RealProjection eonly = meet(E, fperp, angle_tol);
  RealProjection fonly = meet(eperp, F, angle_tol);
  RealProjection neither = real_orthocomplement(join(E, F));
  Mat stacked(E.space().real_dim(), both.rank() + eonly.rank() +
                                        fonly.rank() + neither.rank());
  stacked << both.basis(), eonly.basis(), fonly.basis(), neither.basis();
  RealProjection generic = RealProjection(RealSubspace(
      E.space(), orthogonal_complement(orthonormal_span(stacked),
                                       E.space().real_dim())));
  return {both, eonly, fonly, neither, generic};
}

DefectReport defect_operator(const RealProjection& E,
                             const RealProjection& F) {
  RealProjection j = join(E, F);
  Mat X = E.matrix() + F.matrix() - j.matrix();
  DefectReport rep{RealLinearOperator{E.space(), std::move(X)},
                   0.0,
                   cross_norm(E, F),
                   halmos_decompose(E, F)};
  rep.norm_X = sym_spectral_norm(rep.X.matrix);
  return rep;
}

SpectralUnitaryFamily::SpectralUnitaryFamily(ComplexSpace space,
                                             const Mat& generator, double tol)
    : space_(space) {
  const int d = space.real_dim();
  if (generator.rows() != d || generator.cols() != d)
    throw std::invalid_argument("generator has wrong dimensions");
  const double scale = std::max(1e-300, spectral_norm(generator));
  if (spectral_norm(generator - generator.transpose()) > tol * scale)
    throw std::invalid_argument("generator must be symmetric");
  RealLinearOperator gop{space, generator};
  if (!gop.is_complex_linear(tol))
    throw std::invalid_argument("generator must be complex-linear");
  CMat qc = space.extract_cols(generator).leftCols(space.complex_dim());
  // complex-linear real-symmetric => hermitian in the complex picture
  Eigen::SelfAdjointEigenSolver<CMat> es(qc);
  evecs_ = es.eigenvectors();
  evals_ = es.eigenvalues();
}

Mat SpectralUnitaryFamily::apply(double t, const Mat& cols) const {
  CMat z = space_.extract_cols(cols);
  CMat w = evecs_.adjoint() * z;
  for (Eigen::Index k = 0; k < evals_.size(); ++k)
    w.row(k) *= std::complex<double>(std::cos(t * evals_(k)),
                                     std::sin(t * evals_(k)));
  return space_.embed_cols(evecs_ * w);
}

double SpectralUnitaryFamily::spectrum_min() const { return evals_.minCoeff(); }

ClusterReport cluster_check(const RealProjection& E, const RealProjection& F,
                            const UnitaryFamily& V, double mass, double delta,
                            ClusterOptions opts) {
  if (V.spectrum_min() < mass - 1e-9)
    throw std::invalid_argument("mass gap violated");
  if (delta < 0) throw std::invalid_argument("delta must be nonnegative");

  ClusterReport rep;
  rep.mass = mass;
  rep.delta = delta;
  rep.spectrum_min = V.spectrum_min();
  rep.bound = std::exp(-mass * delta);

  const int samples = delta == 0 ? 1 : std::max(2, opts.premise_samples);
  for (int k = 0; k < samples; ++k) {
    const double t =
        samples == 1 ? 0.0 : -delta + 2.0 * delta * k / (samples - 1);
    Mat moved = V.apply(t, F.basis());
    const double r =
        spectral_norm(E.basis().transpose() * E.space().apply_i(moved));
    rep.ts.push_back(t);
    rep.premise_residuals.push_back(r);
    rep.premise_worst = std::max(rep.premise_worst, r);
  }
  rep.premise_ok = rep.premise_worst <= opts.tol_premise;

  rep.norm_EF = cross_norm(E, F);
  rep.norm_X = defect_norm(E, F);
  rep.decay_ok = rep.norm_EF <= rep.bound + opts.slack;
  rep.meet_trivial =
      intersection_basis(E.basis(), F.basis(), E.space().real_dim(),
                         opts.meet_tol)
          .cols() == 0;
  return rep;
}

}  // namespace modloc
