#include <modloc/realspace.hpp>

#include <stdexcept>

#include <modloc/numfmt.hpp>

namespace modloc {

ComplexSpace::ComplexSpace(int complex_dim) : n_(complex_dim) {
  if (n_ < 1) throw std::invalid_argument("complex dimension must be positive");
}

Vec ComplexSpace::apply_i(const Vec& x) const {
  Vec y(2 * n_);
  y.head(n_) = -x.tail(n_);
  y.tail(n_) = x.head(n_);
  return y;
}

Mat ComplexSpace::apply_i(const Mat& cols) const {
  Mat y(2 * n_, cols.cols());
  y.topRows(n_) = -cols.bottomRows(n_);
  y.bottomRows(n_) = cols.topRows(n_);
  return y;
}

Mat ComplexSpace::i_matrix() const {
  Mat m = Mat::Zero(2 * n_, 2 * n_);
  m.topRightCorner(n_, n_) = -Mat::Identity(n_, n_);
  m.bottomLeftCorner(n_, n_) = Mat::Identity(n_, n_);
  return m;
}

Vec ComplexSpace::embed(const CVec& z) const {
  Vec x(2 * n_);
  x.head(n_) = z.real();
  x.tail(n_) = z.imag();
  return x;
}

CVec ComplexSpace::extract(const Vec& x) const {
  CVec z(n_);
  z.real() = x.head(n_);
  z.imag() = x.tail(n_);
  return z;
}

Mat ComplexSpace::embed_cols(const CMat& z) const {
  Mat x(2 * n_, z.cols());
  x.topRows(n_) = z.real();
  x.bottomRows(n_) = z.imag();
  return x;
}

CMat ComplexSpace::extract_cols(const Mat& x) const {
  CMat z(n_, x.cols());
  z.real() = x.topRows(n_);
  z.imag() = x.bottomRows(n_);
  return z;
}

RealSubspace::RealSubspace(ComplexSpace space, Mat orthonormal_basis)
    : space_(space), basis_(std::move(orthonormal_basis)) {
  if (basis_.rows() != space_.real_dim())
    throw std::invalid_argument("basis row count does not match the space");
  if (basis_.cols() > 0) {
    Mat gram = basis_.transpose() * basis_;
    gram -= Mat::Identity(basis_.cols(), basis_.cols());
    if (gram.cwiseAbs().maxCoeff() > 1e-10)
      throw std::invalid_argument("basis is not orthonormal");
  }
}

RealSubspace RealSubspace::zero(ComplexSpace space) {
  return RealSubspace(space, Mat(space.real_dim(), 0));
}

RealSubspace RealSubspace::full(ComplexSpace space) {
  return RealSubspace(space, Mat::Identity(space.real_dim(), space.real_dim()));
}

RealSubspace RealSubspace::span(ComplexSpace space, const Mat& vectors,
                                double rel_tol) {
  Mat b = orthonormal_span(vectors, rel_tol);
  if (b.cols() == 0) throw std::invalid_argument("empty span");
  return RealSubspace(space, std::move(b));
}

RealProjection::RealProjection(RealSubspace subspace)
    : sub_(std::move(subspace)) {}

RealProjection RealProjection::zero(ComplexSpace space) {
  return RealProjection(RealSubspace::zero(space));
}

RealProjection RealProjection::identity(ComplexSpace space) {
  return RealProjection(RealSubspace::full(space));
}

Vec RealProjection::apply(const Vec& x) const {
  const Mat& b = sub_.basis();
  return b * (b.transpose() * x);
}

Mat RealProjection::apply(const Mat& cols) const {
  const Mat& b = sub_.basis();
  return b * (b.transpose() * cols);
}

const Mat& RealProjection::matrix() const {
  if (!dense_) {
    const Mat& b = sub_.basis();
    dense_ = std::make_shared<const Mat>(b * b.transpose());
  }
  return *dense_;
}

bool RealProjection::is_complex_linear(double tol) const {
  // E commutes with i iff i(E basis) is contained in the range and the
  // range is i-invariant; both collapse to ||(1-E) i B|| = 0.
  const Mat& b = sub_.basis();
  if (b.cols() == 0) return true;
  Mat ib = space().apply_i(b);
  Mat resid = ib - b * (b.transpose() * ib);
  return spectral_norm(resid) <= tol;  // ||E|| = 1, so the scale is 1
}

bool RealLinearOperator::is_complex_linear(double tol) const {
  Mat im = space.apply_i(matrix);                          // i M
  Mat mi = -space.apply_i(Mat(matrix.transpose())).transpose();  // M i
  const double scale = std::max(1e-300, spectral_norm(matrix));
  return spectral_norm(im - mi) <= tol * scale;
}

bool RealLinearOperator::is_antilinear(double tol) const {
  Mat im = space.apply_i(matrix);
  Mat mi = -space.apply_i(Mat(matrix.transpose())).transpose();
  const double scale = std::max(1e-300, spectral_norm(matrix));
  return spectral_norm(im + mi) <= tol * scale;
}

double RealLinearOperator::norm() const { return spectral_norm(matrix); }

RealProjection projector_from_span(ComplexSpace space, const Mat& vectors,
                                   double rel_tol) {
  return RealProjection(RealSubspace::span(space, vectors, rel_tol));
}

RealSubspace symplectic_complement(const RealSubspace& H) {
  Mat ib = H.space().apply_i(H.basis());
  return RealSubspace(H.space(),
                      orthogonal_complement(ib, H.space().real_dim()));
}

RealProjection symplectic_complement(const RealProjection& E) {
  return RealProjection(symplectic_complement(E.subspace()));
}

RealSubspace real_orthocomplement(const RealSubspace& H) {
  return RealSubspace(
      H.space(), orthogonal_complement(H.basis(), H.space().real_dim()));
}

RealProjection real_orthocomplement(const RealProjection& E) {
  return RealProjection(real_orthocomplement(E.subspace()));
}

RealProjection meet(const RealProjection& E, const RealProjection& F,
                    double angle_tol) {
  Mat b = intersection_basis(E.basis(), F.basis(), E.space().real_dim(),
                             angle_tol);
  return RealProjection(RealSubspace(E.space(), std::move(b)));
}

RealProjection join(const RealProjection& E, const RealProjection& F,
                    double rel_tol) {
  Mat u(E.space().real_dim(), E.rank() + F.rank());
  u << E.basis(), F.basis();
  return RealProjection(RealSubspace(E.space(), orthonormal_span(u, rel_tol)));
}

RealProjection meet_alternating(const RealProjection& E,
                                const RealProjection& F, int squarings,
                                double keep_tol) {
  if (E.rank() == 0 || F.rank() == 0) return RealProjection::zero(E.space());
  Mat m = E.matrix() * F.matrix();
  for (int k = 0; k < squarings; ++k) m = m * m;
  Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > keep_tol) ++r;
  return RealProjection(RealSubspace(E.space(), svd.matrixU().leftCols(r)));
}

double cross_norm(const RealProjection& E, const RealProjection& F) {
  if (E.rank() == 0 || F.rank() == 0) return 0.0;
  return spectral_norm(E.basis().transpose() * F.basis());
}

double separation_norm(const RealProjection& E, const RealProjection& F) {
  if (E.rank() == 0 || F.rank() == 0) return 0.0;
  return spectral_norm(E.basis().transpose() * E.space().apply_i(F.basis()));
}

bool is_separated(const RealProjection& E, const RealProjection& F,
                  double tol) {
  return separation_norm(E, F) <= tol;
}

double containment_residual(const RealProjection& outer,
                            const RealProjection& inner) {
  if (inner.rank() == 0) return 0.0;
  Mat resid = inner.basis() - outer.apply(inner.basis());
  return spectral_norm(resid);
}

double projection_distance(const RealProjection& E, const RealProjection& F) {
  return sym_spectral_norm(E.matrix() - F.matrix());
}

CoreHull complex_core_hull(const RealSubspace& H, double angle_tol) {
  const ComplexSpace& sp = H.space();
  Mat ib = sp.apply_i(H.basis());
  Mat core = intersection_basis(H.basis(), ib, sp.real_dim(), angle_tol);
  Mat u(sp.real_dim(), 2 * H.dim());
  u << H.basis(), ib;
  Mat hull = orthonormal_span(u);
  CoreHull out{RealSubspace(sp, std::move(core)),
               RealSubspace(sp, std::move(hull)), false, false, false};
  out.cyclic = out.hull.dim() == sp.real_dim();
  out.separating = out.core.dim() == 0;
  out.standard = out.cyclic && out.separating;
  return out;
}

std::string matrix_to_csv(const Mat& M) {
  std::string s = format_double(static_cast<double>(M.rows())) + "," +
                  format_double(static_cast<double>(M.cols())) + "\n";
  for (Eigen::Index j = 0; j < M.cols(); ++j) {
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      if (i) s += ",";
      s += format_double(M(i, j));
    }
    s += "\n";
  }
  return s;
}

}  // namespace modloc
