#include <modloc/linalg.hpp>

namespace modloc {

namespace {

// Stacked intersection: a unit null vector (u; v) of [A B] has A u = -B v
// with ||u|| = ||v|| = 1/sqrt2, so A u spans an intersection direction.
Mat intersection_stacked(const Mat& A, const Mat& B, double angle_tol) {
  Mat M(A.rows(), A.cols() + B.cols());
  M << A, B;
  Eigen::BDCSVD<Mat> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Eigen::Index K = M.cols();
  Mat collected(A.rows(), K);
  Eigen::Index found = 0;
  for (Eigen::Index i = 0; i < K; ++i) {
    const double s = i < sv.size() ? sv(i) : 0.0;
    if (s <= angle_tol) {
      Vec u = svd.matrixV().col(i).head(A.cols());
      Vec x = A * u;
      const double nx = x.norm();
      if (nx > 0) collected.col(found++) = x / nx;
    }
  }
  return orthonormal_span(collected.leftCols(found), 1e-12);
}

}  // namespace

Mat orthonormal_span(const Mat& vectors, double rel_tol) {
  if (vectors.cols() == 0) return Mat(vectors.rows(), 0);
  Eigen::BDCSVD<Mat> svd(vectors, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0) return Mat(vectors.rows(), 0);
  const double cut = rel_tol * sv(0);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

Mat orthogonal_complement(const Mat& basis, int rows, double rel_tol) {
  if (basis.cols() == 0) return Mat::Identity(rows, rows);
  Eigen::BDCSVD<Mat> svd(basis, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > rel_tol * smax) ++r;
  return svd.matrixU().rightCols(rows - r);
}

Mat intersection_basis(const Mat& A, const Mat& B, int rows, double angle_tol) {
  if (A.cols() == 0 || B.cols() == 0) return Mat(rows, 0);
  if (A.cols() + B.cols() <= rows) return intersection_stacked(A, B, angle_tol);
  // Wide case: the stacked SVD would see spurious null directions, so pass
  // to orthogonal complements, where span(A)∩span(B) = (A_perp + B_perp)_perp.
  Mat ca = orthogonal_complement(A, rows);
  Mat cb = orthogonal_complement(B, rows);
  Mat u(rows, ca.cols() + cb.cols());
  u << ca, cb;
  return orthogonal_complement(orthonormal_span(u), rows);
}

int svd_rank(const Mat& M, double rel_tol) {
  if (M.cols() == 0 || M.rows() == 0) return 0;
  Eigen::BDCSVD<Mat> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0) return 0;
  int r = 0;
  while (r < sv.size() && sv(r) > rel_tol * sv(0)) ++r;
  return r;
}

double spectral_norm(const Mat& M) {
  if (M.rows() == 0 || M.cols() == 0) return 0.0;
  Eigen::BDCSVD<Mat> svd(M);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double sym_spectral_norm(const Mat& M) {
  if (M.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(M, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

}  // namespace modloc
