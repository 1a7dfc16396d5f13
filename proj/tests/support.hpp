#pragma once

// Shared oracles for the unit tests. These deliberately take dense, direct
// routes (Gram inverses, full SVDs, explicit matrices) so they stay
// independent of the library's own span and projection plumbing.

#include <complex>

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <modloc/linalg.hpp>
#include <modloc/realspace.hpp>
#include <modloc/rng.hpp>

namespace testsup {

using modloc::CMat;
using modloc::CVec;
using modloc::Mat;
using modloc::Rng;
using modloc::Vec;
using cplx = std::complex<double>;

inline CMat complex_gaussian(Rng& rng, int rows, int cols) {
  const Mat re = rng.gaussian(rows, cols);
  const Mat im = rng.gaussian(rows, cols);
  return (re.cast<cplx>() + cplx(0, 1) * im.cast<cplx>()) / std::sqrt(2.0);
}

inline CMat random_unitary(Rng& rng, int n) {
  Eigen::HouseholderQR<CMat> qr(complex_gaussian(rng, n, n));
  return CMat(qr.householderQ());
}

inline Mat real_linear_of(const modloc::ComplexSpace& space, const CMat& u) {
  const int d = space.real_dim();
  return space.embed_cols(u * space.extract_cols(Mat::Identity(d, d)));
}

// Orthogonal projector onto the column span of a (full-column-rank) matrix,
// through the normal equations rather than any orthonormalization.
inline Mat gram_projector(const Mat& span) {
  if (span.cols() == 0) return Mat::Zero(span.rows(), span.rows());
  const Mat gram = span.transpose() * span;
  return span * gram.ldlt().solve(span.transpose());
}

inline double op_dist(const Mat& a, const Mat& b) {
  return Eigen::JacobiSVD<Mat>(a - b).singularValues()(0);
}

inline double op_norm(const Mat& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  return Eigen::JacobiSVD<Mat>(a).singularValues()(0);
}

inline modloc::RealProjection random_projection(
    Rng& rng, const modloc::ComplexSpace& space) {
  const int d = rng.uniform_int(0, space.real_dim());
  if (d == 0) return modloc::RealProjection::zero(space);
  return modloc::projector_from_span(space,
                                     rng.gaussian(space.real_dim(), d));
}

}  // namespace testsup
