#pragma once

#include <Eigen/Dense>

namespace modloc {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Orthonormal basis of the column span. Columns with singular value below
// rel_tol * sigma_max are discarded; an all-zero input yields zero columns.
Mat orthonormal_span(const Mat& vectors, double rel_tol = 1e-10);

// Orthonormal basis of the orthogonal complement of span(basis) in R^rows.
Mat orthogonal_complement(const Mat& basis, int rows, double rel_tol = 1e-10);

// Orthonormal basis of span(A) ∩ span(B). A and B must have orthonormal
// columns. angle_tol bounds the singular values of the stacked matrix that
// count as null; near zero such a singular value is principal angle / sqrt2.
Mat intersection_basis(const Mat& A, const Mat& B, int rows, double angle_tol = 1e-8);

int svd_rank(const Mat& M, double rel_tol = 1e-10);

double spectral_norm(const Mat& M);

// Largest |eigenvalue| of a symmetric matrix.
double sym_spectral_norm(const Mat& M);

}  // namespace modloc
