#pragma once

#include <memory>
#include <string>

#include <modloc/linalg.hpp>

namespace modloc {

// C^n seen as R^{2n}: z = a + ib is stored (a; b). Multiplication by i is
// the block map (a; b) -> (-b; a), an orthogonal square root of -1. The
// real inner product g is Re<.,.> of the complex one; the symplectic form
// sigma(x, y) = g(ix, y) = Im<x, y> has matrix i^T = -i.
class ComplexSpace {
 public:
  explicit ComplexSpace(int complex_dim);

  int complex_dim() const noexcept { return n_; }
  int real_dim() const noexcept { return 2 * n_; }

  Vec apply_i(const Vec& x) const;
  Mat apply_i(const Mat& cols) const;
  Mat i_matrix() const;  // dense form; prefer apply_i at model sizes

  double sigma(const Vec& x, const Vec& y) const { return apply_i(x).dot(y); }

  Vec embed(const CVec& z) const;
  CVec extract(const Vec& x) const;
  Mat embed_cols(const CMat& z) const;
  CMat extract_cols(const Mat& x) const;

  friend bool operator==(const ComplexSpace&, const ComplexSpace&) = default;

 private:
  int n_;
};

// Closed real-linear subspace, held as a g-orthonormal basis (2n x k).
class RealSubspace {
 public:
  RealSubspace(ComplexSpace space, Mat orthonormal_basis);

  static RealSubspace zero(ComplexSpace space);
  static RealSubspace full(ComplexSpace space);
  // Orthonormalizes arbitrary spanning vectors. Throws std::invalid_argument
  // ("empty span") when nothing survives the cutoff.
  static RealSubspace span(ComplexSpace space, const Mat& vectors,
                           double rel_tol = 1e-10);

  const ComplexSpace& space() const noexcept { return space_; }
  const Mat& basis() const noexcept { return basis_; }
  int dim() const noexcept { return static_cast<int>(basis_.cols()); }

 private:
  ComplexSpace space_;
  Mat basis_;
};

// Real-orthogonal projection onto a RealSubspace. The dense 2n x 2n matrix
// is only materialized on demand; everything else works off the basis.
class RealProjection {
 public:
  explicit RealProjection(RealSubspace subspace);

  static RealProjection zero(ComplexSpace space);
  static RealProjection identity(ComplexSpace space);

  const RealSubspace& subspace() const noexcept { return sub_; }
  const Mat& basis() const noexcept { return sub_.basis(); }
  const ComplexSpace& space() const noexcept { return sub_.space(); }
  int rank() const noexcept { return sub_.dim(); }

  Vec apply(const Vec& x) const;
  Mat apply(const Mat& cols) const;
  const Mat& matrix() const;

  bool is_complex_linear(double tol = 1e-12) const;

 private:
  RealSubspace sub_;
  mutable std::shared_ptr<const Mat> dense_;
};

struct RealLinearOperator {
  ComplexSpace space;
  Mat matrix;

  bool is_complex_linear(double tol = 1e-12) const;  // commutes with i
  bool is_antilinear(double tol = 1e-12) const;      // anticommutes with i
  double norm() const;                               // spectral
};

RealProjection projector_from_span(ComplexSpace space, const Mat& vectors,
                                   double rel_tol = 1e-10);

// sigma-complement H' = {x : sigma(x, h) = 0 for all h in H} = (iH)^perp_g.
// On projections it agrees with E' = 1 + i E i.
RealSubspace symplectic_complement(const RealSubspace& H);
RealProjection symplectic_complement(const RealProjection& E);

RealSubspace real_orthocomplement(const RealSubspace& H);
RealProjection real_orthocomplement(const RealProjection& E);

RealProjection meet(const RealProjection& E, const RealProjection& F,
                    double angle_tol = 1e-8);
RealProjection join(const RealProjection& E, const RealProjection& F,
                    double rel_tol = 1e-10);

// Alternating-product route to the meet: (EF)^(2^squarings) collapses onto
// the intersection. Slower and less sharp than the SVD route; kept as an
// independent cross-check.
RealProjection meet_alternating(const RealProjection& E,
                                const RealProjection& F, int squarings = 40,
                                double keep_tol = 0.5);

double cross_norm(const RealProjection& E, const RealProjection& F);  // ||EF||
double separation_norm(const RealProjection& E,
                       const RealProjection& F);  // ||E i F||
// ||E i F|| = 0 means every vector of E is sigma-orthogonal to all of F.
bool is_separated(const RealProjection& E, const RealProjection& F,
                  double tol = 1e-9);

// ||(1 - outer) B_inner||, zero iff inner <= outer.
double containment_residual(const RealProjection& outer,
                            const RealProjection& inner);
// ||E - F|| via dense matrices; intended for small spaces and tests.
double projection_distance(const RealProjection& E, const RealProjection& F);

struct CoreHull {
  RealSubspace core;  // H ∧ iH, the largest complex subspace inside H
  RealSubspace hull;  // H ∨ iH, the complex span of H
  bool cyclic;        // hull is everything
  bool separating;    // core is zero
  bool standard;      // both
};
CoreHull complex_core_hull(const RealSubspace& H, double angle_tol = 1e-8);

// Debug dump: first line "rows,cols", then one line per column.
std::string matrix_to_csv(const Mat& M);

}  // namespace modloc
