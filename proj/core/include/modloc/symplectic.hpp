#pragma once

#include <memory>
#include <vector>

#include <boost/rational.hpp>

#include <modloc/linalg.hpp>
#include <modloc/realspace.hpp>

namespace modloc {

// Finite-dimensional real vector space with a fixed skew-symmetric,
// invertible form. standard(n) carries omega = [[0, I], [-I, 0]], which is
// exactly the sigma of ComplexSpace(n) under the (a; b) identification.
class SymplecticSpace {
 public:
  explicit SymplecticSpace(Mat omega, double tol = 1e-10);
  static SymplecticSpace standard(int half_dim);

  int dim() const noexcept { return static_cast<int>(omega_.rows()); }
  const Mat& omega() const noexcept { return omega_; }
  double form(const Vec& x, const Vec& y) const { return x.dot(omega_ * y); }
  double condition() const noexcept { return cond_; }

 private:
  Mat omega_;
  double cond_;
};

// Subspace given by spanning vectors; the stored basis is g-orthonormalized
// so downstream rank decisions are scale-free.
class SymplecticSubspace {
 public:
  SymplecticSubspace(std::shared_ptr<const SymplecticSpace> space,
                     const Mat& spanning, double rel_tol = 1e-10);

  const SymplecticSpace& space() const noexcept { return *space_; }
  const std::shared_ptr<const SymplecticSpace>& space_ptr() const noexcept {
    return space_;
  }
  const Mat& basis() const noexcept { return basis_; }
  int dim() const noexcept { return static_cast<int>(basis_.cols()); }

  Mat skew_gram() const;  // B^T omega B

 private:
  std::shared_ptr<const SymplecticSpace> space_;
  Mat basis_;
};

struct SymplecticRank {
  int rank;          // rank of the restricted form; always even
  Mat center_basis;  // kernel of the restricted form inside the subspace
};
SymplecticRank symplectic_rank(const SymplecticSubspace& H,
                               double rel_tol = 1e-10);

// mu(H) = rank_sigma(H) / dim V, exact rational arithmetic.
boost::rational<long> gleason_measure(const SymplecticSubspace& H);

struct DarbouxDecomposition {
  Mat center_basis;
  std::vector<Mat> planes;   // columns (h, h~) with sigma(h, h~) = 1
  int degenerate_pivot_count;  // columns relegated to the center by threshold
};
DarbouxDecomposition darboux_decompose(const SymplecticSubspace& H,
                                       double pivot_rel_tol = 1e-10);

// Chain of symplectic planes from K to H in which adjacent members meet in
// exactly one dimension; at most 4 nodes. Throws std::invalid_argument
// ("not a symplectic plane") unless both inputs are 2-dimensional with
// nondegenerate restricted form.
std::vector<SymplecticSubspace> plane_chain(const SymplecticSubspace& K,
                                            const SymplecticSubspace& H,
                                            double tol = 1e-9);

// F(H) = Z(H)^perp_g ∩ H where Z(H) is the center of the restricted sigma;
// the nondegenerate factor, with dim F(H) = rank_sigma(H).
RealSubspace factorial_part(const RealSubspace& H, double rel_tol = 1e-10);

}  // namespace modloc
