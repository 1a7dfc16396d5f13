#pragma once

#include <array>
#include <functional>
#include <vector>

#include <modloc/realspace.hpp>

namespace modloc {

// A real subspace that is cyclic (complex span is everything) and
// separating (contains no complex line). Forces dim_R H = n.
class StandardSubspace {
 public:
  explicit StandardSubspace(RealSubspace subspace, double angle_tol = 1e-8);

  const RealSubspace& subspace() const noexcept { return sub_; }
  const ComplexSpace& space() const noexcept { return sub_.space(); }

 private:
  RealSubspace sub_;
};

// Modular pair of a standard subspace: antilinear conjugation J and
// positive complex-linear Delta with J Delta J = Delta^{-1}. Construction
// validates J^2 = 1, J^T J = 1, {J, i} = 0 (1e-9) and the commutation /
// positivity of Delta, with J Delta J = Delta^{-1} at 1e-8 relative.
class ModularData {
 public:
  ModularData(ComplexSpace space, Mat J, Mat delta_eigenvectors,
              Vec delta_eigenvalues, double condition);

  const ComplexSpace& space() const noexcept { return space_; }
  const Mat& J() const noexcept { return J_; }
  const Vec& delta_eigenvalues() const noexcept { return evals_; }
  const Mat& delta_eigenvectors() const noexcept { return evecs_; }
  const Mat& delta() const noexcept { return delta_; }
  // condition number of S (the square of that of [B, iB]); large values
  // mean H hugs a complex line
  double condition() const noexcept { return cond_; }

  Mat delta_power(double s) const;
  Mat delta_it(double t) const;  // orthogonal and complex-linear
  Mat apply_S(const Mat& cols) const;  // S = J Delta^{1/2}

 private:
  ComplexSpace space_;
  Mat J_, evecs_, delta_;
  Vec evals_;
  double cond_;
};

using WarningSink = std::function<void(const std::string&)>;

// Tomita data from the basis: S = [B, -iB] [B, iB]^{-1}, Delta = S^T S,
// J = S Delta^{-1/2}. Ill-conditioned inputs (cond > 1e12) trigger the
// warning sink (default: stderr); computation still proceeds.
ModularData modular_data(const StandardSubspace& H, WarningSink warn = {});

// E_H = (1 + J Delta^{1/2}) (1 + Delta)^{-1}, the real-orthogonal
// projection back onto H.
RealProjection projection_from_modular(const ModularData& md);

// (J, Delta) |-> (U J U^T, U Delta U^T) for orthogonal U that is either
// complex-linear or antilinear; both cases transport the same way.
ModularData covariance_transport(const ModularData& md, const Mat& U,
                                 double tol = 1e-10);

struct DefectReport {
  RealLinearOperator X;  // E + F - (E v F)
  double norm_X;
  double norm_EF;
  // five-fold splitting adapted to the pair: E^F, E^F_perp, E_perp^F,
  // (EvF)_perp, and the generic remainder
  std::array<RealProjection, 5> blocks;
};

DefectReport defect_operator(const RealProjection& E, const RealProjection& F);

// ||E + F - (EvF)|| computed on the join subspace; no dense 2n x 2n
// matrices, usable at model scale.
double defect_norm(const RealProjection& E, const RealProjection& F);

std::array<RealProjection, 5> halmos_decompose(const RealProjection& E,
                                               const RealProjection& F,
                                               double angle_tol = 1e-8);

// One-parameter orthogonal group V(t) = exp(itQ) with positive generator.
class UnitaryFamily {
 public:
  virtual ~UnitaryFamily() = default;
  virtual Mat apply(double t, const Mat& cols) const = 0;
  virtual double spectrum_min() const = 0;
};

// Dense route: Q must be real-symmetric and complex-linear.
class SpectralUnitaryFamily final : public UnitaryFamily {
 public:
  SpectralUnitaryFamily(ComplexSpace space, const Mat& generator,
                        double tol = 1e-10);
  Mat apply(double t, const Mat& cols) const override;
  double spectrum_min() const override;

 private:
  ComplexSpace space_;
  CMat evecs_;
  Vec evals_;
};

struct ClusterOptions {
  int premise_samples = 33;    // equispaced t in [-delta, delta]
  double tol_premise = 1e-6;
  double slack = 0.0;          // additive slack on the decay bound
  double meet_tol = 1e-8;
};

struct ClusterReport {
  std::vector<double> ts;
  std::vector<double> premise_residuals;  // ||E i V(t) F|| per sample
  double premise_worst = 0;
  double norm_EF = 0;
  double norm_X = 0;
  double bound = 1;      // exp(-mass * delta)
  double spectrum_min = 0;
  double delta = 0;
  double mass = 0;
  bool premise_ok = false;
  bool decay_ok = false;      // norm_EF <= bound + slack
  bool meet_trivial = false;  // E ^ F = 0
  bool pass() const { return premise_ok && decay_ok && meet_trivial; }
};

// Checks the premise E <= V(t) F' V(t)* on a sampled window and reports the
// exponential bound exp(-mass * delta) against ||EF||. Throws
// std::invalid_argument("mass gap violated") if the generator spectrum dips
// below mass - 1e-9.
ClusterReport cluster_check(const RealProjection& E, const RealProjection& F,
                            const UnitaryFamily& V, double mass, double delta,
                            ClusterOptions opts = {});

}  // namespace modloc
