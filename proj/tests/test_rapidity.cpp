#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include <modloc/linalg.hpp>
#include <modloc/realspace.hpp>
#include <modloc/scalarmodel.hpp>

#include "support.hpp"

using namespace modloc;
using testsup::op_dist;
using cplx = std::complex<double>;

namespace {

CVec random_grid(Rng& rng, int m) {
  return testsup::complex_gaussian(rng, m, 1).col(0);
}

LatticeSymmetry boost_by(double t) {
  LatticeSymmetry g;
  g.rapidity = t;
  return g;
}

}  // namespace

TEST_CASE("rapidity model construction and the conditioning guard") {
  CHECK_THROWS_AS(RapidityModel(1, 2 * M_PI, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(RapidityModel(64, -1.0, 1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(RapidityModel(64, 2 * M_PI, 0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(RapidityModel(64, 2 * M_PI, 1.0, -1), std::invalid_argument);
  CHECK_THROWS_AS(RapidityModel(8, 2 * M_PI, 1.0, 4), std::invalid_argument);
  CHECK(RapidityModel::max_mode_cutoff(2 * M_PI) == 8);
  CHECK_THROWS_WITH_AS(RapidityModel(64, 2 * M_PI, 1.0, 9),
                       "boost kernel condition exceeds 1e12; largest usable "
                       "mode cutoff here is 8",
                       std::invalid_argument);
  const RapidityModel model(64, 2 * M_PI, 1.0, 8);
  CHECK(model.mode_count() == 17);
  CHECK(model.dtheta() == doctest::Approx(4 * M_PI / 64));
  CHECK(model.theta_grid()(0) == doctest::Approx(-2 * M_PI));
  CHECK(model.nu()(8) == 0.0);
  CHECK(model.nu()(9) == doctest::Approx(0.5));  // pi / theta_max
  CHECK(model.condition_bound() <= 1e12);
}

TEST_CASE("grid inner product is the flat rapidity measure") {
  const RapidityModel model(32, 3.0, 1.0, 4);
  Rng rng(81);
  const CVec f = random_grid(rng, 32);
  const CVec g = random_grid(rng, 32);
  cplx direct = 0;
  for (int j = 0; j < 32; ++j) direct += std::conj(f(j)) * g(j);
  direct *= model.dtheta();
  CHECK(std::abs(model.inner(f, g) - direct) <= 1e-13);
}

TEST_CASE("mode synthesis and band compression invert each other") {
  const RapidityModel model(64, 2 * M_PI, 1.0, 6);
  Rng rng(82);
  const CVec modes = testsup::complex_gaussian(rng, model.mode_count(), 1);
  const CVec grid = model.grid_from_modes(modes);
  REQUIRE(grid.size() == 64);
  // Explicit synthesis formula; the 1/sqrt(M) split makes the pair
  // mutually inverse.
  const double scale = 1.0 / std::sqrt(double(model.grid_size()));
  for (int j : {0, 7, 40}) {
    cplx expect = 0;
    for (int i = 0; i < model.mode_count(); ++i)
      expect += modes(i) *
                std::polar(scale, model.nu()(i) * model.theta_grid()(j));
    CHECK(std::abs(grid(j) - expect) <= 1e-12);
  }
  CHECK((model.modes_from_grid(grid) - modes).norm() <= 1e-11);
}

TEST_CASE("boosting by a grid multiple is an exact cyclic shift") {
  const RapidityModel model(64, 2 * M_PI, 1.0, 6);
  Rng rng(83);
  const CVec f = random_grid(rng, 64);
  const int steps = 5;
  const CVec moved =
      model.apply_symmetry_grid(f, boost_by(steps * model.dtheta()));
  for (int j = 0; j < 64; ++j)
    CHECK(moved(j) == f((j - steps + 64) % 64));  // bytewise equal
}

TEST_CASE("boost group law holds off the grid to roundoff") {
  const RapidityModel model(64, 2 * M_PI, 1.0, 6);
  Rng rng(84);
  const CVec f = random_grid(rng, 64);
  const double t1 = 0.3121, t2 = -0.7741;
  const CVec ab = model.apply_symmetry_grid(
      model.apply_symmetry_grid(f, boost_by(t2)), boost_by(t1));
  const CVec once = model.apply_symmetry_grid(f, boost_by(t1 + t2));
  CHECK((ab - once).norm() <= 1e-10 * f.norm());
  // Norm in the flat measure is preserved.
  CHECK(std::abs(model.inner(ab, ab).real() - model.inner(f, f).real()) <=
        1e-10);
  // Translations act as unimodular multipliers.
  const CVec mult = model.translation_multiplier(0.7, -0.2);
  for (int j = 0; j < 64; ++j)
    CHECK(std::abs(std::abs(mult(j)) - 1.0) <= 1e-12);
}

TEST_CASE("band compression of a pure oscillation shifts the mode ladder") {
  const RapidityModel model(64, 2 * M_PI, 1.0, 4);
  const int d = model.mode_count();
  // Multiplier e^{i nu_1 theta} moves mode n to n + 1 inside the band.
  CVec osc(64);
  for (int j = 0; j < 64; ++j)
    osc(j) = std::polar(1.0, (M_PI / model.theta_max()) * model.theta_grid()(j));
  const CMat c = model.compress_diagonal(osc);
  for (int col = 0; col < d; ++col)
    for (int row = 0; row < d; ++row) {
      const double expect = row == col + 1 ? 1.0 : 0.0;
      CHECK(std::abs(c(row, col) - expect) <= 1e-12);
    }
  // The constant multiplier compresses to the identity.
  const CMat one = model.compress_diagonal(CVec::Ones(64));
  CHECK((one - CMat::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("wedge space matches the explicit fixed-vector basis") {
  const RapidityModel model(128, 2 * M_PI, 1.0, 5);
  const int d = model.mode_count();
  const int kappa = model.mode_cutoff();
  const ComplexSpace space(d);
  // Fixed vectors of the antilinear reflection c -> e^{pi nu} conj(rev c):
  // the center mode, and two combinations per opposite-mode pair.
  Mat span = Mat::Zero(2 * d, 2 * kappa + 1);
  int at = 0;
  {
    CVec e0 = CVec::Zero(d);
    e0(kappa) = 1.0;
    span.col(at++) = space.embed(e0);
  }
  for (int n = 1; n <= kappa; ++n) {
    const double beta = std::exp(M_PI * model.nu()(kappa + n));
    CVec v = CVec::Zero(d), w = CVec::Zero(d);
    v(kappa + n) = 1.0;
    v(kappa - n) = 1.0 / beta;
    w(kappa + n) = cplx(0, 1);
    w(kappa - n) = cplx(0, -1.0 / beta);
    span.col(at++) = space.embed(v);
    span.col(at++) = space.embed(w);
  }
  const RealProjection oracle = projector_from_span(space, span);
  const RealProjection wedge = bgl_wedge_space(model, Wedge::kRight);
  CHECK(wedge.rank() == d);
  CHECK(projection_distance(wedge, oracle) <= 1e-8);
  // The left wedge is the symplectic complement (wedge duality).
  const RealProjection left = bgl_wedge_space(model, Wedge::kLeft);
  CHECK(projection_distance(left, symplectic_complement(wedge)) <= 1e-8);
}

TEST_CASE("wedge processes survive boosts and translations coherently") {
  const RapidityModel model(256, 2 * M_PI, 1.0, 6);
  const BglReport rep = bgl_report(model, 1e-8);
  CHECK(rep.fixed_dim == model.mode_count());
  CHECK(rep.condition_bound == doctest::Approx(model.condition_bound()));
  CHECK(rep.duality_residual <= 1e-6);
  CHECK(rep.boost_residual <= 1e-8);
  CHECK(rep.boost_step > 0.0);
  CHECK(rep.lightlike_shift == 1e-8);
  CHECK(rep.lightlike_residual <= 1e-5);
}
