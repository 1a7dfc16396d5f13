#include <doctest.h>

#include <memory>
#include <stdexcept>

#include <modloc/linalg.hpp>
#include <modloc/realspace.hpp>
#include <modloc/symplectic.hpp>

#include "support.hpp"

using namespace modloc;
using testsup::op_dist;
using rational = boost::rational<long>;

namespace {

std::shared_ptr<const SymplecticSpace> std_space(int n) {
  return std::make_shared<SymplecticSpace>(SymplecticSpace::standard(n));
}

// Columns e_j and e_{n+j}: a canonical coordinate plane with form value 1.
Mat coordinate_plane(int n, int j) {
  Mat m = Mat::Zero(2 * n, 2);
  m(j, 0) = 1.0;
  m(n + j, 1) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("standard space matches the complex sigma") {
  const int n = 3;
  const SymplecticSpace sp = SymplecticSpace::standard(n);
  const ComplexSpace cs(n);
  CHECK(sp.dim() == 2 * n);
  CHECK(op_dist(sp.omega(), -cs.i_matrix()) <= 1e-15);
  Rng rng(31);
  const Vec x = rng.gaussian(2 * n, 1);
  const Vec y = rng.gaussian(2 * n, 1);
  CHECK(std::abs(sp.form(x, y) - cs.sigma(x, y)) <= 1e-12);
  CHECK(sp.form(x, x) <= 1e-14);  // skew
}

TEST_CASE("constructor rejects non-symplectic forms") {
  CHECK_THROWS_AS(SymplecticSpace(Mat::Identity(4, 4)), std::invalid_argument);
  // Odd-dimensional skew matrices are always singular.
  Mat odd = Mat::Zero(3, 3);
  odd(0, 1) = 1.0;
  odd(1, 0) = -1.0;
  CHECK_THROWS_AS(SymplecticSpace{odd}, std::invalid_argument);
  Mat degenerate = Mat::Zero(4, 4);
  degenerate(0, 1) = 1.0;
  degenerate(1, 0) = -1.0;
  CHECK_THROWS_AS(SymplecticSpace{degenerate}, std::invalid_argument);
}

TEST_CASE("measure on pinned subspaces") {
  const int n = 4;
  auto sp = std_space(n);
  CHECK(gleason_measure(SymplecticSubspace(sp, Mat(2 * n, 0))) ==
        rational(0));
  CHECK(gleason_measure(SymplecticSubspace(sp, Mat::Identity(2 * n, 2 * n))) ==
        rational(1));
  // A single line is isotropic: measure zero despite dimension one.
  Mat line = Mat::Zero(2 * n, 1);
  line(1, 0) = 1.0;
  CHECK(gleason_measure(SymplecticSubspace(sp, line)) == rational(0));
  // One canonical plane contributes 2 / (2n) = 1/n.
  CHECK(gleason_measure(SymplecticSubspace(sp, coordinate_plane(n, 2))) ==
        rational(1, n));
  // Plane plus an isotropic direction from elsewhere: rank stays 2.
  Mat pl = Mat::Zero(2 * n, 3);
  pl.leftCols(2) = coordinate_plane(n, 0);
  pl(1, 2) = 1.0;
  CHECK(gleason_measure(SymplecticSubspace(sp, pl)) == rational(1, n));
}

TEST_CASE("rank routine returns an even rank and a genuine center") {
  Rng rng(32);
  const int n = 5;
  auto sp = std_space(n);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 1 + static_cast<int>(rng.uniform() * (2 * n - 1));
    const SymplecticSubspace h(sp, rng.gaussian(2 * n, d));
    const SymplecticRank sr = symplectic_rank(h);
    CHECK(sr.rank % 2 == 0);
    CHECK(sr.rank + sr.center_basis.cols() == h.dim());
    // Center vectors pair to zero with everything in the subspace.
    if (sr.center_basis.cols() > 0) {
      const Mat pairings = h.basis().transpose() * sp->omega() *
                           sr.center_basis;
      CHECK(pairings.cwiseAbs().maxCoeff() <= 1e-9);
      // ... and they lie inside the subspace itself.
      const Mat b = h.basis();
      const Mat residual =
          sr.center_basis - b * (b.transpose() * sr.center_basis);
      CHECK(residual.cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("darboux pieces reassemble the subspace") {
  Rng rng(33);
  const int n = 4;
  auto sp = std_space(n);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + static_cast<int>(rng.uniform() * (2 * n - 2));
    const SymplecticSubspace h(sp, rng.gaussian(2 * n, d));
    const DarbouxDecomposition dd = darboux_decompose(h);
    CHECK(dd.degenerate_pivot_count == 0);  // generic draws are clean
    const SymplecticRank sr = symplectic_rank(h);
    CHECK(2 * static_cast<int>(dd.planes.size()) == sr.rank);
    Mat all(2 * n, d);
    int at = 0;
    for (const Mat& p : dd.planes) {
      REQUIRE(p.cols() == 2);
      // Normalized pairing inside each plane.
      CHECK(std::abs(sp->form(p.col(0), p.col(1)) - 1.0) <= 1e-9);
      all.middleCols(at, 2) = p;
      at += 2;
    }
    all.middleCols(at, dd.center_basis.cols()) = dd.center_basis;
    at += static_cast<int>(dd.center_basis.cols());
    REQUIRE(at == d);
    // Distinct planes and the center pair to zero across blocks.
    const Mat gram = all.transpose() * sp->omega() * all;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const bool same_plane = i / 2 == j / 2 && i < sr.rank && j < sr.rank;
        if (!same_plane) CHECK(std::abs(gram(i, j)) <= 1e-9);
      }
    // Same span as the input subspace.
    CHECK(svd_rank(all) == d);
    Mat stacked(2 * n, 2 * d);
    stacked << all, h.basis();
    CHECK(svd_rank(stacked) == d);
  }
}

TEST_CASE("plane chains stay short and hinge on shared lines") {
  Rng rng(34);
  const int n = 4;
  auto sp = std_space(n);
  auto is_plane = [&](const SymplecticSubspace& s) {
    return s.dim() == 2 && symplectic_rank(s).rank == 2;
  };
  for (int trial = 0; trial < 25; ++trial) {
    SymplecticSubspace k(sp, rng.gaussian(2 * n, 2));
    SymplecticSubspace h(sp, rng.gaussian(2 * n, 2));
    if (!is_plane(k) || !is_plane(h)) continue;
    const auto chain = plane_chain(k, h);
    REQUIRE(chain.size() >= 1);
    REQUIRE(chain.size() <= 4);
    for (const auto& node : chain) CHECK(is_plane(node));
    // Endpoints match the inputs as subspaces.
    Mat left(2 * n, 4);
    left << chain.front().basis(), k.basis();
    CHECK(svd_rank(left) == 2);
    Mat right(2 * n, 4);
    right << chain.back().basis(), h.basis();
    CHECK(svd_rank(right) == 2);
    // Adjacent members share exactly a line.
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      Mat both(2 * n, 4);
      both << chain[i].basis(), chain[i + 1].basis();
      CHECK(svd_rank(both) == 3);
    }
  }
}

TEST_CASE("chain from a plane to itself is the plane alone") {
  const int n = 3;
  auto sp = std_space(n);
  const SymplecticSubspace k(sp, coordinate_plane(n, 1));
  const auto chain = plane_chain(k, k);
  CHECK(chain.size() == 1);
}

TEST_CASE("degenerate inputs to plane_chain are rejected") {
  const int n = 3;
  auto sp = std_space(n);
  const SymplecticSubspace good(sp, coordinate_plane(n, 0));
  // Span of e_1 and e_2: isotropic, restricted form vanishes.
  Mat iso = Mat::Zero(2 * n, 2);
  iso(1, 0) = 1.0;
  iso(2, 1) = 1.0;
  const SymplecticSubspace bad(sp, iso);
  CHECK_THROWS_WITH_AS(plane_chain(good, bad), "not a symplectic plane",
                       std::invalid_argument);
  CHECK_THROWS_AS(plane_chain(bad, good), std::invalid_argument);
  const SymplecticSubspace line(sp, coordinate_plane(n, 0).leftCols(1));
  CHECK_THROWS_AS(plane_chain(line, good), std::invalid_argument);
}

TEST_CASE("factorial part carves out the nondegenerate factor") {
  const ComplexSpace cs(4);
  // Plant: one canonical plane (e_0, i e_0) plus the isotropic line e_1.
  Mat span = Mat::Zero(8, 3);
  span(0, 0) = 1.0;
  span(4, 1) = 1.0;
  span(1, 2) = 1.0;
  const RealSubspace h(cs, span);
  const RealSubspace f = factorial_part(h);
  CHECK(f.dim() == 2);
  // Inside h...
  const RealProjection ph = projector_from_span(cs, span);
  CHECK(containment_residual(ph, RealProjection(f)) <= 1e-9);
  // ...and g-orthogonal to the center line e_1.
  Vec center = Vec::Zero(8);
  center(1) = 1.0;
  CHECK((f.basis().transpose() * center).cwiseAbs().maxCoeff() <= 1e-10);

  Rng rng(35);
  for (int trial = 0; trial < 10; ++trial) {
    const RealSubspace g = RealSubspace::span(cs, rng.gaussian(8, 5));
    const SymplecticSubspace as_symp(std_space(4), g.basis());
    CHECK(factorial_part(g).dim() == symplectic_rank(as_symp).rank);
  }
}
