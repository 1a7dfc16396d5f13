#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <modloc/causal1d.hpp>
#include <modloc/rng.hpp>

using namespace modloc;

namespace {

// Completion of one spatial interval at time zero.
CausalRegion c(double lo, double hi) {
  return spatial_completion({{lo, hi}});
}

const CausalRegion kRightWedge = CausalRegion::box(-kInf, 0.0, 0.0, kInf);

}  // namespace

TEST_CASE("boxes validate their corners") {
  CHECK_THROWS_AS(LightconeBox(1.0, 0.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(LightconeBox(0.0, 1.0, 2.0, 1.0), std::invalid_argument);
  const LightconeBox b(0.0, 1.0, 0.0, 1.0);
  CHECK(b.contains(0.0, 1.0));
  CHECK(!b.contains(1.5, 0.5));
}

TEST_CASE("diamond from an interval") {
  // A = [-1, 1] at t = 0: u, v in [-1, 1] each.
  const CausalRegion d = c(-1.0, 1.0);
  REQUIRE(d.cells().size() == 1);
  CHECK(d.cells()[0] == LightconeBox(-1.0, 1.0, -1.0, 1.0));
  CHECK(d.punctures().empty());
  CHECK(d.contains_event(0.0, 0.0));
  CHECK(d.contains_event(0.5, 0.5));
  CHECK(d.contains_event(1.0, 0.0));  // apex belongs to the closed diamond
  CHECK(!d.contains_event(1.0, 0.5));
  CHECK(d.complete());
}

TEST_CASE("wedge complement is the opposite wedge minus the corner") {
  const CausalRegion w = kRightWedge;
  const CausalRegion wc = causal_complement(w);
  REQUIRE(wc.cells().size() == 1);
  CHECK(wc.cells()[0] == LightconeBox(0.0, kInf, -kInf, 0.0));
  REQUIRE(wc.punctures().size() == 1);
  CHECK(wc.punctures()[0] == UVPoint{0.0, 0.0});
  // The corner is timelike to no point of W but equals one of its points.
  CHECK(!wc.contains_uv(0.0, 0.0));
  CHECK(wc.contains_uv(1.0, -1.0));
  CHECK(causal_complement(wc) == w);
  CHECK(w.complete());
}

TEST_CASE("complement of a bounded diamond is two wedges with punctures") {
  const CausalRegion d = c(0.0, 2.0);  // u in [-2, 0], v in [0, 2]
  const CausalRegion dc = causal_complement(d);
  REQUIRE(dc.cells().size() == 2);
  CHECK(dc.cells()[0] == LightconeBox(-kInf, -2.0, 2.0, kInf));
  CHECK(dc.cells()[1] == LightconeBox(0.0, kInf, -kInf, 0.0));
  REQUIRE(dc.punctures().size() == 2);
  CHECK(dc.punctures()[0] == UVPoint{-2.0, 2.0});
  CHECK(dc.punctures()[1] == UVPoint{0.0, 0.0});
  CHECK(causal_complement(dc) == d);
}

TEST_CASE("empty and full are mutual complements") {
  CHECK(causal_complement(CausalRegion::empty()).is_full());
  CHECK(causal_complement(CausalRegion::full()).is_empty());
  CHECK(CausalRegion::empty().complete());
  CHECK(CausalRegion::full().complete());
  CHECK(region_meet(c(0.0, 1.0), CausalRegion::full()) == c(0.0, 1.0));
  CHECK(region_join(c(0.0, 1.0), CausalRegion::empty()) == c(0.0, 1.0));
}

TEST_CASE("single points: complement and double complement") {
  const CausalRegion p = CausalRegion::point(0.0, 0.0);
  REQUIRE(p.cells().size() == 1);
  CHECK(p.cells()[0] == LightconeBox(0.0, 0.0, 0.0, 0.0));
  const CausalRegion pc = causal_complement(p);
  // Everything non-timelike to the origin except the origin itself.
  REQUIRE(pc.punctures().size() == 1);
  CHECK(pc.punctures()[0] == UVPoint{0.0, 0.0});
  CHECK(pc.contains_event(0.0, 1.0));
  CHECK(!pc.contains_event(1.0, 0.0));
  CHECK(!pc.contains_event(0.0, 0.0));
  CHECK(causal_completion(p) == p);
}

TEST_CASE("two spacelike points complete to themselves") {
  const CausalRegion two = region_union(CausalRegion::point(0.0, 0.0),
                                        CausalRegion::point(0.0, 3.0));
  CHECK(causal_completion(two) == two);
  CHECK(two.complete());
}

TEST_CASE("two timelike points span a diamond with lightlike punctures") {
  // (0,0) and (2,0): u, v both move from 0 to 2.
  const CausalRegion two = region_union(CausalRegion::point(0.0, 0.0),
                                        CausalRegion::point(2.0, 0.0));
  const CausalRegion joined = causal_completion(two);
  REQUIRE(joined.cells().size() == 1);
  CHECK(joined.cells()[0] == LightconeBox(0.0, 2.0, 0.0, 2.0));
  // The two lightlike corners are cut out: they are null to both points.
  REQUIRE(joined.punctures().size() == 2);
  CHECK(joined.punctures()[0] == UVPoint{0.0, 2.0});
  CHECK(joined.punctures()[1] == UVPoint{2.0, 0.0});
  CHECK(!joined.contains_event(1.0, 1.0));
  CHECK(!joined.contains_event(1.0, -1.0));
  CHECK(joined.contains_event(1.0, 0.0));
  CHECK(joined.complete());
}

TEST_CASE("touching diamonds join into one diamond") {
  const CausalRegion j = region_join(c(0.0, 1.0), c(1.0, 2.0));
  CHECK(j == c(0.0, 2.0));
  // Disjoint but lightlike-connectable pieces keep their gap.
  const CausalRegion apart = region_join(c(0.0, 1.0), c(5.0, 6.0));
  CHECK(apart.cells().size() == 2);
}

TEST_CASE("null segments are causally complete") {
  // Degenerate box: a piece of a light ray.
  const CausalRegion seg = CausalRegion::box(0.0, 0.0, 0.0, 2.0);
  CHECK(causal_completion(seg) == seg);
  CHECK(seg.complete());
}

TEST_CASE("separation respects lightlike touching") {
  CHECK(region_separated(c(0.0, 1.0), c(1.0, 2.0)));
  CHECK(region_separated(c(0.0, 1.0), c(3.0, 4.0)));
  CHECK(!region_separated(c(0.0, 2.0), c(1.0, 3.0)));
  // Time-shift [3,4]'s diamond so it reaches into [0,2]'s influence.
  const PoincareElement1d shift{0.0, 1.5, 0.0, false, false};
  CHECK(!region_separated(poincare_apply(shift, c(1.0, 2.0)), c(3.0, 4.0)));
  // Interval-family overload at two times.
  CHECK(region_separated({{0.0, 1.0}}, 0.0, {{2.0, 3.0}}, 1.0));
  CHECK(!region_separated({{0.0, 1.0}}, 0.0, {{2.0, 3.0}}, 1.5));
  CHECK(region_separated({{0.0, 1.0}, {10.0, 11.0}}, 0.0, {{2.0, 3.0}}, 1.0));
}

TEST_CASE("containment tolerates puncture defects") {
  const CausalRegion d = c(0.0, 2.0);
  CHECK(region_contains(d, c(0.5, 1.5)));
  CHECK(region_contains(d, d));
  CHECK(!region_contains(c(0.5, 1.5), d));
  // A punctured region still counts as contained in its closure.
  const CausalRegion two = causal_completion(region_union(
      CausalRegion::point(0.0, 1.0), CausalRegion::point(2.0, 1.0)));
  CHECK(!two.punctures().empty());
  CHECK(region_contains(CausalRegion::box(-1.0, 1.0, 1.0, 3.0), two));
}

TEST_CASE("meet distributes over the pieces that intersect") {
  const CausalRegion m = region_meet(c(0.0, 2.0), c(1.0, 3.0));
  REQUIRE(m.cells().size() == 1);
  CHECK(m.cells()[0] == LightconeBox(-2.0, -1.0, 1.0, 2.0));
  CHECK(region_meet(c(0.0, 1.0), c(2.0, 3.0)).is_empty());
  // W ^ W' = empty: the shared corner is punctured away.
  CHECK(region_meet(kRightWedge, causal_complement(kRightWedge)).is_empty());
}

TEST_CASE("time slices trace the influence region") {
  const CausalRegion d = c(-1.0, 1.0);
  for (double t : {0.0, 0.5, -0.5, 2.0}) {
    const auto slices = time_slice(d, t);
    REQUIRE(slices.size() == 1);
    CHECK(slices[0].lo == -1.0 - std::abs(t));
    CHECK(slices[0].hi == 1.0 + std::abs(t));
  }
  const auto wslice = time_slice(kRightWedge, 0.0);
  REQUIRE(wslice.size() == 1);
  CHECK(wslice[0].lo == 0.0);
  CHECK(wslice[0].hi == kInf);
}

TEST_CASE("spatial completion merges touching intervals and says so") {
  std::ostringstream note;
  const CausalRegion merged =
      spatial_completion({{0.0, 1.0}, {1.0, 2.0}}, &note);
  CHECK(merged == c(0.0, 2.0));
  CHECK(!note.str().empty());
  std::ostringstream quiet;
  const CausalRegion apart =
      spatial_completion({{3.0, 4.0}, {0.0, 1.0}}, &quiet);
  CHECK(quiet.str().empty());
  CHECK(apart.cells().size() == 2);
  // Sorted canonical order (ascending u) regardless of input order.
  CHECK(apart.cells()[0].u1 == -4.0);
}

TEST_CASE("from_boxes canonicalizes to a sorted fused list") {
  const std::vector<LightconeBox> boxes = {
      LightconeBox(2.0, 3.0, 2.0, 3.0), LightconeBox(0.0, 1.0, 0.0, 1.0)};
  const std::vector<LightconeBox> swapped = {boxes[1], boxes[0]};
  CHECK(CausalRegion::from_boxes(boxes) == CausalRegion::from_boxes(swapped));
  // Overlapping boxes fuse into the region they actually cover.
  const CausalRegion overlap = CausalRegion::from_boxes(
      {LightconeBox(0.0, 2.0, 0.0, 2.0), LightconeBox(1.0, 3.0, 1.0, 3.0)});
  CHECK(overlap.contains_uv(2.5, 2.5));
  CHECK(overlap.contains_uv(0.5, 0.5));
  CHECK(!overlap.contains_uv(0.5, 2.5));
}

TEST_CASE("boost covariance is exact") {
  const PoincareElement1d boost{0.7, 0.0, 0.0, false, false};
  const CausalRegion d = c(-1.0, 2.0);
  CHECK(poincare_apply(boost, causal_complement(d)) ==
        causal_complement(poincare_apply(boost, d)));
  // The wedge is boost-invariant.
  CHECK(poincare_apply(boost, kRightWedge) == kRightWedge);
  // Parity swaps the wedges.
  const PoincareElement1d par{0.0, 0.0, 0.0, true, false};
  CHECK(poincare_apply(par, kRightWedge) ==
        CausalRegion::box(0.0, kInf, -kInf, 0.0));
  // A full reflection group element squares to the identity.
  const PoincareElement1d tr{0.0, 0.0, 0.0, false, true};
  CHECK(poincare_apply(tr, poincare_apply(tr, d)) == d);
}

TEST_CASE("translation covariance survives complement exactly") {
  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const double lo = rng.uniform(-3.0, 3.0);
    const double len = rng.uniform(0.1, 2.0);
    const CausalRegion d = c(lo, lo + len);
    const PoincareElement1d g{0.0, rng.uniform(-2.0, 2.0),
                              rng.uniform(-2.0, 2.0), false, false};
    CHECK(poincare_apply(g, causal_complement(d)) ==
          causal_complement(poincare_apply(g, d)));
  }
}

TEST_CASE("double complement is idempotent on unions of diamonds") {
  Rng rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SpatialInterval> family;
    double cursor = rng.uniform(-4.0, -3.0);
    const int pieces = rng.uniform_int(1, 3);
    for (int i = 0; i < pieces; ++i) {
      const double len = rng.uniform(0.2, 1.0);
      family.push_back({cursor, cursor + len});
      cursor += len + rng.uniform(0.5, 1.5);
    }
    const CausalRegion o = spatial_completion(family);
    CHECK(o.complete());
    CHECK(causal_completion(o) == o);
    const CausalRegion oc = causal_complement(o);
    CHECK(causal_complement(oc) == o);
    CHECK(oc.complete());
  }
}
