#pragma once

#include <limits>
#include <optional>
#include <ostream>
#include <vector>

namespace modloc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed box in lightcone coordinates u = x0 - x1, v = x0 + x1, so that
// (x - y)^2 = du * dv. Endpoints may be +-inf; empty boxes are rejected.
struct LightconeBox {
  double u1, u2, v1, v2;
  LightconeBox(double u_lo, double u_hi, double v_lo, double v_hi);
  bool contains(double u, double v) const {
    return u1 <= u && u <= u2 && v1 <= v && v <= v2;
  }
  friend bool operator==(const LightconeBox&, const LightconeBox&) = default;
};

struct UVPoint {
  double u = 0, v = 0;
  friend bool operator==(const UVPoint&, const UVPoint&) = default;
};

struct SpatialInterval {
  double lo, hi;  // closed; lo may be -inf, hi may be +inf
};

// Region in the calculus of the non-timelike relation x ~ y, which demands
// x != y as well as (x-y)^2 <= 0. The point set is (union of cells) minus
// the punctures: cells form the closure in a canonical sorted box list, and
// the punctures are the finitely many closure points the exact set misses.
// Punctures appear where a region touches its own complement (a wedge's
// complement is the opposite closed wedge minus the shared corner, because
// the corner fails x != y). Tracking them keeps the whole calculus exact:
// all equalities below are decidable with no epsilons, since every
// construction is piecewise affine in the endpoints.
class CausalRegion {
 public:
  CausalRegion() = default;  // empty

  static CausalRegion empty();
  static CausalRegion full();
  static CausalRegion box(double u1, double u2, double v1, double v2);
  static CausalRegion point(double x0, double x1);
  static CausalRegion from_boxes(const std::vector<LightconeBox>& boxes);

  const std::vector<LightconeBox>& cells() const noexcept { return cells_; }
  const std::vector<UVPoint>& punctures() const noexcept { return punctures_; }
  bool is_empty() const noexcept { return cells_.empty(); }
  bool is_full() const;
  // exact membership: inside some cell and not a puncture
  bool contains_uv(double u, double v) const;
  bool contains_event(double x0, double x1) const {
    return contains_uv(x0 - x1, x0 + x1);
  }
  // O'' = O; computed lazily and cached
  bool complete() const;

  friend bool operator==(const CausalRegion& a, const CausalRegion& b) {
    return a.cells_ == b.cells_ && a.punctures_ == b.punctures_;
  }

 private:
  friend CausalRegion make_region(std::vector<LightconeBox> cells,
                                  std::vector<UVPoint> punctures);
  std::vector<LightconeBox> cells_;
  std::vector<UVPoint> punctures_;
  mutable std::optional<bool> complete_;
};

CausalRegion region_union(const CausalRegion& a, const CausalRegion& b);
CausalRegion region_meet(const CausalRegion& a, const CausalRegion& b);

// O' = {x : x ~ y for all y in O}; empty' = full.
CausalRegion causal_complement(const CausalRegion& o);
CausalRegion causal_completion(const CausalRegion& o);  // O''
// (O1 u O2)''
CausalRegion region_join(const CausalRegion& a, const CausalRegion& b);
// J+(O) u J-(O), reported as its closure
CausalRegion causal_influence(const CausalRegion& o);

// Containment and separation follow the closed-box order (punctures are
// measure-zero edge defects and do not count against containment), so
// lightlike touching regions are separated.
bool region_contains(const CausalRegion& outer, const CausalRegion& inner);
bool region_separated(const CausalRegion& a, const CausalRegion& b);
bool is_complete(const CausalRegion& o);

// x1-intervals of the causal influence of O on the slice {x0 = t}.
std::vector<SpatialInterval> time_slice(const CausalRegion& o, double t);

// c(A) for A a finite union of closed spatial intervals at time zero:
// the union of the causal completions of the pieces. Overlapping or
// touching inputs are merged first, with a notice written to the sink
// (stderr when the sink is null).
CausalRegion spatial_completion(std::vector<SpatialInterval> intervals,
                                std::ostream* notice = nullptr);

// Convenience separation test for interval families placed at two times:
// every pair must avoid the open light-fattening overlap, so lightlike
// touching is separated.
bool region_separated(const std::vector<SpatialInterval>& a, double a_time,
                      const std::vector<SpatialInterval>& b, double b_time);

// Geometric transformations: Lambda = boost(rapidity) . parity^p . T^tau
// applied first, then the translation (a0, a1). Boosts scale u by e^-t and
// v by e^t; parity swaps u and v; T maps (u, v) to (-v, -u).
struct PoincareElement1d {
  double rapidity = 0;
  double a0 = 0;
  double a1 = 0;
  bool parity = false;
  bool time_reflect = false;
};

CausalRegion poincare_apply(const PoincareElement1d& g, const CausalRegion& o);

}  // namespace modloc
