#include "modloc/causal1d.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace modloc {
namespace {

double norm_zero(double x) { return x == 0.0 ? 0.0 : x; }

struct VInterval {
  double lo, hi;
};

// merge closed intervals; touching intervals merge
std::vector<VInterval> merge_intervals(std::vector<VInterval> xs) {
  if (xs.empty()) return xs;
  std::sort(xs.begin(), xs.end(), [](const VInterval& a, const VInterval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<VInterval> out;
  out.push_back(xs.front());
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i].lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, xs[i].hi);
    } else {
      out.push_back(xs[i]);
    }
  }
  return out;
}

bool covered(const std::vector<VInterval>& merged, const VInterval& j) {
  for (const auto& m : merged)
    if (m.lo <= j.lo && j.hi <= m.hi) return true;
  return false;
}

// Canonical form of a finite union of closed boxes. Sweep the u-axis:
// between consecutive finite endpoints the v-fiber is constant, so emit the
// closed slab per merged fiber interval; at an endpoint emit a degenerate
// slab only for fiber intervals the neighboring slab closures do not cover.
// Finally fuse u-adjacent slabs with identical fibers. The output depends
// only on the fiber function u -> {v : (u, v) in union}, hence on the point
// set alone, which makes box-list equality a decision procedure for set
// equality.
std::vector<LightconeBox> canonicalize(std::vector<LightconeBox> in) {
  if (in.empty()) return in;

  std::vector<double> bps;
  for (const auto& b : in) {
    if (std::isfinite(b.u1)) bps.push_back(b.u1);
    if (std::isfinite(b.u2)) bps.push_back(b.u2);
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

  auto slab_fiber = [&](double l, double r) {
    std::vector<VInterval> f;
    for (const auto& b : in)
      if (b.u1 <= l && b.u2 >= r) f.push_back({b.v1, b.v2});
    return merge_intervals(std::move(f));
  };
  auto point_fiber = [&](double x) {
    std::vector<VInterval> f;
    for (const auto& b : in)
      if (b.u1 <= x && x <= b.u2) f.push_back({b.v1, b.v2});
    return merge_intervals(std::move(f));
  };

  std::vector<std::pair<double, double>> pieces;
  if (bps.empty()) {
    pieces.emplace_back(-kInf, kInf);
  } else {
    pieces.emplace_back(-kInf, bps.front());
    for (std::size_t i = 0; i + 1 < bps.size(); ++i)
      pieces.emplace_back(bps[i], bps[i + 1]);
    pieces.emplace_back(bps.back(), kInf);
  }

  std::vector<std::vector<VInterval>> fibers;
  fibers.reserve(pieces.size());
  for (const auto& p : pieces) fibers.push_back(slab_fiber(p.first, p.second));

  std::vector<LightconeBox> out;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (const auto& j : fibers[i])
      out.emplace_back(pieces[i].first, pieces[i].second, j.lo, j.hi);

  for (std::size_t k = 0; k < bps.size(); ++k) {
    std::vector<VInterval> nb = fibers[k];
    nb.insert(nb.end(), fibers[k + 1].begin(), fibers[k + 1].end());
    nb = merge_intervals(std::move(nb));
    for (const auto& j : point_fiber(bps[k]))
      if (!covered(nb, j)) out.emplace_back(bps[k], bps[k], j.lo, j.hi);
  }

  std::sort(out.begin(), out.end(),
            [](const LightconeBox& a, const LightconeBox& b) {
              return std::tie(a.v1, a.v2, a.u1, a.u2) <
                     std::tie(b.v1, b.v2, b.u1, b.u2);
            });
  std::vector<LightconeBox> fused;
  for (const auto& b : out) {
    if (!fused.empty() && fused.back().v1 == b.v1 && fused.back().v2 == b.v2 &&
        b.u1 <= fused.back().u2) {
      fused.back().u2 = std::max(fused.back().u2, b.u2);
    } else {
      fused.push_back(b);
    }
  }
  std::sort(fused.begin(), fused.end(),
            [](const LightconeBox& a, const LightconeBox& b) {
              return std::tie(a.u1, a.u2, a.v1, a.v2) <
                     std::tie(b.u1, b.u2, b.v1, b.v2);
            });
  return fused;
}

bool cells_contain(const std::vector<LightconeBox>& cells, double u,
                   double v) {
  for (const auto& c : cells)
    if (c.contains(u, v)) return true;
  return false;
}

bool has_point(const std::vector<UVPoint>& ps, double u, double v) {
  for (const auto& p : ps)
    if (p.u == u && p.v == v) return true;
  return false;
}

void sort_points(std::vector<UVPoint>& ps) {
  std::sort(ps.begin(), ps.end(), [](const UVPoint& a, const UVPoint& b) {
    return a.u < b.u || (a.u == b.u && a.v < b.v);
  });
}

std::vector<LightconeBox> intersect_cells(const std::vector<LightconeBox>& A,
                                          const std::vector<LightconeBox>& B) {
  std::vector<LightconeBox> cells;
  for (const auto& x : A)
    for (const auto& y : B) {
      double u1 = std::max(x.u1, y.u1), u2 = std::min(x.u2, y.u2);
      double v1 = std::max(x.v1, y.v1), v2 = std::min(x.v2, y.v2);
      if (u1 <= u2 && v1 <= v2 && !(u1 == u2 && std::isinf(u1)) &&
          !(v1 == v2 && std::isinf(v1)))
        cells.emplace_back(u1, u2, v1, v2);
    }
  return canonicalize(std::move(cells));
}

// {z : (z - y)^2 <= 0 for all y in b}, a closed set. A strictly timelike
// partner in the box exists iff z lies strictly above the min corner or
// strictly below the max corner, so the answer is the union of the two
// closed corner quadrants; a degenerate box additionally admits its whole
// null line.
std::vector<LightconeBox> box_weak_complement(const LightconeBox& b) {
  std::vector<LightconeBox> out;
  if (b.u1 != -kInf && b.v2 != kInf) out.emplace_back(-kInf, b.u1, b.v2, kInf);
  if (b.u2 != kInf && b.v1 != -kInf) out.emplace_back(b.u2, kInf, -kInf, b.v1);
  if (b.u1 == b.u2) out.emplace_back(b.u1, b.u1, -kInf, kInf);
  if (b.v1 == b.v2) out.emplace_back(-kInf, kInf, b.v1, b.v1);
  return out;
}

std::vector<LightconeBox> weak_complement(const std::vector<LightconeBox>& C) {
  std::vector<LightconeBox> acc = {LightconeBox(-kInf, kInf, -kInf, kInf)};
  for (const auto& c : C) {
    acc = intersect_cells(acc, box_weak_complement(c));
    if (acc.empty()) break;
  }
  return acc;
}

// closure of ([lo, hi] minus a list of closed intervals)
void subtract_1d(double lo, double hi, std::vector<VInterval> ts,
                 const std::function<void(double, double)>& emit) {
  ts = merge_intervals(std::move(ts));
  double cur = lo;
  for (const auto& t : ts) {
    if (t.lo > cur) emit(cur, t.lo);
    cur = std::max(cur, t.hi);
    if (cur >= hi) break;
  }
  if (cur < hi) emit(cur, hi);
}

}  // namespace

LightconeBox::LightconeBox(double u_lo, double u_hi, double v_lo, double v_hi)
    : u1(norm_zero(u_lo)),
      u2(norm_zero(u_hi)),
      v1(norm_zero(v_lo)),
      v2(norm_zero(v_hi)) {
  if (std::isnan(u1) || std::isnan(u2) || std::isnan(v1) || std::isnan(v2))
    throw std::invalid_argument("box endpoint is NaN");
  if (!(u1 <= u2) || !(v1 <= v2)) throw std::invalid_argument("box is empty");
  if ((u1 == u2 && std::isinf(u1)) || (v1 == v2 && std::isinf(v1)))
    throw std::invalid_argument("box is empty");
}

CausalRegion make_region(std::vector<LightconeBox> cells,
                         std::vector<UVPoint> punctures) {
  cells = canonicalize(std::move(cells));
  std::vector<UVPoint> ps;
  for (auto p : punctures) {
    p.u = norm_zero(p.u);
    p.v = norm_zero(p.v);
    if (cells_contain(cells, p.u, p.v) && !has_point(ps, p.u, p.v))
      ps.push_back(p);
  }
  // a fully punctured isolated point is no point at all
  for (auto it = cells.begin(); it != cells.end();) {
    if (it->u1 == it->u2 && it->v1 == it->v2 &&
        has_point(ps, it->u1, it->v1)) {
      const double pu = it->u1, pv = it->v1;
      ps.erase(std::remove_if(
                   ps.begin(), ps.end(),
                   [&](const UVPoint& p) { return p.u == pu && p.v == pv; }),
               ps.end());
      it = cells.erase(it);
    } else {
      ++it;
    }
  }
  sort_points(ps);
  CausalRegion r;
  r.cells_ = std::move(cells);
  r.punctures_ = std::move(ps);
  return r;
}

CausalRegion CausalRegion::empty() { return CausalRegion(); }

CausalRegion CausalRegion::full() { return box(-kInf, kInf, -kInf, kInf); }

CausalRegion CausalRegion::box(double u1, double u2, double v1, double v2) {
  return make_region({LightconeBox(u1, u2, v1, v2)}, {});
}

CausalRegion CausalRegion::point(double x0, double x1) {
  const double u = x0 - x1, v = x0 + x1;
  return box(u, u, v, v);
}

CausalRegion CausalRegion::from_boxes(const std::vector<LightconeBox>& boxes) {
  return make_region(boxes, {});
}

bool CausalRegion::is_full() const {
  return punctures_.empty() && cells_.size() == 1 &&
         cells_[0] == LightconeBox(-kInf, kInf, -kInf, kInf);
}

bool CausalRegion::contains_uv(double u, double v) const {
  u = norm_zero(u);
  v = norm_zero(v);
  return cells_contain(cells_, u, v) && !has_point(punctures_, u, v);
}

bool CausalRegion::complete() const {
  if (!complete_) complete_ = (causal_completion(*this) == *this);
  return *complete_;
}

CausalRegion region_union(const CausalRegion& a, const CausalRegion& b) {
  std::vector<LightconeBox> cells = a.cells();
  cells.insert(cells.end(), b.cells().begin(), b.cells().end());
  std::vector<UVPoint> punct;
  for (const auto& p : a.punctures())
    if (!b.contains_uv(p.u, p.v)) punct.push_back(p);
  for (const auto& p : b.punctures())
    if (!a.contains_uv(p.u, p.v)) punct.push_back(p);
  return make_region(std::move(cells), std::move(punct));
}

CausalRegion region_meet(const CausalRegion& a, const CausalRegion& b) {
  std::vector<LightconeBox> cells;
  for (const auto& x : a.cells())
    for (const auto& y : b.cells()) {
      double u1 = std::max(x.u1, y.u1), u2 = std::min(x.u2, y.u2);
      double v1 = std::max(x.v1, y.v1), v2 = std::min(x.v2, y.v2);
      if (u1 <= u2 && v1 <= v2 && !(u1 == u2 && std::isinf(u1)) &&
          !(v1 == v2 && std::isinf(v1)))
        cells.emplace_back(u1, u2, v1, v2);
    }
  std::vector<UVPoint> punct = a.punctures();
  punct.insert(punct.end(), b.punctures().begin(), b.punctures().end());
  return make_region(std::move(cells), std::move(punct));
}

// O' = {z : z != y and (z - y)^2 <= 0 for all y in O}. Writing M for the
// closed weak complement (the z != y clause dropped), the exact set is
// (M \ O) u (M n punctures(O)): excluding z = y across all y in O removes
// exactly the points of O itself, and dropping a puncture from O relieves
// no constraint elsewhere because weak separation is a closed condition and
// O's cells are the closure of its exact point set. Two-dimensional cells
// of M meet O in at most corner points (any deeper overlap would contain a
// timelike pair inside one box), so taking the closure of M \ O only prunes
// degenerate cells of M; the punctures of the result are the closure points
// that lie in the exact O, and those sit at corners of cell overlaps, which
// yields a finite candidate list.
CausalRegion causal_complement(const CausalRegion& o) {
  const std::vector<LightconeBox>& C = o.cells();
  const std::vector<LightconeBox> M = weak_complement(C);

  std::vector<LightconeBox> kept;
  for (const auto& d : M) {
    const bool u_deg = (d.u1 == d.u2), v_deg = (d.v1 == d.v2);
    if (!u_deg && !v_deg) {
      kept.push_back(d);
    } else if (u_deg && v_deg) {
      if (!cells_contain(C, d.u1, d.v1) ||
          has_point(o.punctures(), d.u1, d.v1))
        kept.push_back(d);
    } else if (u_deg) {
      std::vector<VInterval> ts;
      for (const auto& c : C)
        if (c.u1 <= d.u1 && d.u1 <= c.u2) {
          double lo = std::max(d.v1, c.v1), hi = std::min(d.v2, c.v2);
          if (lo <= hi) ts.push_back({lo, hi});
        }
      subtract_1d(d.v1, d.v2, std::move(ts), [&](double lo, double hi) {
        kept.emplace_back(d.u1, d.u1, lo, hi);
      });
    } else {
      std::vector<VInterval> ts;
      for (const auto& c : C)
        if (c.v1 <= d.v1 && d.v1 <= c.v2) {
          double lo = std::max(d.u1, c.u1), hi = std::min(d.u2, c.u2);
          if (lo <= hi) ts.push_back({lo, hi});
        }
      subtract_1d(d.u1, d.u2, std::move(ts), [&](double lo, double hi) {
        kept.emplace_back(lo, hi, d.v1, d.v1);
      });
    }
  }
  for (const auto& p : o.punctures())
    if (cells_contain(M, p.u, p.v)) kept.emplace_back(p.u, p.u, p.v, p.v);

  std::vector<LightconeBox> cells = canonicalize(std::move(kept));

  std::vector<UVPoint> cand;
  auto add_corners = [&](double u1, double u2, double v1, double v2) {
    for (double uu : {u1, u2})
      for (double vv : {v1, v2})
        if (std::isfinite(uu) && std::isfinite(vv)) cand.push_back({uu, vv});
  };
  for (const auto& b : cells) add_corners(b.u1, b.u2, b.v1, b.v2);
  for (const auto& c : C) add_corners(c.u1, c.u2, c.v1, c.v2);
  for (const auto& a : cells)
    for (const auto& c : C) {
      double u1 = std::max(a.u1, c.u1), u2 = std::min(a.u2, c.u2);
      double v1 = std::max(a.v1, c.v1), v2 = std::min(a.v2, c.v2);
      if (u1 <= u2 && v1 <= v2) add_corners(u1, u2, v1, v2);
    }
  for (const auto& p : o.punctures()) cand.push_back(p);

  std::vector<UVPoint> punct;
  for (const auto& q : cand) {
    if (!cells_contain(cells, q.u, q.v)) continue;
    if (!cells_contain(C, q.u, q.v)) continue;
    if (has_point(o.punctures(), q.u, q.v)) continue;
    punct.push_back(q);
  }
  return make_region(std::move(cells), std::move(punct));
}

CausalRegion causal_completion(const CausalRegion& o) {
  return causal_complement(causal_complement(o));
}

CausalRegion region_join(const CausalRegion& a, const CausalRegion& b) {
  return causal_completion(region_union(a, b));
}

CausalRegion causal_influence(const CausalRegion& o) {
  std::vector<LightconeBox> cells;
  cells.reserve(2 * o.cells().size());
  for (const auto& c : o.cells()) {
    cells.emplace_back(c.u1, kInf, c.v1, kInf);
    cells.emplace_back(-kInf, c.u2, -kInf, c.v2);
  }
  return make_region(std::move(cells), {});
}

bool region_contains(const CausalRegion& outer, const CausalRegion& inner) {
  std::vector<LightconeBox> cells = outer.cells();
  cells.insert(cells.end(), inner.cells().begin(), inner.cells().end());
  return canonicalize(std::move(cells)) == outer.cells();
}

bool region_separated(const CausalRegion& a, const CausalRegion& b) {
  return region_contains(causal_complement(b), a);
}

bool is_complete(const CausalRegion& o) { return o.complete(); }

std::vector<SpatialInterval> time_slice(const CausalRegion& o, double t) {
  const CausalRegion reach = causal_influence(o);
  std::vector<VInterval> xs;
  for (const auto& c : reach.cells()) {
    double lo = std::max(t - c.u2, c.v1 - t);
    double hi = std::min(t - c.u1, c.v2 - t);
    if (lo <= hi) xs.push_back({norm_zero(lo), norm_zero(hi)});
  }
  xs = merge_intervals(std::move(xs));
  std::vector<SpatialInterval> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back({x.lo, x.hi});
  return out;
}

CausalRegion spatial_completion(std::vector<SpatialInterval> intervals,
                                std::ostream* notice) {
  for (auto& iv : intervals) {
    iv.lo = norm_zero(iv.lo);
    iv.hi = norm_zero(iv.hi);
    if (std::isnan(iv.lo) || std::isnan(iv.hi))
      throw std::invalid_argument("spatial interval endpoint is NaN");
    if (!(iv.lo <= iv.hi) || (iv.lo == iv.hi && std::isinf(iv.lo)))
      throw std::invalid_argument("empty spatial interval");
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const SpatialInterval& a, const SpatialInterval& b) {
              return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
            });
  std::vector<SpatialInterval> merged;
  bool merges = false;
  for (const auto& iv : intervals) {
    if (!merged.empty() && iv.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
      merges = true;
    } else {
      merged.push_back(iv);
    }
  }
  if (merges) {
    std::ostream& sink = notice ? *notice : std::cerr;
    sink << "note: overlapping spatial intervals were merged\n";
  }
  std::vector<LightconeBox> cells;
  cells.reserve(merged.size());
  for (const auto& iv : merged)
    cells.emplace_back(-iv.hi, -iv.lo, iv.lo, iv.hi);
  return make_region(std::move(cells), {});
}

bool region_separated(const std::vector<SpatialInterval>& a, double a_time,
                      const std::vector<SpatialInterval>& b, double b_time) {
  PoincareElement1d ga, gb;
  ga.a0 = a_time;
  gb.a0 = b_time;
  return region_separated(poincare_apply(ga, spatial_completion(a)),
                          poincare_apply(gb, spatial_completion(b)));
}

CausalRegion poincare_apply(const PoincareElement1d& g, const CausalRegion& o) {
  const double su = std::exp(-g.rapidity), sv = std::exp(g.rapidity);
  const double du = g.a0 - g.a1, dv = g.a0 + g.a1;
  auto map_pt = [&](double u, double v) {
    if (g.time_reflect) {
      const double nu = -v, nv = -u;
      u = nu;
      v = nv;
    }
    if (g.parity) std::swap(u, v);
    return std::pair<double, double>(su * u + du, sv * v + dv);
  };
  std::vector<LightconeBox> cells;
  cells.reserve(o.cells().size());
  for (const auto& c : o.cells()) {
    auto [au, av] = map_pt(c.u1, c.v1);
    auto [bu, bv] = map_pt(c.u2, c.v2);
    cells.emplace_back(std::min(au, bu), std::max(au, bu), std::min(av, bv),
                       std::max(av, bv));
  }
  std::vector<UVPoint> punct;
  punct.reserve(o.punctures().size());
  for (const auto& p : o.punctures()) {
    auto [pu, pv] = map_pt(p.u, p.v);
    punct.push_back({pu, pv});
  }
  return make_region(std::move(cells), std::move(punct));
}

}  // namespace modloc
