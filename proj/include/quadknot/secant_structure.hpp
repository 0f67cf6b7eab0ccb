#pragma once

// Projections of the trisecant manifold to the secant annulus K^2 minus the
// fattened diagonal, their double points, and distances to the two sides of
// the diagonal.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "quadrisecant.hpp"
#include "transversal.hpp"

namespace quadknot {

enum class Projection { P12, P13, P23 };

inline const char* to_string(Projection p) {
  switch (p) {
    case Projection::P12: return "pi12";
    case Projection::P13: return "pi13";
    case Projection::P23: return "pi23";
  }
  return "?";
}

// Kept slots and the dropped slot of each projection.
inline std::array<int, 3> projection_slots(Projection p) {
  switch (p) {
    case Projection::P12: return {0, 1, 2};
    case Projection::P13: return {0, 2, 1};
    case Projection::P23: return {1, 2, 0};
  }
  return {0, 1, 2};
}

struct SecantPoint {
  double s1 = 0.0, s2 = 0.0;
  int edge1 = 0, edge2 = 0;
  double t1 = 0.0, t2 = 0.0;  // local edge parameters
};

struct ProjectedCurve {
  int interval = -1;
  Projection which = Projection::P12;
  std::array<int, 2> edges{};  // edges of the kept slots
  int dropped_edge = 0;
  std::vector<SecantPoint> polyline;
  // Limit of a half-open interval at its degenerate end (not on the curve).
  std::optional<SecantPoint> open_end;
  OrderClass order_class = OrderClass::Same;
};

inline ProjectedCurve project(const TrisecantInterval& iv, Projection which, int interval_id = -1) {
  const auto slots = projection_slots(which);
  ProjectedCurve c;
  c.interval = interval_id;
  c.which = which;
  c.edges = {iv.edges[slots[0]], iv.edges[slots[1]]};
  c.dropped_edge = iv.edges[slots[2]];
  c.order_class = iv.order_class;
  c.polyline.reserve(iv.samples.size());
  for (const auto& t : iv.samples) {
    const KnotPoint &a = t.points[slots[0]], &b = t.points[slots[1]];
    c.polyline.push_back({a.s, b.s, a.edge, b.edge, a.t, b.t});
  }
  for (const auto& end : iv.ends)
    if (!end.closed()) {
      const KnotPoint &a = end.trisecant.points[slots[0]], &b = end.trisecant.points[slots[1]];
      c.open_end = SecantPoint{a.s, b.s, a.edge, b.edge, a.t, b.t};
    }
  return c;
}

inline std::vector<ProjectedCurve> project_all(const TrisecantManifold& m, Projection which) {
  std::vector<ProjectedCurve> out;
  out.reserve(m.intervals.size());
  for (std::size_t i = 0; i < m.intervals.size(); ++i)
    out.push_back(project(m.intervals[i], which, static_cast<int>(i)));
  return out;
}

struct DoublePoint {
  SecantPoint location;
  std::array<int, 2> curves{};  // indices into the curve list
  std::array<Trisecant, 2> witness;
  PluckerLine line;
};

namespace detail {

// Coefficients of A + B t1 + C t2 + D t1 t2, the condition that the line
// through x(t1) on e1 and y(t2) on e2 meets the line of e.
struct Bilinear {
  double A, B, C, D;
};

inline Bilinear meet_condition(const PolygonalKnot& k, int e1, int e2, int e) {
  const Point3& Pe = k.vertex(e);
  const Vec3 De = k.edge_vector(e);
  const Vec3 u0 = k.vertex(e1) - Pe, v0 = k.vertex(e2) - Pe;
  const Vec3 D1 = k.edge_vector(e1), D2 = k.edge_vector(e2);
  return {triple(u0, v0, De), triple(D1, v0, De), triple(u0, D2, De), triple(D1, D2, De)};
}

inline std::vector<double> real_roots(double c0, double c1, double c2) {
  const double mag = std::max({std::abs(c0), std::abs(c1), std::abs(c2)});
  if (mag == 0.0) return {};
  if (std::abs(c2) <= 1e-14 * mag) {
    if (std::abs(c1) <= 1e-14 * mag) return {};
    return {-c0 / c1};
  }
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc < 0.0) return {};
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (c1 + (c1 >= 0.0 ? sq : -sq));
  std::vector<double> r;
  if (q != 0.0) r = {q / c2, c0 / q};
  else r = {0.0};
  std::sort(r.begin(), r.end());
  return r;
}

// Third point of the trisecant through x and y in slot `dropped`, checked
// against the line order demanded by the projection.
inline std::optional<Trisecant> complete_trisecant(const PolygonalKnot& k, Projection which,
                                                   const std::array<int, 2>& edges, double t1, double t2,
                                                   int dropped_edge) {
  const ToleranceConfig& tol = k.tolerance();
  const double eps = tol.eps_match * tol.scale;
  const KnotPoint x = k.point_on_edge(edges[0], t1), y = k.point_on_edge(edges[1], t2);
  const Vec3 xy = y.position - x.position;
  if (xy.norm() <= eps) return std::nullopt;
  const Point3& P = k.vertex(dropped_edge);
  const Vec3 D = k.edge_vector(dropped_edge);
  const auto ap = closest_approach(x.position, xy, P, D);
  if (ap.parallel || ap.distance > eps) return std::nullopt;
  const double slack = eps / D.norm();
  if (ap.t < -slack || ap.t > 1.0 + slack) return std::nullopt;
  const double gap = eps / xy.norm();
  const double s = ap.s;
  const bool order_ok = which == Projection::P12   ? s > 1.0 + gap
                        : which == Projection::P13 ? s > gap && s < 1.0 - gap
                                                   : s < -gap;
  if (!order_ok) return std::nullopt;
  const KnotPoint z = k.point_on_edge(dropped_edge, std::clamp(ap.t, 0.0, 1.0));
  const auto slots = projection_slots(which);
  Trisecant tr;
  tr.points[slots[0]] = x;
  tr.points[slots[1]] = y;
  tr.points[slots[2]] = z;
  tr.line = PluckerLine::through(tr.points[0].position, tr.points[2].position);
  tr.order_class = cyclic_order_class(k, tr.points[0], tr.points[1], tr.points[2]);
  const auto e = tr.edges();
  tr.kind = classify_edge_triple(k, e[0], e[1], e[2]) == SecantEdgeShape::Skew ? SecantKind::Skew
                                                                               : SecantKind::Adjacent;
  return tr;
}

struct Box {
  double lo1, hi1, lo2, hi2;
};

inline Box t_box(const ProjectedCurve& c) {
  Box b{1e300, -1e300, 1e300, -1e300};
  auto grow = [&](const SecantPoint& p) {
    b.lo1 = std::min(b.lo1, p.t1);
    b.hi1 = std::max(b.hi1, p.t1);
    b.lo2 = std::min(b.lo2, p.t2);
    b.hi2 = std::max(b.hi2, p.t2);
  };
  for (const auto& p : c.polyline) grow(p);
  if (c.open_end) grow(*c.open_end);
  return b;
}

}  // namespace detail

// Double points between projected curves of one projection. Curves are
// paired when their kept edges agree and their dropped edges differ; the
// crossing is solved exactly from the two bilinear meet conditions, with the
// sampled polylines used only for box pruning. Throws TriplePointFound if a
// point is shared by three curves.
inline std::vector<DoublePoint> double_points(const PolygonalKnot& k, const std::vector<ProjectedCurve>& curves) {
  const ToleranceConfig& tol = k.tolerance();
  const double eps = tol.eps_match;
  std::map<std::pair<int, std::array<int, 2>>, std::vector<int>> groups;
  for (std::size_t i = 0; i < curves.size(); ++i)
    groups[{static_cast<int>(curves[i].which), curves[i].edges}].push_back(static_cast<int>(i));

  std::vector<DoublePoint> out;
  for (const auto& [key, ids] : groups) {
    for (std::size_t x = 0; x < ids.size(); ++x) {
      for (std::size_t y = x + 1; y < ids.size(); ++y) {
        const ProjectedCurve &ca = curves[ids[x]], &cb = curves[ids[y]];
        if (ca.dropped_edge == cb.dropped_edge) continue;
        // Coordinates are monotone along a curve, so its box is spanned by
        // the samples plus the limit at an open end.
        const detail::Box ba = detail::t_box(ca), bb = detail::t_box(cb);
        const double pad = 1e-9;
        if (ba.hi1 + pad < bb.lo1 || bb.hi1 + pad < ba.lo1 || ba.hi2 + pad < bb.lo2 || bb.hi2 + pad < ba.lo2) continue;
        const auto f = detail::meet_condition(k, ca.edges[0], ca.edges[1], ca.dropped_edge);
        const auto g = detail::meet_condition(k, cb.edges[0], cb.edges[1], cb.dropped_edge);
        const double c0 = g.A * f.B - g.B * f.A;
        const double c1 = g.A * f.D + g.C * f.B - g.B * f.C - g.D * f.A;
        const double c2 = g.C * f.D - g.D * f.C;
        for (double t2 : detail::real_roots(c0, c1, c2)) {
          if (t2 < -eps || t2 > 1.0 + eps) continue;
          const double df = f.B + f.D * t2, dg = g.B + g.D * t2;
          const double t1 = std::abs(df) >= std::abs(dg) ? -(f.A + f.C * t2) / df : -(g.A + g.C * t2) / dg;
          if (!std::isfinite(t1) || t1 < -eps || t1 > 1.0 + eps) continue;
          const double u1 = std::clamp(t1, 0.0, 1.0), u2 = std::clamp(t2, 0.0, 1.0);
          const auto ta = detail::complete_trisecant(k, ca.which, ca.edges, u1, u2, ca.dropped_edge);
          const auto tb = detail::complete_trisecant(k, cb.which, cb.edges, u1, u2, cb.dropped_edge);
          if (!ta || !tb) continue;
          const auto slots = projection_slots(ca.which);
          const Point3 &za = ta->points[slots[2]].position, &zb = tb->points[slots[2]].position;
          if (distance(za, zb) <= tol.eps_match * tol.scale) continue;  // glued at a shared vertex
          DoublePoint dp;
          const KnotPoint &p1 = ta->points[slots[0]], &p2 = ta->points[slots[1]];
          dp.location = {p1.s, p2.s, p1.edge, p2.edge, p1.t, p2.t};
          dp.curves = {ids[x], ids[y]};
          dp.witness = {*ta, *tb};
          dp.line = ta->line.canonical();
          out.push_back(dp);
        }
      }
    }
  }

  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      const auto &a = out[i].location, &b = out[j].location;
      if (curves[out[i].curves[0]].which == curves[out[j].curves[0]].which && a.edge1 == b.edge1 &&
          a.edge2 == b.edge2 && std::abs(a.t1 - b.t1) <= eps && std::abs(a.t2 - b.t2) <= eps)
        throw TriplePointFound("three projected trisecant curves share the secant (" + std::to_string(a.s1) + ", " +
                               std::to_string(a.s2) + ")");
    }
  std::sort(out.begin(), out.end(), [](const DoublePoint& a, const DoublePoint& b) {
    return std::tie(a.location.edge1, a.location.edge2, a.location.t1, a.location.t2) <
           std::tie(b.location.edge1, b.location.edge2, b.location.t1, b.location.t2);
  });
  return out;
}

// Pairing of the two order classes at a double point.
enum class ClassPairing { SameSame, SameDifferent, DifferentDifferent };

inline const char* to_string(ClassPairing p) {
  switch (p) {
    case ClassPairing::SameSame: return "same/same";
    case ClassPairing::SameDifferent: return "same/different";
    case ClassPairing::DifferentDifferent: return "different/different";
  }
  return "?";
}

inline ClassPairing pairing(const DoublePoint& d) {
  const auto a = d.witness[0].order_class, b = d.witness[1].order_class;
  if (a != b) return ClassPairing::SameDifferent;
  return a == OrderClass::Same ? ClassPairing::SameSame : ClassPairing::DifferentDifferent;
}

// Double points grouped by their secant line. Each quadrisecant line carries
// one pi12 double point per orientation; the pair of pairings fixes its type:
// two mixed pairings alternating, one same/same with one different/different
// simple, two equal like pairings flipped.
struct DoublePointLine {
  PluckerLine line;
  std::vector<int> double_points;
  std::optional<QuadType> implied;
};

inline std::vector<DoublePointLine> group_by_line(const PolygonalKnot& k, const std::vector<DoublePoint>& dps) {
  std::vector<DoublePointLine> out;
  for (std::size_t i = 0; i < dps.size(); ++i) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const DoublePointLine& g) { return same_line(g.line, dps[i].line, k.tolerance()); });
    if (it == out.end()) {
      out.push_back({dps[i].line, {}, std::nullopt});
      it = std::prev(out.end());
    }
    it->double_points.push_back(static_cast<int>(i));
  }
  for (auto& g : out) {
    if (g.double_points.size() != 2) continue;
    const auto a = pairing(dps[g.double_points[0]]), b = pairing(dps[g.double_points[1]]);
    if (a == ClassPairing::SameDifferent && b == ClassPairing::SameDifferent)
      g.implied = QuadType::Alternating;
    else if (a != b && a != ClassPairing::SameDifferent && b != ClassPairing::SameDifferent)
      g.implied = QuadType::Simple;
    else if (a == b)
      g.implied = QuadType::Flipped;
  }
  std::sort(out.begin(), out.end(), [](const DoublePointLine& a, const DoublePointLine& b) { return line_less(a.line, b.line); });
  return out;
}

// Quadrisecant census implied by the pi12 double points.
inline QuadCensus double_point_census(const std::vector<DoublePointLine>& lines) {
  QuadCensus c;
  for (const auto& g : lines) {
    ++c.total;
    if (!g.implied) continue;
    if (*g.implied == QuadType::Simple) ++c.simple;
    if (*g.implied == QuadType::Flipped) ++c.flipped;
    if (*g.implied == QuadType::Alternating) ++c.alternating;
  }
  return c;
}

enum class DiagonalSide { Lower, Upper };

// d-metric distance (sum of the two shorter-arclength displacements) from p
// to the lower side of the fattened diagonal, {(x, y): x <= y on a common
// edge}, or to the upper side {y <= x on a common edge}.
inline double diagonal_distance(const PolygonalKnot& k, const SecantPoint& p, DiagonalSide side) {
  const double L = k.length();
  double x = k.wrap_s(p.s1), y = k.wrap_s(p.s2);
  if (side == DiagonalSide::Upper) std::swap(x, y);
  // universal cover: y sits at x + gap with gap in [0, L); only the edge
  // square may be shifted by whole turns, never one coordinate alone
  double gap = std::fmod(y - x, L);
  if (gap < 0.0) gap += L;
  const double yu = x + gap;
  double best = std::numeric_limits<double>::infinity();
  for (int e = 0; e < k.size(); ++e) {
    const double S0 = k.edge_start_s(e), len = k.edge_length(e);
    for (int m = -1; m <= 2; ++m) {
      const double S = S0 + m * L, T = S + len;
      const double cx = std::clamp(x, S, T), cy = std::clamp(yu, S, T);
      const double d = std::abs(x - cx) + std::abs(yu - cy) + std::max(0.0, cx - cy);
      best = std::min(best, d);
    }
  }
  return best;
}

// On a common closed edge (inside the fattened diagonal).
inline bool in_fat_diagonal(const PolygonalKnot& k, const SecantPoint& p) {
  const double eps = k.tolerance().eps_match;
  auto on_edge = [&](int e, int edge, double t) {
    if (edge == e) return true;
    if (k.wrap(edge + 1) == e && t >= 1.0 - eps) return true;
    if (k.wrap(edge - 1) == e && t <= eps) return true;
    return false;
  };
  for (int e = 0; e < k.size(); ++e)
    if (on_edge(e, p.edge1, p.t1) && on_edge(e, p.edge2, p.t2)) return true;
  return false;
}

// interval id, projection, s1, s2, order class
inline void write_csv(std::ostream& os, const std::vector<ProjectedCurve>& curves) {
  os << "interval,which,s1,s2,order_class\n";
  const auto old = os.precision(17);
  for (const auto& c : curves)
    for (const auto& p : c.polyline)
      os << c.interval << ',' << to_string(c.which) << ',' << p.s1 << ',' << p.s2 << ',' << to_string(c.order_class)
         << '\n';
  os.precision(old);
}

}  // namespace quadknot
