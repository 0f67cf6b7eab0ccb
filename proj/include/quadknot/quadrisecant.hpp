#pragma once

// Quadrisecants: enumeration over edge quadruples, classification by the
// dihedral order of the four knot positions, quintisecant detection.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "knot.hpp"
#include "parallel.hpp"
#include "quadric.hpp"

namespace quadknot {

enum class QuadType { Simple, Flipped, Alternating };

inline const char* to_string(QuadType q) {
  switch (q) {
    case QuadType::Simple: return "simple";
    case QuadType::Flipped: return "flipped";
    case QuadType::Alternating: return "alternating";
  }
  return "?";
}

// Dihedral label of each type, relative to line order abcd.
inline const char* knot_order_label(QuadType q) {
  switch (q) {
    case QuadType::Simple: return "abcd";
    case QuadType::Flipped: return "abdc";
    case QuadType::Alternating: return "acbd";
  }
  return "?";
}

struct Quadrisecant {
  std::array<KnotPoint, 4> points;  // line order a, b, c, d
  PluckerLine line;                 // canonical orientation, a first
  QuadType qtype = QuadType::Simple;
  std::string knot_order;
  bool vertex_adjacent = false;

  std::array<int, 4> edges() const {
    return {points[0].edge, points[1].edge, points[2].edge, points[3].edge};
  }
  std::array<int, 4> sorted_edges() const {
    auto e = edges();
    std::sort(e.begin(), e.end());
    return e;
  }
};

// s[i] is the arclength of the i-th point in line order. The class is the
// label cyclically opposite to a in knot order: c simple, d flipped, b
// alternating. Invariant under reversing either the line or the knot.
inline QuadType classify_quadrisecant(const std::array<double, 4>& s, double length, double eps = 0.0) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      double g = std::fmod(std::abs(s[i] - s[j]), length);
      g = std::min(g, length - g);
      if (g <= eps) throw CoincidentPoints("quadrisecant points share an arclength position");
    }
  std::array<int, 4> idx{0, 1, 2, 3};
  auto fwd = [&](int i) {
    double g = std::fmod(s[i] - s[0], length);
    return g < 0.0 ? g + length : g;
  };
  std::sort(idx.begin(), idx.end(), [&](int x, int y) { return fwd(x) < fwd(y); });
  switch (idx[2]) {
    case 2: return QuadType::Simple;
    case 3: return QuadType::Flipped;
    default: return QuadType::Alternating;
  }
}

inline QuadType classify_quadrisecant(const PolygonalKnot& k, const std::array<KnotPoint, 4>& p) {
  return classify_quadrisecant({p[0].s, p[1].s, p[2].s, p[3].s}, k.length(),
                               k.tolerance().eps_match * k.length());
}

struct LineHit {
  int edge = 0;
  double t = 0.0;      // on the edge
  double param = 0.0;  // along the line
  bool contained = false;
  double param_end = 0.0;  // contained edges span [param, param_end]
};

// Intersection of a line with the whole knot, grouped into components
// (hits closer than eps_match * scale along the line are merged).
struct LineKnotIntersection {
  std::vector<LineHit> hits;
  int components = 0;
};

inline LineKnotIntersection line_knot_intersection(const PolygonalKnot& k, const PluckerLine& line) {
  const ToleranceConfig& tol = k.tolerance();
  const double eps = tol.eps_match * tol.scale;
  LineKnotIntersection out;
  const Point3 o = line.anchor();
  for (int e = 0; e < k.size(); ++e) {
    const Point3& P = k.vertex(e);
    const Vec3 D = k.edge_vector(e);
    const auto ap = closest_approach(P, D, o, line.d());
    if (ap.parallel) {
      if (line.distance_to(P) <= eps) {
        const double a = line.param_of(P), b = line.param_of(k.vertex(e + 1));
        out.hits.push_back({e, 0.0, std::min(a, b), true, std::max(a, b)});
      }
      continue;
    }
    if (ap.distance > eps) continue;
    const double slack = eps / D.norm();
    if (ap.s < -slack || ap.s > 1.0 + slack) continue;
    const double t = std::clamp(ap.s, 0.0, 1.0);
    const double param = line.param_of(lerp(P, k.vertex(e + 1), t));
    out.hits.push_back({e, t, param, false, param});
  }
  std::vector<LineHit> sorted = out.hits;
  std::sort(sorted.begin(), sorted.end(), [](const LineHit& a, const LineHit& b) { return a.param < b.param; });
  double reach = -std::numeric_limits<double>::infinity();
  for (const auto& h : sorted) {
    if (h.param > reach + eps) ++out.components;
    reach = std::max(reach, h.param_end);
  }
  return out;
}

struct QuintisecantRecord {
  PluckerLine line;
  int components = 0;
  std::array<int, 4> edges{};
};

namespace detail {

// Valid quadruples: no edge adjacent to two others (that would put three
// consecutive edges on the line).
inline bool valid_quadruple(const PolygonalKnot& k, const std::array<int, 4>& e) {
  for (int a = 0; a < 4; ++a) {
    int adj = 0;
    for (int b = 0; b < 4; ++b)
      if (a != b && k.adjacent_edges(e[a], e[b])) ++adj;
    if (adj >= 2) return false;
  }
  return true;
}

struct PlaneEq {
  Vec3 n;  // unit
  double h = 0.0;
};

inline PlaneEq plane_of_adjacent(const PolygonalKnot& k, int ep, int eq) {
  const int v = k.wrap(ep + 1) == k.wrap(eq) ? k.wrap(eq) : k.wrap(ep);
  const Point3& V = k.vertex(v);
  const Vec3 a = k.edge_vector(ep), b = k.edge_vector(eq);
  Vec3 n = a.cross(b);
  n = n / n.norm();
  return {n, n.dot(V)};
}

inline std::optional<Point3> pierce(const PolygonalKnot& k, int e, const PlaneEq& pl) {
  const ToleranceConfig& tol = k.tolerance();
  const Point3& P = k.vertex(e);
  const Vec3 D = k.edge_vector(e);
  const double den = pl.n.dot(D);
  const double h = pl.n.dot(P) - pl.h;
  if (std::abs(den) <= tol.eps_coplanar * D.norm()) {
    if (std::abs(h) <= tol.eps_coplanar * tol.scale)
      throw GenericityViolation("edge " + std::to_string(e) + " lies in the plane of an adjacent pair");
    return std::nullopt;
  }
  return P - D * (h / den);
}

inline std::vector<PluckerLine> quad_candidates(const PolygonalKnot& k, const std::array<int, 4>& e) {
  const ToleranceConfig& tol = k.tolerance();
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (k.adjacent_edges(e[a], e[b])) pairs.emplace_back(a, b);

  std::vector<PluckerLine> out;
  if (pairs.empty()) {
    std::array<PluckerLine, 4> L;
    for (int a = 0; a < 4; ++a) L[a] = k.edge_line(e[a]);
    for (int first = 0; first < 2; ++first) {
      const auto r = transversals_four_lines(L[first], L[first + 1], L[first + 2], L[(first + 3) % 4], tol);
      if (r.infinite_family)
        throw GenericityViolation("edge line lies on the regulus of three other edges");
      out.insert(out.end(), r.lines.begin(), r.lines.end());
    }
  } else if (pairs.size() == 1) {
    // In the plane of the adjacent pair, through the pierce points of the
    // other two. A line through the shared vertex meets both edges in the same
    // point, so it is not a quadrisecant.
    const auto [a, b] = pairs.front();
    std::array<int, 2> rest{};
    int r = 0;
    for (int c = 0; c < 4; ++c)
      if (c != a && c != b) rest[r++] = c;
    const PlaneEq pl = plane_of_adjacent(k, e[a], e[b]);
    const auto p1 = pierce(k, e[rest[0]], pl), p2 = pierce(k, e[rest[1]], pl);
    if (p1 && p2 && distance(*p1, *p2) > tol.eps_match * tol.scale) out.push_back(PluckerLine::through(*p1, *p2));
  } else {
    const PlaneEq p1 = plane_of_adjacent(k, e[pairs[0].first], e[pairs[0].second]);
    const PlaneEq p2 = plane_of_adjacent(k, e[pairs[1].first], e[pairs[1].second]);
    const Vec3 dir = p1.n.cross(p2.n);
    const double s2 = dir.squared_norm();
    if (s2 > tol.eps_coplanar * tol.eps_coplanar) {
      const double c = p1.n.dot(p2.n);
      const double den = 1.0 - c * c;
      const Point3 x0 = p1.n * ((p1.h - p2.h * c) / den) + p2.n * ((p2.h - p1.h * c) / den);
      out.push_back(PluckerLine::along(x0, dir));
    }
  }
  return out;
}

// Clips a candidate line to the four closed edges and builds the
// quadrisecant; nullopt if it misses an edge or two points coincide.
inline std::optional<Quadrisecant> clip_candidate(const PolygonalKnot& k, const std::array<int, 4>& e,
                                                  const PluckerLine& cand) {
  const ToleranceConfig& tol = k.tolerance();
  const double eps = tol.eps_match * tol.scale;
  const PluckerLine line = cand.canonical();
  std::array<std::pair<double, KnotPoint>, 4> pts;
  for (int a = 0; a < 4; ++a) {
    const Point3& P = k.vertex(e[a]);
    const Vec3 D = k.edge_vector(e[a]);
    const auto ap = closest_approach(P, D, line.anchor(), line.d());
    if (ap.parallel || ap.distance > eps) return std::nullopt;
    const double slack = eps / D.norm();
    if (ap.s < -slack || ap.s > 1.0 + slack) return std::nullopt;
    const KnotPoint kp = k.point_on_edge(e[a], std::clamp(ap.s, 0.0, 1.0));
    pts[a] = {line.param_of(kp.position), kp};
  }
  std::sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (int a = 0; a + 1 < 4; ++a)
    if (pts[a + 1].first - pts[a].first <= eps) return std::nullopt;
  Quadrisecant q;
  for (int a = 0; a < 4; ++a) q.points[a] = pts[a].second;
  q.line = line;
  q.qtype = classify_quadrisecant(k, q.points);
  q.knot_order = knot_order_label(q.qtype);
  for (const auto& p : q.points)
    for (int v : {p.edge, p.edge + 1})
      if (distance(p.position, k.vertex(v)) <= eps) q.vertex_adjacent = true;
  return q;
}

inline bool quad_less(const Quadrisecant& x, const Quadrisecant& y) {
  const auto ex = x.sorted_edges(), ey = y.sorted_edges();
  if (ex != ey) return ex < ey;
  return line_less(x.line, y.line);
}

}  // namespace detail

struct QuadrisecantSearch {
  std::vector<Quadrisecant> quadrisecants;
  std::vector<QuintisecantRecord> quintisecants;
  int quadruples_examined = 0;
};

// Full search that records quintisecant lines instead of throwing.
inline QuadrisecantSearch find_quadrisecants(const PolygonalKnot& k) {
  const int n = k.size();
  std::vector<std::array<int, 4>> quads;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int d = c + 1; d < n; ++d)
          if (std::array<int, 4> e{a, b, c, d}; detail::valid_quadruple(k, e)) quads.push_back(e);

  std::vector<std::vector<Quadrisecant>> found(quads.size());
  parallel_for(quads.size(), [&](std::size_t i) {
    for (const auto& cand : detail::quad_candidates(k, quads[i])) {
      auto q = detail::clip_candidate(k, quads[i], cand);
      if (!q) continue;
      bool dup = false;
      for (const auto& f : found[i]) dup = dup || same_line(f.line, q->line, k.tolerance());
      if (!dup) found[i].push_back(*q);
    }
  });

  QuadrisecantSearch out;
  out.quadruples_examined = static_cast<int>(quads.size());
  for (auto& list : found)
    for (auto& q : list) {
      bool dup = false;
      for (const auto& f : out.quadrisecants) dup = dup || same_line(f.line, q.line, k.tolerance());
      if (dup) continue;
      const auto hit = line_knot_intersection(k, q.line);
      if (hit.components >= 5) {
        bool seen = false;
        for (const auto& r : out.quintisecants) seen = seen || same_line(r.line, q.line, k.tolerance());
        if (!seen) out.quintisecants.push_back({q.line, hit.components, q.sorted_edges()});
        continue;
      }
      out.quadrisecants.push_back(std::move(q));
    }
  std::sort(out.quadrisecants.begin(), out.quadrisecants.end(), detail::quad_less);
  return out;
}

// All quadrisecants, canonically sorted. Throws QuintisecantFound if any
// candidate line meets the knot in five or more components.
inline std::vector<Quadrisecant> quadrisecants(const PolygonalKnot& k) {
  auto s = find_quadrisecants(k);
  if (!s.quintisecants.empty()) {
    const auto& r = s.quintisecants.front();
    std::ostringstream os;
    os.precision(17);
    os << "line " << r.line << " meets the knot in " << r.components << " components";
    throw QuintisecantFound(os.str(), r.components);
  }
  return std::move(s.quadrisecants);
}

struct QuadCensus {
  int total = 0, simple = 0, flipped = 0, alternating = 0;
  bool operator==(const QuadCensus&) const = default;
};

inline QuadCensus census(const std::vector<Quadrisecant>& qs) {
  QuadCensus c;
  for (const auto& q : qs) {
    ++c.total;
    if (q.qtype == QuadType::Simple) ++c.simple;
    if (q.qtype == QuadType::Flipped) ++c.flipped;
    if (q.qtype == QuadType::Alternating) ++c.alternating;
  }
  return c;
}

// Order classes of the four trisecants abc, abd, acd, bcd carried by q.
inline std::array<OrderClass, 4> sub_trisecant_classes(const PolygonalKnot& k, const Quadrisecant& q) {
  const auto& p = q.points;
  return {cyclic_order_class(k, p[0], p[1], p[2]), cyclic_order_class(k, p[0], p[1], p[3]),
          cyclic_order_class(k, p[0], p[2], p[3]), cyclic_order_class(k, p[1], p[2], p[3])};
}

}  // namespace quadknot
