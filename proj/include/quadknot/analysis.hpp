#pragma once

// Total curvature, plane cuts and the second hull, thickness.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "knot.hpp"
#include "quadrisecant.hpp"
#include "rng.hpp"

namespace quadknot {

// Sum of exterior angles of the closed polygon. atan2 keeps full precision
// near pi, where backtracking edges meet.
inline double total_curvature(std::span<const Point3> poly) {
  const std::size_t n = poly.size();
  if (n < 3) throw InvalidArgument("total curvature needs at least 3 vertices");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 u = poly[i] - poly[(i + n - 1) % n];
    const Vec3 w = poly[(i + 1) % n] - poly[i];
    if (u.squared_norm() == 0.0 || w.squared_norm() == 0.0)
      throw DegenerateVertex("zero-length edge at vertex " + std::to_string(i));
    sum += std::atan2(u.cross(w).norm(), u.dot(w));
  }
  return sum;
}

inline double total_curvature(const PolygonalKnot& k) { return total_curvature(k.vertices()); }

// The closed quadrilateral a -> c -> b -> d through the points of q.
inline std::vector<Point3> inscribed_quadrilateral(const Quadrisecant& q) {
  return {q.points[0].position, q.points[2].position, q.points[1].position, q.points[3].position};
}

struct CurvaturePair {
  double before = 0.0, after = 0.0;
};

// Inserts new_vertex so that it becomes vertex `position`.
inline CurvaturePair vertex_insertion_check(std::span<const Point3> poly, const Point3& new_vertex, int position) {
  if (position < 0 || position > static_cast<int>(poly.size()))
    throw InvalidArgument("insertion position out of range");
  std::vector<Point3> grown(poly.begin(), poly.end());
  grown.insert(grown.begin() + position, new_vertex);
  return {total_curvature(poly), total_curvature(grown)};
}

struct Plane {
  Direction3 normal = Direction3::from({0, 0, 1});
  double offset = 0.0;

  static Plane through(const Point3& p, const Vec3& n) {
    const Direction3 d = Direction3::from(n);
    return {d, d.vec().dot(p)};
  }
  double signed_distance(const Point3& p) const { return normal.vec().dot(p) - offset; }
};

struct CutCount {
  int upward = 0;
  int downward = 0;
  bool infinite_flag = false;
  bool contained_flag = false;

  int total() const { return upward + downward; }
};

// Components of K cap P are maximal runs of vertices in P (after snapping
// within eps_coplanar * scale) and edge-interior crossings. A component is
// upward if preceded below or followed above, downward if preceded above or
// followed below; glancing components count both ways.
inline CutCount plane_cut_count(const PolygonalKnot& k, const Plane& p) {
  const int n = k.size();
  const double eps = k.tolerance().eps_coplanar * k.tolerance().scale;
  std::vector<int> side(n);
  for (int i = 0; i < n; ++i) {
    const double h = p.signed_distance(k.vertex(i));
    side[i] = std::abs(h) <= eps ? 0 : (h > 0.0 ? 1 : -1);
  }
  CutCount c;
  if (std::all_of(side.begin(), side.end(), [](int s) { return s == 0; })) {
    c.contained_flag = true;
    c.upward = c.downward = 1;
    return c;
  }
  auto tally = [&](int before, int after) {
    if (before < 0 || after > 0) ++c.upward;
    if (before > 0 || after < 0) ++c.downward;
  };
  // start just after an off-plane vertex so runs never wrap
  int start = 0;
  while (side[start] == 0) ++start;
  for (int step = 0; step < n; ++step) {
    const int i = (start + step) % n;
    const int j = (i + 1) % n;
    if (side[i] != 0 && side[j] != 0) {
      if (side[i] != side[j]) tally(side[i], side[j]);
    } else if (side[i] != 0 && side[j] == 0) {
      int end = j;
      while (side[end] == 0) end = (end + 1) % n;
      tally(side[i], side[end]);
    }
  }
  return c;
}

struct SecondHullWitness {
  Point3 point{};
  int planes_tested = 0;
  int min_cut = 0;
  std::optional<Plane> failing_plane;

  bool passed() const { return !failing_plane; }
};

// Deterministic planes through p: coordinate planes, planes through each
// pair of vertices, and three planes through each vertex and each edge
// midpoint (containing one coordinate direction each).
inline std::vector<Plane> hull_battery(const PolygonalKnot& k, const Point3& p) {
  std::vector<Plane> planes;
  const double eps = 1e-12 * k.tolerance().scale * k.tolerance().scale;
  auto push = [&](const Vec3& nrm) {
    if (nrm.norm() > eps) planes.push_back(Plane::through(p, nrm));
  };
  const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (const auto& a : axes) push(a);
  const int n = k.size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) push((k.vertex(i) - p).cross(k.vertex(j) - p));
  for (int i = 0; i < n; ++i) {
    const Point3 mid = lerp(k.vertex(i), k.vertex(i + 1), 0.5);
    for (const auto& a : axes) {
      push((k.vertex(i) - p).cross(a));
      push((mid - p).cross(a));
    }
  }
  return planes;
}

// Second-hull membership: every plane through p must be cut at least four
// times. Only a failure is conclusive.
inline SecondHullWitness second_hull_test(const PolygonalKnot& k, const Point3& p, int num_planes,
                                          std::uint64_t seed) {
  if (num_planes < 1) throw InvalidArgument("num_planes must be at least 1");
  SecondHullWitness w;
  w.point = p;
  w.min_cut = std::numeric_limits<int>::max();
  auto check = [&](const Plane& pl) {
    ++w.planes_tested;
    const int cuts = plane_cut_count(k, pl).total();
    w.min_cut = std::min(w.min_cut, cuts);
    if (cuts < 4) w.failing_plane = pl;
    return cuts >= 4;
  };
  for (const auto& pl : hull_battery(k, p))
    if (!check(pl)) return w;
  for (int i = 0; i < num_planes; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    if (!check(Plane::through(p, rng.on_sphere()))) return w;
  }
  return w;
}

inline Point3 midsegment_witness(const Quadrisecant& q) {
  if (q.qtype != QuadType::Alternating)
    throw NotAlternating(std::string("midsegment witness needs an alternating quadrisecant, got ") + to_string(q.qtype));
  return lerp(q.points[1].position, q.points[2].position, 0.5);
}

// Twice the smallest circumradius over triples of sample points, samples at
// t = i / m on every edge. Triples with two points on the same or adjacent
// closed edges are skipped (they only see the corner or the flat edge), as
// are collinear ones. Below six edges only the same-edge rule applies.
// Sample sets nest under doubling m, so the estimate never increases.
inline double thickness_estimate(const PolygonalKnot& k, int samples_per_edge) {
  if (samples_per_edge < 2) throw InvalidArgument("samples_per_edge must be at least 2");
  const int n = k.size(), m = samples_per_edge;
  struct Sample {
    Point3 x;
    int e0, e1;  // closed edges containing the sample (equal unless at a vertex)
  };
  std::vector<Sample> pts;
  pts.reserve(static_cast<std::size_t>(n) * m);
  for (int e = 0; e < n; ++e)
    for (int i = 0; i < m; ++i)
      pts.push_back({k.point_on_edge(e, static_cast<double>(i) / m).position, e, i == 0 ? k.wrap(e - 1) : e});
  // fewer than six edges have no three pairwise non-adjacent ones
  const int reach = n >= 6 ? 1 : 0;
  auto near = [n, reach](int x, int y) {
    const int d = std::abs(x - y);
    return std::min(d, n - d) <= reach;
  };
  auto share = [&](const Sample& a, const Sample& b) {
    return near(a.e0, b.e0) || near(a.e0, b.e1) || near(a.e1, b.e0) || near(a.e1, b.e1);
  };
  const double eps = k.tolerance().eps_collinear;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t N = pts.size();
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = a + 1; b < N; ++b) {
      if (share(pts[a], pts[b])) continue;
      const Vec3 ab = pts[b].x - pts[a].x;
      const double lab = ab.norm();
      for (std::size_t c = b + 1; c < N; ++c) {
        if (share(pts[a], pts[c]) || share(pts[b], pts[c])) continue;
        const Vec3 ac = pts[c].x - pts[a].x;
        const double area2 = ab.cross(ac).norm();
        const double lac = ac.norm(), lbc = (pts[c].x - pts[b].x).norm();
        if (area2 <= eps * lab * lac) continue;
        best = std::min(best, lab * lac * lbc / (2.0 * area2));
      }
    }
  return 2.0 * best;
}

inline double ropelength(const PolygonalKnot& k, int samples_per_edge) {
  return k.length() / thickness_estimate(k, samples_per_edge);
}

}  // namespace quadknot
