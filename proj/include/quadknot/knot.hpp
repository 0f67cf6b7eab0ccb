#pragma once

// Closed polygonal knots with an arclength parameterization.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "geom_core.hpp"

namespace quadknot {

enum class OrderClass { Same, Different };

inline const char* to_string(OrderClass c) { return c == OrderClass::Same ? "same" : "different"; }

inline OrderClass opposite(OrderClass c) {
  return c == OrderClass::Same ? OrderClass::Different : OrderClass::Same;
}

// A point of the knot. `edge` runs from vertex `edge` to vertex `edge + 1`.
struct KnotPoint {
  int edge = 0;
  double t = 0.0;
  double s = 0.0;
  Point3 position{};
};

class PolygonalKnot {
 public:
  // Validates n >= 4, distinct consecutive vertices, non-collinear adjacent
  // edges and embeddedness. Throws DegenerateInput with the violating indices.
  // The tolerance scale is reset to the bounding-box diagonal of the vertices.
  explicit PolygonalKnot(std::vector<Point3> vertices, std::string name = {},
                         ToleranceConfig tolerance = {})
      : PolygonalKnot(std::move(vertices), std::move(name), tolerance, false) {}

  // Keeps the scale of `tol` instead of the bounding-box default.
  static PolygonalKnot with_fixed_scale(std::vector<Point3> vertices, ToleranceConfig tol,
                                        std::string name = {}) {
    return PolygonalKnot(std::move(vertices), std::move(name), tol, true);
  }

 private:
  PolygonalKnot(std::vector<Point3> vertices, std::string name, ToleranceConfig tolerance,
                bool keep_scale)
      : vertices_(std::move(vertices)), name_(std::move(name)), tol_(tolerance) {
    const int n = static_cast<int>(vertices_.size());
    if (n < 4) throw DegenerateInput("a knot needs at least 4 vertices, got " + std::to_string(n));
    for (int i = 0; i < n; ++i)
      if (!vertices_[i].finite()) throw DegenerateInput("non-finite vertex coordinate", {i});

    if (!keep_scale) tol_.scale = bbox_diagonal(vertices_);
    if (!(tol_.scale > 0.0)) throw DegenerateInput("all vertices coincide");
    tol_.validate();

    cumulative_.resize(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
      const double len = edge_vector(i).norm();
      if (len <= tol_.eps_collinear * tol_.scale)
        throw DegenerateInput("repeated vertex", {i, (i + 1) % n});
      cumulative_[i + 1] = cumulative_[i] + len;
    }
    length_ = cumulative_[n];

    for (int i = 0; i < n; ++i) {
      const Vec3 a = edge_vector((i + n - 1) % n), b = edge_vector(i);
      if (a.cross(b).norm() <= tol_.eps_collinear * a.norm() * b.norm())
        throw DegenerateInput("adjacent edges are collinear at vertex", {(i + n - 1) % n, i});
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (adjacent_edges(i, j)) continue;
        const double d = segment_segment_distance(vertex(i), vertex(i + 1), vertex(j), vertex(j + 1));
        if (d <= tol_.eps_collinear * tol_.scale)
          throw DegenerateInput("self-intersection between edges", {i, j});
      }
    }
  }

 public:
  int size() const { return static_cast<int>(vertices_.size()); }
  const std::vector<Point3>& vertices() const { return vertices_; }
  const std::string& name() const { return name_; }
  const ToleranceConfig& tolerance() const { return tol_; }
  double length() const { return length_; }

  int wrap(int i) const {
    const int n = size();
    return ((i % n) + n) % n;
  }
  const Point3& vertex(int i) const { return vertices_[wrap(i)]; }
  Vec3 edge_vector(int e) const { return vertex(e + 1) - vertex(e); }
  double edge_length(int e) const { return cumulative_[wrap(e) + 1] - cumulative_[wrap(e)]; }
  double edge_start_s(int e) const { return cumulative_[wrap(e)]; }
  PluckerLine edge_line(int e) const { return PluckerLine::through(vertex(e), vertex(e + 1)); }

  double min_edge_length() const {
    double h = std::numeric_limits<double>::infinity();
    for (int e = 0; e < size(); ++e) h = std::min(h, edge_length(e));
    return h;
  }

  bool adjacent_edges(int a, int b) const {
    a = wrap(a);
    b = wrap(b);
    return a != b && (wrap(a + 1) == b || wrap(b + 1) == a);
  }

  // Three edges that are consecutive along the knot (in any order).
  bool consecutive_triple(int a, int b, int c) const {
    int adj = (adjacent_edges(a, b) ? 1 : 0) + (adjacent_edges(b, c) ? 1 : 0) + (adjacent_edges(a, c) ? 1 : 0);
    return adj >= 2;
  }

  KnotPoint point_on_edge(int e, double t) const {
    e = wrap(e);
    KnotPoint p;
    p.edge = e;
    p.t = t;
    p.position = lerp(vertex(e), vertex(e + 1), t);
    p.s = wrap_s(cumulative_[e] + t * edge_length(e));
    return p;
  }

  // Point at arclength s (any real; wrapped into [0, L)).
  KnotPoint point_at(double s) const {
    s = wrap_s(s);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    int e = static_cast<int>(it - cumulative_.begin()) - 1;
    e = std::clamp(e, 0, size() - 1);
    const double t = (s - cumulative_[e]) / edge_length(e);
    KnotPoint p = point_on_edge(e, std::clamp(t, 0.0, 1.0));
    p.s = s;
    return p;
  }

  // All cyclic arclength arithmetic goes through wrap_s / forward_gap.
  double wrap_s(double s) const {
    double r = std::fmod(s, length_);
    if (r < 0.0) r += length_;
    if (r >= length_) r -= length_;
    return r;
  }

  // Arclength travelled going forward from a to b, in [0, L).
  double forward_gap(double sa, double sb) const { return wrap_s(sb - sa); }

  double min_nonadjacent_edge_distance() const {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < size(); ++i)
      for (int j = i + 1; j < size(); ++j)
        if (!adjacent_edges(i, j))
          best = std::min(best, segment_segment_distance(vertex(i), vertex(i + 1), vertex(j), vertex(j + 1)));
    return best;
  }

  PolygonalKnot reversed() const {
    std::vector<Point3> v(vertices_.rbegin(), vertices_.rend());
    return with_fixed_scale(std::move(v), tol_, name_);
  }

  PolygonalKnot scaled(double factor) const {
    std::vector<Point3> v;
    v.reserve(vertices_.size());
    for (const auto& p : vertices_) v.push_back(p * factor);
    ToleranceConfig t = tol_;
    t.scale *= factor;
    return with_fixed_scale(std::move(v), t, name_);
  }

 private:
  std::vector<Point3> vertices_;
  std::string name_;
  ToleranceConfig tol_;
  std::vector<double> cumulative_;
  double length_ = 0.0;
};

// Shorter arclength between two points.
inline double arc_distance(const PolygonalKnot& k, const KnotPoint& a, const KnotPoint& b) {
  const double g = std::abs(a.s - b.s);
  return std::min(g, k.length() - g);
}

// Same iff travelling forward from a reaches b before c.
inline OrderClass cyclic_order_class(const PolygonalKnot& k, double sa, double sb, double sc) {
  const double eps = k.tolerance().eps_match * k.length();
  const double ab = k.forward_gap(sa, sb), ac = k.forward_gap(sa, sc), bc = k.forward_gap(sb, sc);
  auto coincident = [&](double g) { return g <= eps || g >= k.length() - eps; };
  if (coincident(ab) || coincident(ac) || coincident(bc))
    throw CoincidentPoints("order class needs three distinct arclength positions");
  return ab < ac ? OrderClass::Same : OrderClass::Different;
}

inline OrderClass cyclic_order_class(const PolygonalKnot& k, const KnotPoint& a, const KnotPoint& b,
                                     const KnotPoint& c) {
  return cyclic_order_class(k, a.s, b.s, c.s);
}

}  // namespace quadknot
