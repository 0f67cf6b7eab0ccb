#pragma once

// Line geometry primitives: points, unit directions, oriented lines in
// Pluecker coordinates, and the scale-relative predicates used by the knot
// audits.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <span>
#include <string>

#include "errors.hpp"

namespace quadknot {

template <typename T>
struct BasicVec3 {
  T x{}, y{}, z{};

  constexpr BasicVec3() = default;
  constexpr BasicVec3(T x_, T y_, T z_) : x(x_), y(y_), z(z_) {}

  constexpr T operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr BasicVec3 operator+(const BasicVec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr BasicVec3 operator-(const BasicVec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr BasicVec3 operator-() const { return {-x, -y, -z}; }
  constexpr BasicVec3 operator*(T s) const { return {x * s, y * s, z * s}; }
  constexpr BasicVec3 operator/(T s) const { return {x / s, y / s, z / s}; }
  constexpr BasicVec3& operator+=(const BasicVec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  constexpr BasicVec3& operator-=(const BasicVec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  constexpr BasicVec3& operator*=(T s) { x *= s; y *= s; z *= s; return *this; }
  constexpr bool operator==(const BasicVec3&) const = default;

  constexpr T dot(const BasicVec3& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr BasicVec3 cross(const BasicVec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  T norm() const { return std::hypot(x, y, z); }
  constexpr T squared_norm() const { return dot(*this); }
  BasicVec3 normalized() const { return *this / norm(); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

template <typename T>
constexpr BasicVec3<T> operator*(T s, const BasicVec3<T>& v) { return v * s; }

template <typename T>
std::ostream& operator<<(std::ostream& os, const BasicVec3<T>& v) {
  return os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
}

using Vec3 = BasicVec3<double>;
using Point3 = Vec3;

inline double distance(const Point3& a, const Point3& b) { return (a - b).norm(); }

inline Point3 lerp(const Point3& a, const Point3& b, double t) { return a + (b - a) * t; }

inline double triple(const Vec3& a, const Vec3& b, const Vec3& c) { return a.dot(b.cross(c)); }

// Relative tolerances. Raw quantities of degree k in length are compared
// against eps * scale^k.
struct ToleranceConfig {
  double eps_collinear = 1e-9;
  double eps_coplanar = 1e-9;
  double eps_skew = 1e-9;
  double eps_root = 1e-10;
  double eps_unit = 1e-12;
  double eps_plucker = 1e-10;
  double eps_quadric = 1e-9;
  // Matching of the same geometric object computed along two routes
  // (interval gluing, dedupe of double points).
  double eps_match = 1e-7;
  double scale = 1.0;

  bool operator==(const ToleranceConfig&) const = default;

  void validate() const {
    for (double e : {eps_collinear, eps_coplanar, eps_skew, eps_root, eps_unit, eps_plucker,
                     eps_quadric, eps_match}) {
      if (!(e > 0.0) || !(e < 1e-3))
        throw InvalidArgument("tolerance values must lie in (0, 1e-3)");
    }
    if (!(scale > 0.0) || !std::isfinite(scale))
      throw InvalidArgument("tolerance scale must be positive and finite");
  }

  // Sets a field by name; used by the CLI and the JSON loader.
  void set(const std::string& key, double value) {
    if (key == "eps_collinear") eps_collinear = value;
    else if (key == "eps_coplanar") eps_coplanar = value;
    else if (key == "eps_skew") eps_skew = value;
    else if (key == "eps_root") eps_root = value;
    else if (key == "eps_unit") eps_unit = value;
    else if (key == "eps_plucker") eps_plucker = value;
    else if (key == "eps_quadric") eps_quadric = value;
    else if (key == "eps_match") eps_match = value;
    else if (key == "scale") scale = value;
    else throw InvalidArgument("unknown tolerance key '" + key + "'");
  }
};

// Unit-norm vector.
class Direction3 {
 public:
  Direction3() = default;

  static Direction3 from(const Vec3& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("cannot normalize a zero vector");
    return Direction3(v / n);
  }

  const Vec3& vec() const { return v_; }
  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }
  Direction3 operator-() const { return Direction3(-v_); }

  bool is_unit(double eps_unit) const { return std::abs(v_.norm() - 1.0) <= eps_unit; }

 private:
  explicit Direction3(const Vec3& v) : v_(v) {}
  Vec3 v_{1.0, 0.0, 0.0};
};

// Oriented line: unit direction d and moment m = d x p for any point p on the
// line. Orientation is kept; canonical() gives the orientation-free form.
class PluckerLine {
 public:
  PluckerLine() = default;

  static PluckerLine through(const Point3& p, const Point3& q) {
    return along(p, q - p);
  }

  static PluckerLine along(const Point3& p, const Vec3& direction) {
    PluckerLine l;
    l.d_ = Direction3::from(direction);
    l.m_ = l.d_.vec().cross(p);
    return l;
  }

  const Direction3& direction() const { return d_; }
  const Vec3& d() const { return d_.vec(); }
  const Vec3& m() const { return m_; }

  // Point of the line closest to the origin.
  Point3 anchor() const { return m_.cross(d()); }
  Point3 at(double s) const { return anchor() + d() * s; }
  // Signed parameter of the projection of p onto the line (relative to anchor()).
  double param_of(const Point3& p) const { return (p - anchor()).dot(d()); }
  double distance_to(const Point3& p) const {
    return (p - anchor()).cross(d()).norm();
  }

  PluckerLine reversed() const {
    PluckerLine l;
    l.d_ = -d_;
    l.m_ = -m_;
    return l;
  }

  // Representative with lexicographically positive direction.
  PluckerLine canonical(double eps = 1e-12) const {
    for (std::size_t i = 0; i < 3; ++i) {
      const double c = d()[i];
      if (c > eps) return *this;
      if (c < -eps) return reversed();
    }
    return *this;
  }

  double grassmann_residual() const { return d().dot(m_); }

 private:
  Direction3 d_;
  Vec3 m_{};
};

inline std::ostream& operator<<(std::ostream& os, const PluckerLine& l) {
  return os << "{ d=" << l.d() << " m=" << l.m() << " }";
}

// Reciprocal product d1.m2 + d2.m1. Vanishes iff the lines are coplanar.
inline double side_product(const PluckerLine& a, const PluckerLine& b) {
  return a.d().dot(b.m()) + b.d().dot(a.m());
}

inline bool coplanar_lines(const PluckerLine& a, const PluckerLine& b, const ToleranceConfig& tol) {
  return std::abs(side_product(a, b)) <= tol.eps_skew * tol.scale;
}

inline bool skew_lines(const PluckerLine& a, const PluckerLine& b, const ToleranceConfig& tol) {
  return !coplanar_lines(a, b, tol);
}

// Orientation-free equality: same point set within eps_match * scale.
inline bool same_line(const PluckerLine& a, const PluckerLine& b, const ToleranceConfig& tol) {
  const double sign = a.d().dot(b.d()) >= 0.0 ? 1.0 : -1.0;
  const double dd = (a.d() - b.d() * sign).norm();
  const double dm = (a.m() - b.m() * sign).norm();
  return dd <= tol.eps_match && dm <= tol.eps_match * tol.scale;
}

// Lexicographic order on canonical coordinates; used to sort outputs.
inline bool line_less(const PluckerLine& a, const PluckerLine& b) {
  const PluckerLine ca = a.canonical(), cb = b.canonical();
  const std::array<double, 6> ka{ca.d().x, ca.d().y, ca.d().z, ca.m().x, ca.m().y, ca.m().z};
  const std::array<double, 6> kb{cb.d().x, cb.d().y, cb.d().z, cb.m().x, cb.m().y, cb.m().z};
  return ka < kb;
}

inline double bbox_diagonal(std::span<const Point3> pts) {
  if (pts.empty()) return 0.0;
  Vec3 lo = pts.front(), hi = pts.front();
  for (const auto& p : pts) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  return (hi - lo).norm();
}

// Largest normalized triangle area over all triples, |(b-a)x(c-a)| / diag^2.
inline double collinearity_measure(std::span<const Point3> pts) {
  if (pts.size() < 3) throw InvalidArgument("collinearity needs at least 3 points");
  const double diag = bbox_diagonal(pts);
  if (diag == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t k = j + 1; k < pts.size(); ++k)
        worst = std::max(worst, (pts[j] - pts[i]).cross(pts[k] - pts[i]).norm());
  return worst / (diag * diag);
}

// Largest normalized tetrahedron determinant over all quadruples, |det| / diag^3.
inline double coplanarity_measure(std::span<const Point3> pts) {
  if (pts.size() < 4) throw InvalidArgument("coplanarity needs at least 4 points");
  const double diag = bbox_diagonal(pts);
  if (diag == 0.0) return 0.0;
  double worst = 0.0;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l)
          worst = std::max(worst, std::abs(triple(pts[j] - pts[i], pts[k] - pts[i], pts[l] - pts[i])));
  return worst / (diag * diag * diag);
}

inline bool collinear(std::span<const Point3> pts, const ToleranceConfig& tol = {}) {
  return collinearity_measure(pts) <= tol.eps_collinear;
}

inline bool coplanar(std::span<const Point3> pts, const ToleranceConfig& tol = {}) {
  return coplanarity_measure(pts) <= tol.eps_coplanar;
}

// Closest approach between two lines given as point + (non-normalized)
// direction. Returns the parameters on each line; `parallel` is set when the
// directions are parallel within eps.
struct LineLineApproach {
  double s = 0.0, t = 0.0;
  double distance = 0.0;
  bool parallel = false;
};

inline LineLineApproach closest_approach(const Point3& p, const Vec3& u, const Point3& q, const Vec3& v,
                                         double eps = 1e-14) {
  LineLineApproach r;
  const Vec3 w = p - q;
  const double a = u.dot(u), b = u.dot(v), c = v.dot(v), d = u.dot(w), e = v.dot(w);
  const double den = a * c - b * b;
  if (den <= eps * a * c) {
    r.parallel = true;
    r.s = 0.0;
    r.t = e / c;
  } else {
    r.s = (b * e - c * d) / den;
    r.t = (a * e - b * d) / den;
  }
  r.distance = ((p + u * r.s) - (q + v * r.t)).norm();
  return r;
}

inline double segment_segment_distance(const Point3& a0, const Point3& a1, const Point3& b0,
                                       const Point3& b1) {
  const Vec3 u = a1 - a0, v = b1 - b0;
  auto point_seg = [](const Point3& p, const Point3& s0, const Vec3& dir) {
    const double len2 = dir.squared_norm();
    const double t = len2 > 0 ? std::clamp((p - s0).dot(dir) / len2, 0.0, 1.0) : 0.0;
    return (p - (s0 + dir * t)).norm();
  };
  double best = std::min({point_seg(a0, b0, v), point_seg(a1, b0, v), point_seg(b0, a0, u),
                          point_seg(b1, a0, u)});
  const auto ap = closest_approach(a0, u, b0, v);
  if (!ap.parallel && ap.s >= 0.0 && ap.s <= 1.0 && ap.t >= 0.0 && ap.t <= 1.0)
    best = std::min(best, ap.distance);
  return best;
}

}  // namespace quadknot
