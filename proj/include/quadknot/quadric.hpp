#pragma once

// Doubly-ruled quadrics through three pairwise skew lines, and the common
// transversals of four lines.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "geom_core.hpp"

namespace quadknot {

// Symmetric 4x4 form on homogeneous points. Stored in a normalized frame
// (x' = (x - center) / scale) so that evaluation is scale-stable; the
// matrix has unit Frobenius norm.
class RuledQuadric {
 public:
  RuledQuadric(const Eigen::Matrix4d& normalized, const Point3& center, double scale)
      : q_(normalized), center_(center), scale_(scale) {}

  const Eigen::Matrix4d& normalized_matrix() const { return q_; }
  const Point3& center() const { return center_; }
  double frame_scale() const { return scale_; }

  // Matrix acting on world homogeneous coordinates, normalized to unit
  // Frobenius norm with a deterministic sign.
  Eigen::Matrix4d world_matrix() const {
    Eigen::Matrix4d t = Eigen::Matrix4d::Identity() / scale_;
    t(3, 3) = 1.0;
    t(0, 3) = -center_.x / scale_;
    t(1, 3) = -center_.y / scale_;
    t(2, 3) = -center_.z / scale_;
    Eigen::Matrix4d w = t.transpose() * q_ * t;
    return sign_normalized(w);
  }

  Eigen::Vector4d to_frame(const Point3& p) const {
    return {(p.x - center_.x) / scale_, (p.y - center_.y) / scale_, (p.z - center_.z) / scale_, 1.0};
  }

  // x^T Q x in the normalized frame.
  double evaluate(const Point3& p) const {
    const Eigen::Vector4d x = to_frame(p);
    return x.dot(q_ * x);
  }

  // First-order distance estimate |f| / |grad f|, in world units.
  double distance_estimate(const Point3& p) const {
    const Eigen::Vector4d x = to_frame(p);
    const Eigen::Vector4d g = 2.0 * (q_ * x);
    const double gn = g.head<3>().norm();
    const double f = x.dot(q_ * x);
    if (gn == 0.0) return f == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(f) / gn * scale_;
  }

  int rank(double rel_eps = 1e-9) const {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(q_);
    const auto ev = es.eigenvalues().cwiseAbs();
    const double mx = ev.maxCoeff();
    int r = 0;
    for (int i = 0; i < 4; ++i)
      if (ev(i) > rel_eps * mx) ++r;
    return r;
  }

  static Eigen::Matrix4d sign_normalized(Eigen::Matrix4d m) {
    m /= m.norm();
    for (int i = 0; i < 16; ++i) {
      const double c = m.data()[i];
      if (std::abs(c) > 1e-12) {
        if (c < 0) m = -m;
        break;
      }
    }
    return m;
  }

 private:
  Eigen::Matrix4d q_;
  Point3 center_;
  double scale_;
};

namespace detail {

// Coefficients of X^T Q Y in the 10 independent entries of a symmetric Q.
inline Eigen::Matrix<double, 1, 10> bilinear_row(const Eigen::Vector4d& x, const Eigen::Vector4d& y) {
  Eigen::Matrix<double, 1, 10> row;
  int k = 0;
  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b) {
      row(k++) = a == b ? x(a) * y(a) : x(a) * y(b) + x(b) * y(a);
    }
  }
  return row;
}

inline Eigen::Matrix4d unpack_symmetric(const Eigen::Matrix<double, 10, 1>& q) {
  Eigen::Matrix4d m;
  int k = 0;
  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b) {
      m(a, b) = q(k);
      m(b, a) = q(k);
      ++k;
    }
  }
  return m;
}

}  // namespace detail

// Quadric containing three pairwise skew lines. Throws SkewViolation if any
// pair is coplanar within eps_skew * scale.
inline RuledQuadric regulus_quadric(const PluckerLine& l1, const PluckerLine& l2, const PluckerLine& l3,
                                    const ToleranceConfig& tol = {}) {
  const std::array<const PluckerLine*, 3> lines{&l1, &l2, &l3};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (coplanar_lines(*lines[i], *lines[j], tol))
        throw SkewViolation("regulus generators " + std::to_string(i) + " and " + std::to_string(j) +
                            " are not skew");

  Point3 center{};
  for (const auto* l : lines) center += l->anchor();
  center = center / 3.0;
  double scale = 0.0;
  for (const auto* l : lines) scale = std::max(scale, (l->anchor() - center).norm());
  scale = std::max(scale, 1e-300);

  Eigen::Matrix<double, 9, 10> a;
  int row = 0;
  for (const auto* l : lines) {
    const Point3 p = (l->anchor() - center) / scale;
    const Eigen::Vector4d ph(p.x, p.y, p.z, 1.0);
    const Eigen::Vector4d dh(l->d().x, l->d().y, l->d().z, 0.0);
    a.row(row++) = detail::bilinear_row(ph, ph);
    a.row(row++) = detail::bilinear_row(ph, dh);
    a.row(row++) = detail::bilinear_row(dh, dh);
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 9, 10>> svd(a, Eigen::ComputeFullV);
  const Eigen::Matrix<double, 10, 1> q = svd.matrixV().col(9);
  Eigen::Matrix4d m = RuledQuadric::sign_normalized(detail::unpack_symmetric(q));
  return RuledQuadric(m, center, scale);
}

struct IntersectionResult {
  enum class Kind { Empty, One, Two, ContainedInQuadric };
  Kind kind = Kind::Empty;
  std::vector<Point3> points;
  // Parameters along the line (relative to PluckerLine::anchor()), same order.
  std::vector<double> params;
  bool tangent = false;
};

// Restricts the quadratic form to the line and classifies the resulting
// univariate quadratic a s^2 + b s + c.
inline IntersectionResult line_quadric_intersection(const PluckerLine& l, const RuledQuadric& q,
                                                    const ToleranceConfig& tol = {}) {
  const Eigen::Matrix4d& m = q.normalized_matrix();
  const Point3 p = (l.anchor() - q.center()) / q.frame_scale();
  const Eigen::Vector4d ph(p.x, p.y, p.z, 1.0);
  const Eigen::Vector4d dh(l.d().x, l.d().y, l.d().z, 0.0);
  const double a = dh.dot(m * dh);
  const double b = 2.0 * ph.dot(m * dh);
  const double c = ph.dot(m * ph);
  const double mag = (1.0 + p.norm()) * (1.0 + p.norm());
  const double eps = tol.eps_root * mag;

  IntersectionResult r;
  auto push = [&](double s_frame) {
    const double s = s_frame * q.frame_scale();
    r.params.push_back(s);
    r.points.push_back(l.at(s));
  };

  if (std::abs(a) <= eps) {
    if (std::abs(b) <= eps) {
      r.kind = std::abs(c) <= eps ? IntersectionResult::Kind::ContainedInQuadric
                                  : IntersectionResult::Kind::Empty;
      return r;
    }
    r.kind = IntersectionResult::Kind::One;
    push(-c / b);
    return r;
  }
  const double disc = b * b - 4.0 * a * c;
  const double disc_scale = std::max(b * b, std::abs(4.0 * a * c));
  if (std::abs(disc) <= tol.eps_root * disc_scale) {
    r.kind = IntersectionResult::Kind::One;
    r.tangent = true;
    push(-b / (2.0 * a));
    return r;
  }
  if (disc < 0.0) {
    r.kind = IntersectionResult::Kind::Empty;
    return r;
  }
  const double sq = std::sqrt(disc);
  const double qq = -0.5 * (b + (b >= 0.0 ? sq : -sq));
  double s1 = qq / a;
  double s2 = qq != 0.0 ? c / qq : -s1;
  if (s1 > s2) std::swap(s1, s2);
  r.kind = IntersectionResult::Kind::Two;
  push(s1);
  push(s2);
  return r;
}

// The unique line through x meeting the lines a and b, if the two planes
// span(x, a) and span(x, b) are distinct.
inline std::optional<PluckerLine> line_through_meeting(const Point3& x, const PluckerLine& a,
                                                       const PluckerLine& b) {
  const Vec3 na = a.d().cross(x - a.anchor());
  const Vec3 nb = b.d().cross(x - b.anchor());
  const Vec3 dir = na.cross(nb);
  const double scale = na.norm() * nb.norm();
  if (!(scale > 0.0) || dir.norm() <= 1e-14 * scale) return std::nullopt;
  return PluckerLine::along(x, dir);
}

struct TransversalResult {
  bool infinite_family = false;
  std::vector<PluckerLine> lines;
  std::vector<bool> tangent;
};

// Common transversals of four lines, the first three pairwise skew.
inline TransversalResult transversals_four_lines(const PluckerLine& l1, const PluckerLine& l2,
                                                 const PluckerLine& l3, const PluckerLine& l4,
                                                 const ToleranceConfig& tol = {}) {
  const RuledQuadric q = regulus_quadric(l1, l2, l3, tol);
  const IntersectionResult hit = line_quadric_intersection(l4, q, tol);
  TransversalResult out;
  if (hit.kind == IntersectionResult::Kind::ContainedInQuadric) {
    out.infinite_family = true;
    return out;
  }
  const std::array<const PluckerLine*, 3> gen{&l1, &l2, &l3};
  for (const Point3& x : hit.points) {
    // Use the two generators farthest from x; x may lie on one of them.
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) {
      return gen[i]->distance_to(x) > gen[j]->distance_to(x);
    });
    auto line = line_through_meeting(x, *gen[idx[0]], *gen[idx[1]]);
    if (!line) continue;
    out.lines.push_back(*line);
    out.tangent.push_back(hit.tangent);
  }
  return out;
}

}  // namespace quadknot
