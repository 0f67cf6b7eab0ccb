#pragma once

// Non-degeneracy and genericity audits, and the seeded perturbation that
// makes a polygon generic.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "knot.hpp"
#include "quadric.hpp"
#include "quadrisecant.hpp"
#include "rng.hpp"

namespace quadknot {

enum class Condition { NoFourCoplanar, NoThreeCollinear, G1, G2, G3 };

inline const char* to_string(Condition c) {
  switch (c) {
    case Condition::NoFourCoplanar: return "NoFourCoplanar";
    case Condition::NoThreeCollinear: return "NoThreeCollinear";
    case Condition::G1: return "G1";
    case Condition::G2: return "G2";
    case Condition::G3: return "G3";
  }
  return "?";
}

struct Violation {
  Condition condition = Condition::G1;
  std::vector<int> witness;  // vertex and/or edge indices, 0-based
  std::string detail;
  double magnitude = 0.0;

  bool operator==(const Violation&) const = default;
};

struct AuditReport {
  bool passed = true;
  std::vector<Violation> violations;

  bool operator==(const AuditReport&) const = default;

  void add(Violation v) {
    passed = false;
    violations.push_back(std::move(v));
  }
  bool has(Condition c) const {
    return std::any_of(violations.begin(), violations.end(), [c](const Violation& v) { return v.condition == c; });
  }
};

using NondegeneracyReport = AuditReport;
using GenericityReport = AuditReport;

// Every vertex triple for collinearity, every quadruple for coplanarity.
inline NondegeneracyReport nondegeneracy_check(const PolygonalKnot& k) {
  const ToleranceConfig& tol = k.tolerance();
  const int n = k.size();
  NondegeneracyReport r;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        const std::array<Point3, 3> p{k.vertex(a), k.vertex(b), k.vertex(c)};
        const double m = collinearity_measure(p);
        if (m <= tol.eps_collinear) r.add({Condition::NoThreeCollinear, {a, b, c}, "collinear vertices", m});
      }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          const std::array<Point3, 4> p{k.vertex(a), k.vertex(b), k.vertex(c), k.vertex(d)};
          const double m = coplanarity_measure(p);
          if (m <= tol.eps_coplanar) r.add({Condition::NoFourCoplanar, {a, b, c, d}, "coplanar vertices", m});
        }
  return r;
}

namespace detail {

inline double line_segment_distance(const Point3& o, const Vec3& dir, const Point3& s0, const Point3& s1) {
  const Vec3 D = s1 - s0;
  const auto ap = closest_approach(s0, D, o, dir);
  if (!ap.parallel && ap.s >= 0.0 && ap.s <= 1.0) return ap.distance;
  const PluckerLine l = PluckerLine::along(o, dir);
  return std::min(l.distance_to(s0), l.distance_to(s1));
}

inline void audit_g1(const PolygonalKnot& k, GenericityReport& r) {
  const ToleranceConfig& tol = k.tolerance();
  const int n = k.size();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        if (k.adjacent_edges(a, b) || k.adjacent_edges(b, c) || k.adjacent_edges(a, c)) continue;
        std::optional<RuledQuadric> q;
        try {
          q = regulus_quadric(k.edge_line(a), k.edge_line(b), k.edge_line(c), tol);
        } catch (const SkewViolation&) {
          continue;  // a coplanar pair: reported by the non-degeneracy audit
        }
        for (int v = 0; v < n; ++v) {
          if (v == a || v == k.wrap(a + 1) || v == b || v == k.wrap(b + 1) || v == c || v == k.wrap(c + 1))
            continue;
          const double d = q->distance_estimate(k.vertex(v));
          if (d <= tol.eps_quadric * tol.scale)
            r.add({Condition::G1, {a, b, c, v}, "vertex " + std::to_string(v) + " lies on the regulus of edges " +
                                                  std::to_string(a) + "," + std::to_string(b) + "," +
                                                  std::to_string(c),
                   d});
        }
      }
}

inline void audit_g2(const PolygonalKnot& k, const QuadrisecantSearch* pre, GenericityReport& r) {
  QuadrisecantSearch local;
  if (!pre) {
    try {
      local = find_quadrisecants(k);
    } catch (const GenericityViolation& e) {
      r.add({Condition::G2, {}, std::string("quadrisecant solver: ") + e.what(), 0.0});
      return;
    } catch (const SkewViolation& e) {
      r.add({Condition::G2, {}, std::string("quadrisecant solver: ") + e.what(), 0.0});
      return;
    }
    pre = &local;
  }
  for (const auto& q : pre->quintisecants) {
    std::ostringstream os;
    os.precision(17);
    os << "line " << q.line << " meets the knot in " << q.components << " components";
    r.add({Condition::G2, {q.edges.begin(), q.edges.end()}, os.str(), static_cast<double>(q.components)});
  }
}

inline void audit_g3(const PolygonalKnot& k, GenericityReport& r) {
  const ToleranceConfig& tol = k.tolerance();
  const double eps = tol.eps_skew * tol.scale;
  const int n = k.size();
  for (int v = 0; v < n; ++v) {
    const Point3& V = k.vertex(v);
    Vec3 nrm = (k.vertex(v - 1) - V).cross(k.vertex(v + 1) - V);
    nrm = nrm / nrm.norm();
    for (int e = 0; e < n; ++e) {
      // skip edges incident to v or to its neighbours (they touch the plane at a vertex)
      if (e == k.wrap(v - 2) || e == k.wrap(v - 1) || e == v || e == k.wrap(v + 1)) continue;
      const double h0 = (k.vertex(e) - V).dot(nrm), h1 = (k.vertex(e + 1) - V).dot(nrm);
      if ((h0 > 0.0) == (h1 > 0.0) || h0 == h1) continue;
      const Point3 p = lerp(k.vertex(e), k.vertex(e + 1), h0 / (h0 - h1));
      const Vec3 dir = p - V;
      if (dir.norm() <= eps) continue;
      for (int f = 0; f < n; ++f) {
        if (f == e || f == k.wrap(v - 1) || f == v) continue;
        const double d = line_segment_distance(V, dir, k.vertex(f), k.vertex(f + 1));
        if (d <= eps)
          r.add({Condition::G3, {v, e, f},
                 "vertex trisecant in the osculating plane at vertex " + std::to_string(v), d});
      }
    }
  }
}

}  // namespace detail

// G1 regulus incidence, G2 quintisecants, G3 vertex trisecants in osculating
// planes. `precomputed` reuses an earlier quadrisecant search for G2.
inline GenericityReport genericity_check(const PolygonalKnot& k, const QuadrisecantSearch* precomputed = nullptr) {
  GenericityReport r;
  detail::audit_g1(k, r);
  detail::audit_g2(k, precomputed, r);
  detail::audit_g3(k, r);
  return r;
}

struct PerturbOptions {
  int max_attempts = 32;
};

// Displaces every vertex by an independent uniform vector in the ball of
// radius `magnitude`, retrying with derived seeds until both audits pass.
inline PolygonalKnot perturb(const PolygonalKnot& k, double magnitude, std::uint64_t seed,
                             const PerturbOptions& opt = {}) {
  if (!(magnitude >= 0.0) || !std::isfinite(magnitude))
    throw InvalidArgument("perturbation magnitude must be a finite non-negative number");
  const double limit = 0.5 * k.min_nonadjacent_edge_distance();
  if (magnitude >= limit) {
    std::ostringstream os;
    os << "magnitude " << magnitude << " is not below half the minimum non-adjacent edge distance (" << limit << ")";
    throw IsotopyUnsafe(os.str());
  }
  auto generic = [](const PolygonalKnot& c) { return nondegeneracy_check(c).passed && genericity_check(c).passed; };
  if (magnitude == 0.0) {
    if (!generic(k)) throw PerturbationFailed("magnitude 0 and the knot is not generic");
    return k;
  }
  std::uint64_t s = seed;
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    CounterRng rng(s, 0);
    std::vector<Point3> v;
    v.reserve(k.size());
    for (const auto& p : k.vertices()) v.push_back(p + rng.in_ball(magnitude));
    s = splitmix64(s);
    try {
      PolygonalKnot c(std::move(v), k.name(), k.tolerance());
      if (generic(c)) return c;
    } catch (const DegenerateInput&) {
    }
  }
  throw PerturbationFailed("no generic perturbation found in " + std::to_string(opt.max_attempts) + " attempts");
}

}  // namespace quadknot
