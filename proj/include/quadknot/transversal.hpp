#pragma once

// Trisecants of a polygonal knot: per-cube intervals, their gluing into a
// compact 1-manifold, and the trisecants starting at a given point.
//
// A cube is an ordered edge triple (i, j, k); a trisecant in it has its
// first point on e_i, second on e_j, third on e_k, in line order.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "knot.hpp"
#include "quadric.hpp"

namespace quadknot {

enum class SecantKind { Skew, Adjacent };

inline const char* to_string(SecantKind k) { return k == SecantKind::Skew ? "skew" : "adjacent"; }

struct Trisecant {
  std::array<KnotPoint, 3> points;  // line order
  PluckerLine line;                 // oriented from the first point to the third
  OrderClass order_class = OrderClass::Same;
  SecantKind kind = SecantKind::Skew;
  int vertex_slot = -1;  // slot whose point sits on a vertex, -1 if none
  int vertex = -1;

  std::array<int, 3> edges() const { return {points[0].edge, points[1].edge, points[2].edge}; }
  bool at_vertex() const { return vertex_slot >= 0; }
};

inline Trisecant make_trisecant(const PolygonalKnot& k, const std::array<int, 3>& e,
                                const std::array<double, 3>& t, SecantKind kind) {
  Trisecant tr;
  for (int s = 0; s < 3; ++s) tr.points[s] = k.point_on_edge(e[s], std::clamp(t[s], 0.0, 1.0));
  tr.line = PluckerLine::through(tr.points[0].position, tr.points[2].position);
  tr.order_class = cyclic_order_class(k, tr.points[0], tr.points[1], tr.points[2]);
  tr.kind = kind;
  return tr;
}

// Same three points, opposite line orientation.
inline Trisecant reversed(const Trisecant& t) {
  Trisecant r = t;
  std::reverse(r.points.begin(), r.points.end());
  r.line = t.line.reversed();
  r.order_class = opposite(t.order_class);
  if (t.vertex_slot >= 0) r.vertex_slot = 2 - t.vertex_slot;
  return r;
}

enum class SecantEdgeShape { Skew, Adjacent, Consecutive };

inline SecantEdgeShape classify_edge_triple(const PolygonalKnot& k, int a, int b, int c) {
  const int adj = (k.adjacent_edges(a, b) ? 1 : 0) + (k.adjacent_edges(b, c) ? 1 : 0) +
                  (k.adjacent_edges(a, c) ? 1 : 0);
  if (adj == 0) return SecantEdgeShape::Skew;
  if (adj == 1) return SecantEdgeShape::Adjacent;
  return SecantEdgeShape::Consecutive;
}

struct IntervalEnd {
  enum class Kind { VertexTrisecant, DegenerateEnd };
  Kind kind = Kind::VertexTrisecant;
  // VertexTrisecant: the exact endpoint. DegenerateEnd: the limit triple
  // (v, v, p) in line order, with order_class inherited from the interval.
  Trisecant trisecant;
  int slot = -1;    // slot(s) carrying the vertex
  int vertex = -1;
  Point3 fixed_point{};  // DegenerateEnd only

  bool closed() const { return kind == Kind::VertexTrisecant; }
};

struct TrisecantInterval {
  std::array<int, 3> edges{};
  SecantKind kind = SecantKind::Skew;
  OrderClass order_class = OrderClass::Same;
  std::vector<Trisecant> samples;
  // ends[0] belongs to samples.front(), ends[1] to samples.back(). An open
  // end (DegenerateEnd) is approached but never sampled.
  std::array<IntervalEnd, 2> ends;

  bool half_open() const { return !ends[0].closed() || !ends[1].closed(); }
};

// Strictly monotone coordinates (skew) or exactly one constant coordinate
// with the other two strictly monotone (adjacent).
inline bool interval_monotone(const TrisecantInterval& iv) {
  if (iv.samples.size() < 2) return false;
  int constant = 0;
  for (int s = 0; s < 3; ++s) {
    int sign = 0;
    bool ok = true, all_equal = true;
    for (std::size_t m = 1; m < iv.samples.size(); ++m) {
      const double d = iv.samples[m].points[s].t - iv.samples[m - 1].points[s].t;
      if (d != 0.0) all_equal = false;
      const int sg = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
      if (sg == 0 || (sign != 0 && sg != sign)) ok = false;
      if (sign == 0) sign = sg;
    }
    if (all_equal) {
      ++constant;
    } else if (!ok) {
      return false;
    }
  }
  return iv.kind == SecantKind::Skew ? constant == 0 : constant == 1;
}

namespace detail {

// t(u) = (p0 + p1 u) / (q0 + q1 u)
struct Mobius {
  double p0, p1, q0, q1;
  double operator()(double u) const { return (p0 + p1 * u) / (q0 + q1 * u); }
  double den(double u) const { return q0 + q1 * u; }
  std::optional<double> solve(double c) const {
    const double den = p1 - c * q1;
    if (den == 0.0) return std::nullopt;
    return (c * q0 - p0) / den;
  }
  std::optional<double> pole() const {
    if (q1 == 0.0) return std::nullopt;
    return -q0 / q1;
  }
};

// Parameter on e_i of the line through b(u) = P_j + u D_j that meets E_i and
// E_k: intersect E_i with the plane spanned by b(u) and E_k. The plane normal
// is linear in u and the quadratic term vanishes, so t_i is Moebius in u.
inline Mobius outer_param(const PolygonalKnot& k, int i, int j, int kk) {
  const Point3 &Pi = k.vertex(i), &Pj = k.vertex(j), &Pk = k.vertex(kk);
  const Vec3 Di = k.edge_vector(i), Dj = k.edge_vector(j), Dk = k.edge_vector(kk);
  const Vec3 r = Pi - Pj;
  const Vec3 w0 = Dk.cross(Pk - Pj);
  const Vec3 w1 = -Dk.cross(Dj);
  return {-r.dot(w0), -(r.dot(w1) - Dj.dot(w0)), Di.dot(w0), Di.dot(w1)};
}

inline int far_vertex(const PolygonalKnot& k, int edge, int from_vertex) {
  return k.wrap(edge) == k.wrap(from_vertex) ? k.wrap(edge + 1) : k.wrap(edge);
}

// Endpoint of `edge` carrying parameter `side` (0 or 1).
inline int edge_vertex(const PolygonalKnot& k, int edge, int side) { return k.wrap(edge + side); }

inline std::vector<TrisecantInterval> skew_intervals(const PolygonalKnot& k, const std::array<int, 3>& e,
                                                     int samples) {
  const Mobius ti = outer_param(k, e[0], e[1], e[2]);
  const Mobius tk = outer_param(k, e[2], e[1], e[0]);
  const Point3 &Pi = k.vertex(e[0]), &Pj = k.vertex(e[1]), &Pk = k.vertex(e[2]);
  const Vec3 Di = k.edge_vector(e[0]), Dj = k.edge_vector(e[1]), Dk = k.edge_vector(e[2]);

  std::vector<double> cuts{0.0, 1.0}, poles;
  auto add = [&](std::optional<double> u) {
    if (u && *u > 0.0 && *u < 1.0) cuts.push_back(*u);
  };
  for (const Mobius* m : {&ti, &tk}) {
    add(m->solve(0.0));
    add(m->solve(1.0));
    if (auto p = m->pole(); p && *p > 0.0 && *p < 1.0) {
      cuts.push_back(*p);
      poles.push_back(*p);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto valid = [&](double u) {
    if (ti.den(u) == 0.0 || tk.den(u) == 0.0) return false;
    const double a = ti(u), c = tk(u);
    if (!(a >= 0.0 && a <= 1.0 && c >= 0.0 && c <= 1.0)) return false;
    const Point3 pa = Pi + Di * a, pb = Pj + Dj * u, pc = Pk + Dk * c;
    return (pa - pb).dot(pc - pb) < 0.0;
  };

  std::vector<std::pair<double, double>> pieces;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double u0 = cuts[c], u1 = cuts[c + 1];
    if (!(u1 > u0) || !valid(0.5 * (u0 + u1))) continue;
    const bool at_pole = std::find(poles.begin(), poles.end(), u0) != poles.end();
    if (!pieces.empty() && pieces.back().second == u0 && !at_pole)
      pieces.back().second = u1;
    else
      pieces.emplace_back(u0, u1);
  }

  auto end_at = [&](double u) {
    std::array<double, 3> t{ti(u), u, tk(u)};
    int slot = 0, side = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 3; ++s)
      for (int sd = 0; sd < 2; ++sd)
        if (const double dev = std::abs(t[s] - sd); dev < best) {
          best = dev;
          slot = s;
          side = sd;
        }
    t[slot] = side;
    IntervalEnd end;
    end.kind = IntervalEnd::Kind::VertexTrisecant;
    end.trisecant = make_trisecant(k, e, t, SecantKind::Skew);
    end.slot = slot;
    end.vertex = edge_vertex(k, e[slot], side);
    end.trisecant.vertex_slot = slot;
    end.trisecant.vertex = end.vertex;
    return end;
  };

  std::vector<TrisecantInterval> out;
  const int m = std::max(samples, 2);
  for (auto [u0, u1] : pieces) {
    if (u1 - u0 <= 1e-12) continue;
    TrisecantInterval iv;
    iv.edges = e;
    iv.kind = SecantKind::Skew;
    iv.ends = {end_at(u0), end_at(u1)};
    iv.samples.reserve(m);
    iv.samples.push_back(iv.ends[0].trisecant);
    for (int s = 1; s + 1 < m; ++s) {
      const double u = u0 + (u1 - u0) * s / (m - 1);
      iv.samples.push_back(make_trisecant(k, e, {ti(u), u, tk(u)}, SecantKind::Skew));
    }
    iv.samples.push_back(iv.ends[1].trisecant);
    const double um = 0.5 * (u0 + u1);
    iv.order_class = make_trisecant(k, e, {ti(um), um, tk(um)}, SecantKind::Skew).order_class;
    out.push_back(std::move(iv));
  }
  return out;
}

inline TrisecantInterval reversed(const TrisecantInterval& iv) {
  TrisecantInterval r;
  r.edges = {iv.edges[2], iv.edges[1], iv.edges[0]};
  r.kind = iv.kind;
  r.order_class = opposite(iv.order_class);
  r.samples.reserve(iv.samples.size());
  for (const auto& t : iv.samples) r.samples.push_back(reversed(t));
  r.ends = iv.ends;
  for (auto& end : r.ends) {
    end.trisecant = reversed(end.trisecant);
    if (end.closed()) end.slot = 2 - end.slot;
  }
  return r;
}

// One adjacent pair e_p, e_q meeting at v; the third edge e_r pierces their
// plane at p. In affine coordinates p = v + alpha (A - v) + beta (B - v), with
// A, B the far ends of e_p and e_q, a line through p meeting e_p at
// v + X (A - v) meets the line of e_q at v + Y (B - v), Y = beta X / (X - alpha).
inline std::vector<TrisecantInterval> adjacent_intervals(const PolygonalKnot& k, const std::array<int, 3>& e,
                                                         int samples) {
  const ToleranceConfig& tol = k.tolerance();
  const double eps_len = tol.eps_coplanar * tol.scale;
  int ep = -1, eq = -1, er = -1;
  for (int a = 0; a < 3 && ep < 0; ++a)
    for (int b = a + 1; b < 3; ++b)
      if (k.adjacent_edges(e[a], e[b])) {
        ep = e[a];
        eq = e[b];
        er = e[3 - a - b];
        break;
      }
  const int v = k.wrap(ep + 1) == k.wrap(eq) ? k.wrap(eq) : k.wrap(ep);
  const int ia = far_vertex(k, ep, v), ib = far_vertex(k, eq, v);
  const Point3 &V = k.vertex(v), &A = k.vertex(ia), &B = k.vertex(ib);
  const Vec3 a = A - V, b = B - V;
  const Vec3 nrm = a.cross(b) / a.cross(b).norm();

  const Point3 &R0 = k.vertex(er), &R1 = k.vertex(er + 1);
  const double h0 = (R0 - V).dot(nrm), h1 = (R1 - V).dot(nrm);
  auto violation = [&](const std::string& what) {
    return GenericityViolation("edges " + std::to_string(ep) + "," + std::to_string(eq) + "," +
                               std::to_string(er) + ": " + what);
  };
  if (std::abs(h0) <= eps_len || std::abs(h1) <= eps_len)
    throw violation("a vertex of the third edge lies in the plane of the adjacent pair");
  if ((h0 > 0.0) == (h1 > 0.0)) return {};
  const double tau = h0 / (h0 - h1);
  const Point3 p = lerp(R0, R1, tau);

  const Vec3 w = p - V;
  const double aa = a.dot(a), ab = a.dot(b), bb = b.dot(b);
  const double det = aa * bb - ab * ab;
  const double alpha = (bb * a.dot(w) - ab * b.dot(w)) / det;
  const double beta = (aa * b.dot(w) - ab * a.dot(w)) / det;

  const double la = std::sqrt(aa), lb = std::sqrt(bb);
  const double d_to_b_line = std::abs(alpha) * la, d_to_a_line = std::abs(beta) * lb;
  const double d_to_ab = std::abs(alpha + beta - 1.0) * std::min(la, lb);
  if (d_to_b_line <= eps_len || d_to_a_line <= eps_len)
    throw violation("third edge pierces the plane on an edge line");

  // Family over X along edge f with coefficient cf, Y along g with cg.
  struct Family {
    int f, g, F, G;
    double cf, cg;
    bool middle_is_p;  // region 2: X, p, Y. otherwise: X, Y, p
    double x_lo, x_hi;
    bool open_at_zero;
  };
  std::optional<Family> fam;
  if (alpha > 0.0 && beta > 0.0) {
    if (d_to_ab <= eps_len) throw violation("third edge pierces the plane on the far side of the triangle");
    if (alpha + beta < 1.0) fam = Family{ep, eq, ia, ib, alpha, beta, true, alpha / (1.0 - beta), 1.0, false};
  } else if (alpha < 0.0 && beta > 0.0) {
    const double xmax = beta > 1.0 ? std::min(1.0, -alpha / (beta - 1.0)) : 1.0;
    fam = Family{ep, eq, ia, ib, alpha, beta, false, 0.0, xmax, true};
  } else if (alpha > 0.0 && beta < 0.0) {
    const double xmax = alpha > 1.0 ? std::min(1.0, -beta / (alpha - 1.0)) : 1.0;
    fam = Family{eq, ep, ib, ia, beta, alpha, false, 0.0, xmax, true};
  }
  if (!fam) return {};

  const Family& F = *fam;
  auto local_t = [&](int edge, double frac) { return k.wrap(edge) == v ? frac : 1.0 - frac; };
  const std::array<int, 3> cube =
      F.middle_is_p ? std::array<int, 3>{F.f, er, F.g} : std::array<int, 3>{F.f, F.g, er};
  auto at = [&](double x) {
    const double y = F.cg * x / (x - F.cf);
    const double tf = local_t(F.f, x), tg = local_t(F.g, y);
    const std::array<double, 3> t =
        F.middle_is_p ? std::array<double, 3>{tf, tau, tg} : std::array<double, 3>{tf, tg, tau};
    return make_trisecant(k, cube, t, SecantKind::Adjacent);
  };
  auto vertex_end = [&](double x, int slot, int vtx) {
    IntervalEnd end;
    end.kind = IntervalEnd::Kind::VertexTrisecant;
    end.trisecant = at(x);
    end.slot = slot;
    end.vertex = vtx;
    end.trisecant.vertex_slot = slot;
    end.trisecant.vertex = vtx;
    // snap the vertex coordinate exactly
    KnotPoint& kp = end.trisecant.points[slot];
    kp = k.point_on_edge(kp.edge, k.wrap(kp.edge) == vtx ? 0.0 : 1.0);
    return end;
  };
  const int slot_f = 0, slot_g = F.middle_is_p ? 2 : 1;

  TrisecantInterval iv;
  iv.edges = cube;
  iv.kind = SecantKind::Adjacent;
  const int m = std::max(samples, 2);
  if (!F.open_at_zero) {
    // X in [x_lo, 1]: Y = 1 at x_lo, X = 1 at the top.
    if (!(F.x_hi - F.x_lo > 1e-12)) return {};
    iv.ends = {vertex_end(F.x_lo, slot_g, F.G), vertex_end(F.x_hi, slot_f, F.F)};
    iv.samples.push_back(iv.ends[0].trisecant);
    for (int s = 1; s + 1 < m; ++s) iv.samples.push_back(at(F.x_lo + (F.x_hi - F.x_lo) * s / (m - 1)));
    iv.samples.push_back(iv.ends[1].trisecant);
  } else {
    const bool hits_f = F.x_hi >= 1.0;
    iv.ends[0] = hits_f ? vertex_end(F.x_hi, slot_f, F.F) : vertex_end(F.x_hi, slot_g, F.G);
    iv.samples.push_back(iv.ends[0].trisecant);
    for (int s = 1; s < m; ++s) iv.samples.push_back(at(F.x_hi * (m - s) / m));
    IntervalEnd open;
    open.kind = IntervalEnd::Kind::DegenerateEnd;
    open.vertex = v;
    open.fixed_point = p;
    open.slot = -1;
    Trisecant lim;
    lim.points[0] = k.point_on_edge(F.f, local_t(F.f, 0.0));
    lim.points[1] = k.point_on_edge(F.g, local_t(F.g, 0.0));
    lim.points[2] = k.point_on_edge(er, tau);
    lim.line = PluckerLine::through(V, p);
    lim.kind = SecantKind::Adjacent;
    open.trisecant = lim;
    iv.ends[1] = open;
  }
  iv.order_class = iv.samples[iv.samples.size() / 2].order_class;
  iv.ends[1].trisecant.order_class = iv.ends[1].closed() ? iv.ends[1].trisecant.order_class : iv.order_class;

  std::vector<TrisecantInterval> out{std::move(iv)};
  out.push_back(reversed(out.front()));
  return out;
}

}  // namespace detail

// All trisecant intervals in the ordered cube e_i x e_j x e_k.
inline std::vector<TrisecantInterval> trisecant_intervals(const PolygonalKnot& k, std::array<int, 3> e,
                                                          int samples = 64) {
  for (auto& x : e) x = k.wrap(x);
  if (e[0] == e[1] || e[1] == e[2] || e[0] == e[2]) throw InvalidArgument("cube edges must be distinct");
  switch (classify_edge_triple(k, e[0], e[1], e[2])) {
    case SecantEdgeShape::Consecutive:
      throw InvalidArgument("three consecutive edges carry no trisecants");
    case SecantEdgeShape::Skew:
      return detail::skew_intervals(k, e, samples);
    case SecantEdgeShape::Adjacent: {
      std::vector<TrisecantInterval> out;
      for (auto& iv : detail::adjacent_intervals(k, e, samples))
        if (iv.edges == e) out.push_back(std::move(iv));
      return out;
    }
  }
  return {};
}

// The single interval of a cube, if any. A generic knot never has two.
inline std::optional<TrisecantInterval> trisecant_interval(const PolygonalKnot& k, const std::array<int, 3>& e,
                                                           int samples = 64) {
  auto ivs = trisecant_intervals(k, e, samples);
  if (ivs.empty()) return std::nullopt;
  if (ivs.size() > 1)
    throw GenericityViolation("cube (" + std::to_string(e[0]) + "," + std::to_string(e[1]) + "," +
                              std::to_string(e[2]) + ") holds " + std::to_string(ivs.size()) +
                              " trisecant intervals");
  return std::move(ivs.front());
}

// Whether p lies in the double wedge at vertex v spanned by the lines of its
// two incident edges (after projecting p to the osculating plane). Degenerate
// trisecants vvp need p outside it.
inline bool in_double_wedge(const PolygonalKnot& k, int v, const Point3& p) {
  const Point3& V = k.vertex(v);
  const Vec3 a = k.vertex(v - 1) - V, b = k.vertex(v + 1) - V, w = p - V;
  const double aa = a.dot(a), ab = a.dot(b), bb = b.dot(b);
  const double det = aa * bb - ab * ab;
  const double alpha = (bb * a.dot(w) - ab * b.dot(w)) / det;
  const double beta = (aa * b.dot(w) - ab * a.dot(w)) / det;
  return alpha * beta > 0.0;
}

struct GluePair {
  int interval_a = 0, end_a = 0, interval_b = 0, end_b = 0;
};

struct ManifoldComponent {
  enum class Kind { Circle, Arc };
  Kind kind = Kind::Circle;
  std::vector<int> intervals;
  std::vector<std::pair<int, int>> boundary;  // (interval, end) of DegenerateEnds
};

inline const char* to_string(ManifoldComponent::Kind k) {
  return k == ManifoldComponent::Kind::Circle ? "circle" : "arc";
}

struct TrisecantManifold {
  std::vector<TrisecantInterval> intervals;
  std::vector<GluePair> gluing;
  std::vector<ManifoldComponent> components;
  std::vector<std::pair<int, int>> unmatched;  // (interval, end)
  int vertex_endpoints = 0;
  int degenerate_endpoints = 0;

  int glued_endpoints() const { return 2 * static_cast<int>(gluing.size()); }
};

struct ManifoldOptions {
  int samples = 64;
  bool throw_on_unmatched = true;
};

namespace detail {

inline bool same_trisecant_points(const Trisecant& a, const Trisecant& b, double eps) {
  for (int s = 0; s < 3; ++s)
    if (distance(a.points[s].position, b.points[s].position) > eps) return false;
  return true;
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace detail

inline TrisecantManifold trisecant_manifold(const PolygonalKnot& k, const ManifoldOptions& opt = {}) {
  const int n = k.size();
  TrisecantManifold out;
  std::map<std::array<int, 3>, std::vector<int>> by_cube;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        if (i == j || j == l || i == l) continue;
        if (classify_edge_triple(k, i, j, l) == SecantEdgeShape::Consecutive) continue;
        for (auto& iv : trisecant_intervals(k, {i, j, l}, opt.samples)) {
          by_cube[iv.edges].push_back(static_cast<int>(out.intervals.size()));
          out.intervals.push_back(std::move(iv));
        }
      }

  const int m = static_cast<int>(out.intervals.size());
  const double eps = k.tolerance().eps_match * k.tolerance().scale;
  std::vector<std::array<bool, 2>> glued(m, {false, false});
  detail::DisjointSets sets(m);
  for (int a = 0; a < m; ++a) {
    for (int ea = 0; ea < 2; ++ea) {
      const IntervalEnd& end = out.intervals[a].ends[ea];
      if (!end.closed()) {
        ++out.degenerate_endpoints;
        continue;
      }
      ++out.vertex_endpoints;
      if (glued[a][ea]) continue;
      // Neighbouring cube: swap the edge in the vertex slot for the other
      // edge incident to the vertex.
      std::array<int, 3> cube = out.intervals[a].edges;
      const int e = cube[end.slot];
      cube[end.slot] = k.wrap(e) == end.vertex ? k.wrap(e - 1) : k.wrap(e + 1);
      int best_b = -1, best_eb = -1;
      double best_d = std::numeric_limits<double>::infinity();
      if (auto it = by_cube.find(cube); it != by_cube.end()) {
        for (int b : it->second)
          for (int eb = 0; eb < 2; ++eb) {
            const IntervalEnd& other = out.intervals[b].ends[eb];
            if (glued[b][eb] || !other.closed() || other.slot != end.slot || other.vertex != end.vertex)
              continue;
            if (!detail::same_trisecant_points(end.trisecant, other.trisecant, eps)) continue;
            double d = 0.0;
            for (int s = 0; s < 3; ++s)
              d += distance(end.trisecant.points[s].position, other.trisecant.points[s].position);
            if (d < best_d) {
              best_d = d;
              best_b = b;
              best_eb = eb;
            }
          }
      }
      if (best_b < 0) {
        out.unmatched.emplace_back(a, ea);
        continue;
      }
      glued[a][ea] = glued[best_b][best_eb] = true;
      out.gluing.push_back({a, ea, best_b, best_eb});
      sets.unite(a, best_b);
    }
  }

  std::map<int, int> comp_of_root;
  for (int a = 0; a < m; ++a) {
    const int root = sets.find(a);
    auto [it, fresh] = comp_of_root.try_emplace(root, static_cast<int>(out.components.size()));
    if (fresh) out.components.emplace_back();
    ManifoldComponent& c = out.components[it->second];
    c.intervals.push_back(a);
    for (int ea = 0; ea < 2; ++ea)
      if (!out.intervals[a].ends[ea].closed()) c.boundary.emplace_back(a, ea);
  }
  for (auto& c : out.components)
    c.kind = c.boundary.empty() ? ManifoldComponent::Kind::Circle : ManifoldComponent::Kind::Arc;

  if (opt.throw_on_unmatched && !out.unmatched.empty()) {
    std::string what = "unmatched vertex-trisecant endpoints:";
    for (auto [iv, end] : out.unmatched) {
      const auto& e = out.intervals[iv].edges;
      what += " (" + std::to_string(e[0]) + "," + std::to_string(e[1]) + "," + std::to_string(e[2]) + ")#" +
              std::to_string(end);
    }
    throw GluingFailure(what, static_cast<int>(out.unmatched.size()));
  }
  return out;
}

// Every trisecant whose first point is a. For each ordered pair of other
// edges (j, k): intersect e_k with the plane through a and E_j, then check
// that the line from a meets e_j strictly between a and the e_k point.
inline std::vector<Trisecant> trisecants_from_point(const PolygonalKnot& k, const KnotPoint& a) {
  const ToleranceConfig& tol = k.tolerance();
  const double eps_len = tol.eps_match * tol.scale;
  std::vector<int> own{k.wrap(a.edge)};
  if (a.t <= tol.eps_match) own.push_back(k.wrap(a.edge - 1));
  if (a.t >= 1.0 - tol.eps_match) own.push_back(k.wrap(a.edge + 1));
  auto is_own = [&](int e) { return std::find(own.begin(), own.end(), e) != own.end(); };

  std::vector<Trisecant> out;
  const int n = k.size();
  for (int j = 0; j < n; ++j) {
    if (is_own(j)) continue;
    const Point3& Pj = k.vertex(j);
    const Vec3 Dj = k.edge_vector(j);
    const Vec3 nrm = Dj.cross(Pj - a.position);
    if (nrm.norm() <= tol.eps_collinear * Dj.norm() * tol.scale) continue;  // a on E_j
    for (int l = 0; l < n; ++l) {
      if (l == j || is_own(l)) continue;
      if (classify_edge_triple(k, a.edge, j, l) == SecantEdgeShape::Consecutive) continue;
      const Point3& Pl = k.vertex(l);
      const Vec3 Dl = k.edge_vector(l);
      const double den = Dl.dot(nrm);
      if (std::abs(den) <= tol.eps_coplanar * nrm.norm() * Dl.norm()) continue;
      const double tau = -(Pl - a.position).dot(nrm) / den;
      if (tau < -tol.eps_match || tau > 1.0 + tol.eps_match) continue;
      const Point3 c = Pl + Dl * std::clamp(tau, 0.0, 1.0);
      const Vec3 ac = c - a.position;
      if (ac.norm() <= eps_len) continue;
      const auto ap = closest_approach(a.position, ac, Pj, Dj);
      if (ap.parallel || ap.distance > eps_len) continue;
      if (ap.t < -tol.eps_match || ap.t > 1.0 + tol.eps_match) continue;
      if (ap.s * ac.norm() <= eps_len || (1.0 - ap.s) * ac.norm() <= eps_len) continue;
      Trisecant tr;
      tr.points = {a, k.point_on_edge(j, std::clamp(ap.t, 0.0, 1.0)),
                   k.point_on_edge(l, std::clamp(tau, 0.0, 1.0))};
      tr.line = PluckerLine::through(a.position, c);
      tr.order_class = cyclic_order_class(k, tr.points[0], tr.points[1], tr.points[2]);
      tr.kind = classify_edge_triple(k, a.edge, j, l) == SecantEdgeShape::Skew ? SecantKind::Skew
                                                                               : SecantKind::Adjacent;
      out.push_back(tr);
    }
  }
  std::sort(out.begin(), out.end(), [](const Trisecant& x, const Trisecant& y) {
    if (x.points[1].edge != y.points[1].edge) return x.points[1].edge < y.points[1].edge;
    if (x.points[2].edge != y.points[2].edge) return x.points[2].edge < y.points[2].edge;
    return x.points[1].t < y.points[1].t;
  });
  return out;
}

}  // namespace quadknot
