#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace quadknot;
using namespace qk_test;

namespace {

// Edges 0, 2, 4 on the rulings y0 = 0, 1, -1 of z = xy with staggered x ranges.
PolygonalKnot saddle_cube_knot() {
  return PolygonalKnot({{-1, 0, 0},
                        {1, 0, 0},
                        {1.2, 1, 1.2},
                        {-0.8, 1, -0.8},
                        {-1.3, -1, 1.3},
                        {0.7, -1, -0.7},
                        {0.1, -2, 3.3}});
}

// Edges 0 and 1 meet at the origin along the x and y axes; edge 4 crosses
// z = 0 at (px, py, 0).
PolygonalKnot adjacent_knot(double px, double py) {
  const Point3 hi{px - 0.05, py + 0.05, -1}, lo{px + 0.05, py - 0.05, 1};
  return PolygonalKnot({{1, 0, 0}, {0, 0, 0}, {0, 1, 0}, {-0.7, 1.6, 1.3}, lo, hi, {1.6, -0.7, -1.3}});
}

double collinearity(const Trisecant& t) {
  const Vec3 u = t.points[2].position - t.points[0].position;
  return u.cross(t.points[1].position - t.points[0].position).norm() / u.norm();
}

bool between(const Trisecant& t) {
  const Point3 &a = t.points[0].position, &b = t.points[1].position, &c = t.points[2].position;
  return (a - b).dot(c - b) < 0.0;
}

}  // namespace

TEST(SkewInterval, SaddleRulings) {
  const auto k = saddle_cube_knot();
  ASSERT_TRUE(nondegeneracy_check(k).passed);
  const auto ivs = trisecant_intervals(k, {4, 0, 2});
  ASSERT_EQ(ivs.size(), 1u);
  const auto& iv = ivs[0];
  EXPECT_EQ(iv.kind, SecantKind::Skew);
  EXPECT_FALSE(iv.half_open());
  EXPECT_TRUE(interval_monotone(iv));
  // the transversals are the opposite rulings x = const, x in [-0.8, 0.7]
  double lo = 1e9, hi = -1e9;
  for (const auto& s : iv.samples) {
    const double x = s.points[1].position.x;
    for (const auto& p : s.points) {
      EXPECT_NEAR(p.position.x, x, 1e-12);
      EXPECT_NEAR(p.position.z, p.position.x * p.position.y, 1e-12);
    }
    EXPECT_LT(collinearity(s), 1e-12);
    EXPECT_TRUE(between(s));
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  EXPECT_NEAR(lo, -0.8, 1e-12);
  EXPECT_NEAR(hi, 0.7, 1e-12);
  std::set<int> vertices{iv.ends[0].vertex, iv.ends[1].vertex};
  EXPECT_EQ(vertices, (std::set<int>{3, 5}));
  // the reversed cube carries the same lines
  const auto rev = trisecant_intervals(k, {2, 0, 4});
  ASSERT_EQ(rev.size(), 1u);
  EXPECT_NE(rev[0].order_class, iv.order_class);
  // no transversal with edge 0 outside the middle
  EXPECT_TRUE(trisecant_intervals(k, {0, 4, 2}).empty());
}

TEST(SkewInterval, RandomCubesAgainstSampling) {
  // oracle: for each u on the middle edge, find the line through b(u) meeting
  // the two outer edge lines by plane intersection and test the segment bounds
  int total = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CounterRng rng(seed, 7);
    std::vector<Point3> v;
    for (int i = 0; i < 7; ++i) v.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
    const PolygonalKnot k(v);
    std::vector<std::array<int, 3>> cubes;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j)
        for (int l = 0; l < 7; ++l)
          if (i != j && j != l && i != l && classify_edge_triple(k, i, j, l) == SecantEdgeShape::Skew)
            cubes.push_back({i, j, l});
    for (const auto& e : cubes) {
      const auto ivs = trisecant_intervals(k, e, 16);
      for (const auto& iv : ivs) {
        EXPECT_TRUE(interval_monotone(iv));
        for (const auto& s : iv.samples) {
          EXPECT_LT(collinearity(s), 1e-9);
          EXPECT_TRUE(between(s) || s.at_vertex());
        }
      }
      const int N = 400;
      int hits = 0, covered = 0;
      for (int q = 0; q < N; ++q) {
        const double u = (q + 0.5) / N;
        const Point3 b = k.vertex(e[1]) + k.edge_vector(e[1]) * u;
        const Vec3 nrm = k.edge_vector(e[2]).cross(k.vertex(e[2]) - b);
        const double den = k.edge_vector(e[0]).dot(nrm);
        if (den == 0.0) continue;
        const double ta = -(k.vertex(e[0]) - b).dot(nrm) / den;
        const Point3 a = k.vertex(e[0]) + k.edge_vector(e[0]) * ta;
        const auto ap = closest_approach(a, b - a, k.vertex(e[2]), k.edge_vector(e[2]));
        if (ap.parallel) continue;
        if (ta < 0 || ta > 1 || ap.t < 0 || ap.t > 1 || ap.s <= 1.0) continue;
        ++hits;
        for (const auto& iv : ivs) {
          const double u0 = iv.samples.front().points[1].t, u1 = iv.samples.back().points[1].t;
          if (u >= std::min(u0, u1) && u <= std::max(u0, u1)) {
            ++covered;
            break;
          }
        }
      }
      EXPECT_EQ(hits, covered) << "seed " << seed;
      total += hits;
    }
  }
  EXPECT_GT(total, 0);
}

TEST(AdjacentInterval, TriangleRegionIsClosed) {
  const auto k = adjacent_knot(0.25, 0.25);
  ASSERT_TRUE(nondegeneracy_check(k).passed);
  const auto ivs = trisecant_intervals(k, {0, 4, 1});
  ASSERT_EQ(ivs.size(), 1u);
  const auto& iv = ivs[0];
  EXPECT_EQ(iv.kind, SecantKind::Adjacent);
  EXPECT_FALSE(iv.half_open());
  EXPECT_TRUE(interval_monotone(iv));
  for (const auto& s : iv.samples) {
    EXPECT_EQ(s.points[1].edge, 4);
    EXPECT_NEAR(s.points[1].position.x, 0.25, 1e-12);
    EXPECT_NEAR(s.points[1].position.y, 0.25, 1e-12);
    EXPECT_LT(collinearity(s), 1e-12);
  }
  EXPECT_EQ((std::set<int>{iv.ends[0].vertex, iv.ends[1].vertex}), (std::set<int>{0, 2}));
  // the line through (1,0,0) and the pierce point meets the y axis at y = 1/3
  for (const auto& end : iv.ends)
    if (end.vertex == 0) {
      EXPECT_NEAR(end.trisecant.points[2].position.y, 1.0 / 3.0, 1e-12);
    }
}

TEST(AdjacentInterval, OutsideWedgeIsHalfOpen) {
  const auto k = adjacent_knot(-0.25, 0.25);
  ASSERT_TRUE(nondegeneracy_check(k).passed);
  std::vector<TrisecantInterval> all;
  for (const std::array<int, 3> e : {std::array<int, 3>{0, 1, 4}, std::array<int, 3>{1, 0, 4},
                                      std::array<int, 3>{4, 1, 0}, std::array<int, 3>{4, 0, 1}})
    for (auto& iv : trisecant_intervals(k, e)) all.push_back(iv);
  // one interval, seen from both line orientations
  ASSERT_EQ(all.size(), 2u);
  for (const auto& iv : all) {
    EXPECT_TRUE(iv.half_open());
    EXPECT_TRUE(interval_monotone(iv));
    int open = 0;
    for (const auto& end : iv.ends)
      if (!end.closed()) {
        ++open;
        EXPECT_EQ(end.vertex, 1);
        EXPECT_NEAR(end.fixed_point.x, -0.25, 1e-12);
        EXPECT_NEAR(end.fixed_point.y, 0.25, 1e-12);
        EXPECT_FALSE(in_double_wedge(k, 1, end.fixed_point));
      }
    EXPECT_EQ(open, 1);
  }
}

TEST(AdjacentInterval, EmptyRegions) {
  for (auto [px, py] : {std::pair{-0.25, -0.25}, std::pair{0.75, 0.75}}) {
    const auto k = adjacent_knot(px, py);
    ASSERT_TRUE(nondegeneracy_check(k).passed);
    for (const std::array<int, 3> e : {std::array<int, 3>{0, 4, 1}, std::array<int, 3>{0, 1, 4},
                                        std::array<int, 3>{4, 0, 1}})
      EXPECT_TRUE(trisecant_intervals(k, e).empty()) << px << "," << py;
  }
}

TEST(TrisecantIntervals, InvalidCubes) {
  const auto k = fixture("trefoil6");
  EXPECT_THROW(trisecant_intervals(k, {0, 1, 2}), InvalidArgument);
  EXPECT_THROW(trisecant_intervals(k, {0, 0, 3}), InvalidArgument);
}

TEST(Manifold, FixturesGlueCompletely) {
  for (const auto& name : generic_fixtures()) {
    const auto k = fixture(name);
    const auto m = trisecant_manifold(k, {16, true});
    EXPECT_TRUE(m.unmatched.empty()) << name;
    EXPECT_EQ(m.glued_endpoints(), m.vertex_endpoints) << name;
    int boundary = 0;
    for (const auto& c : m.components) {
      boundary += static_cast<int>(c.boundary.size());
      for (auto [iv, end] : c.boundary) EXPECT_FALSE(m.intervals[iv].ends[end].closed());
      if (c.kind == ManifoldComponent::Kind::Arc) {
        EXPECT_EQ(c.boundary.size(), 2u) << name;
      }
    }
    EXPECT_EQ(boundary, m.degenerate_endpoints) << name;
    for (const auto& iv : m.intervals) EXPECT_TRUE(interval_monotone(iv)) << name;
    // every interval appears with its reversal
    EXPECT_EQ(m.intervals.size() % 2, 0u);
    if (name == "tetra4") {
      EXPECT_TRUE(m.intervals.empty());
    }
  }
}

TEST(Manifold, GluedEndsCoincide) {
  const auto k = fixture("trefoil6");
  const auto m = trisecant_manifold(k);
  const double eps = k.tolerance().eps_match * k.tolerance().scale;
  for (const auto& g : m.gluing) {
    const auto& a = m.intervals[g.interval_a].ends[g.end_a];
    const auto& b = m.intervals[g.interval_b].ends[g.end_b];
    EXPECT_EQ(a.vertex, b.vertex);
    for (int s = 0; s < 3; ++s) EXPECT_LE(distance(a.trisecant.points[s].position, b.trisecant.points[s].position), eps);
  }
}

TEST(Manifold, ReversalInvariant) {
  for (const std::string name : {"trefoil6", "trefoil32"}) {
    const auto k = fixture(name);
    const auto a = summarize(trisecant_manifold(k, {16, true}));
    const auto b = summarize(trisecant_manifold(k.reversed(), {16, true}));
    EXPECT_EQ(a.intervals, b.intervals);
    EXPECT_EQ(a.components, b.components);
    EXPECT_EQ(a.circles, b.circles);
    EXPECT_EQ(a.arcs, b.arcs);
  }
}

TEST(TrisecantsFromPoint, TrefoilVertices) {
  const auto k = fixture("trefoil6");
  for (int v = 0; v < k.size(); ++v) {
    const auto ts = trisecants_from_point(k, k.point_on_edge(v, 0.0));
    EXPECT_GE(ts.size(), 2u) << v;
    for (const auto& t : ts) {
      EXPECT_LT(collinearity(t), 1e-9);
      EXPECT_TRUE(between(t));
    }
  }
}

TEST(TrisecantsFromPoint, AgreesWithIntervals) {
  // a point sampled from a skew interval sees that trisecant again
  const auto k = fixture("trefoil6");
  const auto m = trisecant_manifold(k, {8, true});
  int checked = 0;
  for (const auto& iv : m.intervals) {
    if (iv.kind != SecantKind::Skew) continue;
    const auto& s = iv.samples[iv.samples.size() / 2];
    const auto ts = trisecants_from_point(k, s.points[0]);
    bool hit = false;
    for (const auto& t : ts)
      hit = hit || (t.points[1].edge == s.points[1].edge && t.points[2].edge == s.points[2].edge &&
                    distance(t.points[2].position, s.points[2].position) < 1e-9);
    EXPECT_TRUE(hit);
    ++checked;
  }
  EXPECT_GT(checked, 0);
}
