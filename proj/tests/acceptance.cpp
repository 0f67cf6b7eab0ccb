// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "support.hpp"

using namespace quadknot;
using namespace qk_test;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream note;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Point3 centroid(const PolygonalKnot& k) {
  Vec3 sum{0, 0, 0};
  for (const auto& v : k.vertices()) sum = sum + (v - Point3{0, 0, 0});
  return Point3{0, 0, 0} + sum / static_cast<double>(k.size());
}

PolygonalKnot perturbed_octagon() { return perturb(fixture("octagon"), 1e-3, 20240601); }

std::vector<PluckerLine> lines_of(const std::vector<Quadrisecant>& qs) {
  std::vector<PluckerLine> out;
  for (const auto& q : qs) out.push_back(q.line);
  return out;
}

std::vector<PluckerLine> lines_of(const std::vector<OracleQuad>& qs) {
  std::vector<PluckerLine> out;
  for (const auto& q : qs) out.push_back(q.line);
  return out;
}

void c1(Outcome& o) {
  for (const std::string name : {"trefoil6", "trefoil32"}) {
    const auto k = fixture(name);
    const auto t0 = std::chrono::steady_clock::now();
    const auto c = census(quadrisecants(k));
    const double dt = seconds_since(t0);
    o.note << " " << name << ": " << c.total << " total, " << c.alternating << " alternating, " << dt << " s;";
    o.require(c.alternating >= 1, name + " alternating >= 1");
    o.require(c.total >= 2, name + " total >= 2");
    o.require(dt < 5.0, name + " runtime < 5 s");
  }
}

void c2(Outcome& o) {
  double worst = 0.0;
  int count = 0;
  for (const std::string name : {"trefoil6", "trefoil32"})
    for (const auto& q : quadrisecants(fixture(name)))
      if (q.qtype == QuadType::Alternating) {
        worst = std::max(worst, std::abs(total_curvature(inscribed_quadrilateral(q)) - 4 * M_PI));
        ++count;
      }
  o.note << " " << count << " alternating, max |kappa - 4pi| = " << worst;
  o.require(count > 0, "some alternating quadrisecant");
  o.require(worst <= 1e-9, "within 1e-9");
}

void c3(Outcome& o) {
  for (const std::string name : {"trefoil6", "trefoil32"}) {
    const double kappa = total_curvature(fixture(name));
    o.note << " " << name << " " << kappa << ";";
    o.require(kappa > 4 * M_PI, name + " > 4pi");
  }
  const double sq = total_curvature(fixture("square"));
  o.note << " square " << sq;
  o.require(std::abs(sq - 2 * M_PI) <= 1e-9, "square = 2pi");
}

void c4(Outcome& o) {
  const auto k = perturbed_octagon();
  o.require(nondegeneracy_check(k).passed && genericity_check(k).passed, "perturbed octagon generic");
  const auto qs = quadrisecants(k);
  const auto oracle = brute_force_quadrisecants(k);
  o.note << " solver " << qs.size() << ", oracle " << oracle.size();
  o.require(qs.empty(), "empty census");
  o.require(oracle.empty(), "oracle empty");
}

void c5(Outcome& o) {
  const auto l1 = ruling_y(0), l2 = ruling_y(1), l3 = ruling_y(-1);
  struct Case {
    const char* label;
    Point3 p;
    Vec3 d;
    int expected;  // -1: infinite family
  };
  const Case cases[] = {{"(1,s,2)", {1, 0, 2}, {0, 1, 0}, 1},
                        {"(s,s,1)", {0, 0, 1}, {1, 1, 0}, 2},
                        {"(s,-s,1)", {0, 0, 1}, {1, -1, 0}, 0},
                        {"(t,3,3t)", {0, 3, 0}, {1, 0, 3}, -1}};
  for (const auto& c : cases) {
    const auto res = transversals_four_lines(l1, l2, l3, PluckerLine::along(c.p, c.d));
    if (c.expected < 0) {
      o.note << " " << c.label << ": " << (res.infinite_family ? "infinite" : "finite") << ";";
      o.require(res.infinite_family, std::string(c.label) + " infinite family");
      continue;
    }
    const auto co = saddle_restriction(c.p, c.d);
    std::vector<PluckerLine> expected;
    if (co[2] == 0.0) {
      expected.push_back(ruling_x(c.p.x - co[0] / co[1] * c.d.x));
    } else if (const double disc = co[1] * co[1] - 4 * co[2] * co[0]; disc > 0) {
      for (double sg : {-1.0, 1.0}) expected.push_back(ruling_x(c.p.x + (-co[1] + sg * std::sqrt(disc)) / (2 * co[2]) * c.d.x));
    }
    o.note << " " << c.label << ": " << res.lines.size() << ";";
    o.require(!res.infinite_family && static_cast<int>(res.lines.size()) == c.expected, std::string(c.label) + " count");
    o.require(same_line_sets(res.lines, expected, 1e-9), std::string(c.label) + " matches oracle");
  }
}

void c6(Outcome& o) {
  for (const auto& name : generic_fixtures()) {
    const auto m = trisecant_manifold(fixture(name), {64, false});
    int monotone = 0, bad_boundary = 0;
    for (const auto& iv : m.intervals) monotone += interval_monotone(iv) ? 1 : 0;
    for (const auto& comp : m.components)
      for (auto [iv, end] : comp.boundary) bad_boundary += m.intervals[iv].ends[end].closed() ? 1 : 0;
    o.note << " " << name << ": " << m.intervals.size() << " intervals, " << m.unmatched.size() << " unmatched;";
    o.require(m.unmatched.empty(), name + " unmatched = 0");
    o.require(m.glued_endpoints() == m.vertex_endpoints, name + " every vertex endpoint glued once");
    o.require(bad_boundary == 0, name + " boundary = DegenerateEnds");
    o.require(monotone == static_cast<int>(m.intervals.size()), name + " monotone");
  }
}

void c7(Outcome& o) {
  for (const auto& name : generic_fixtures()) {
    const auto k = fixture(name);
    const auto m = trisecant_manifold(k);
    const auto dp = double_point_census(group_by_line(k, double_points(k, project_all(m, Projection::P12))));
    const auto qc = census(quadrisecants(k));
    o.note << " " << name << ": " << dp.alternating << "/" << dp.simple << "/" << dp.flipped << " vs " << qc.alternating
           << "/" << qc.simple << "/" << qc.flipped << ";";
    o.require(dp == qc, name + " censuses agree");
  }
}

void c8(Outcome& o) {
  for (const std::string name : {"trefoil6", "trefoil32"}) {
    const auto k = fixture(name);
    const double h = k.min_edge_length();
    double worst = std::numeric_limits<double>::infinity();
    int points = 0;
    for (const auto& c : project_all(trisecant_manifold(k), Projection::P12))
      for (const auto& p : c.polyline) {
        const auto side = c.order_class == OrderClass::Different ? DiagonalSide::Lower : DiagonalSide::Upper;
        worst = std::min(worst, diagonal_distance(k, p, side) - h);
        ++points;
      }
    o.note << " " << name << ": " << points << " points, min(dist - h) = " << worst << ";";
    o.require(points > 0 && worst >= -1e-9, name + " dist >= h - 1e-9");
  }
}

void c9(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const std::string name : {"trefoil6", "trefoil32"}) {
    const auto k = fixture(name);
    int tested = 0;
    for (const auto& q : quadrisecants(k)) {
      if (q.qtype != QuadType::Alternating) continue;
      const auto w = second_hull_test(k, midsegment_witness(q), 10000, 0);
      o.require(w.passed() && w.min_cut >= 4, name + " midsegment passes");
      ++tested;
    }
    o.note << " " << name << ": " << tested << " midsegments;";
    o.require(tested > 0, name + " has midsegments");
  }
  const auto oct = fixture("octagon");
  const auto c = centroid(oct);
  const auto w = second_hull_test(oct, c, 10000, 0);
  const int battery = static_cast<int>(hull_battery(oct, c).size());
  o.note << " octagon centroid fails after " << w.planes_tested << " of " << battery << " battery planes;";
  o.require(!w.passed() && w.planes_tested <= battery, "octagon centroid fails in battery");
  const double dt = seconds_since(t0);
  o.note << " " << dt << " s";
  o.require(dt < 10.0, "runtime < 10 s");
}

void c10(Outcome& o) {
  const auto k = fixture("trefoil6");
  std::size_t fewest = std::numeric_limits<std::size_t>::max();
  for (int v = 0; v < k.size(); ++v) fewest = std::min(fewest, trisecants_from_point(k, k.point_on_edge(v, 0.0)).size());
  o.note << " fewest from a vertex: " << fewest;
  o.require(fewest >= 2, ">= 2 from every vertex");
}

void c11(Outcome& o) {
  for (const auto& name : generic_fixtures()) {
    AnalyzeOptions opt;
    opt.seed = 11;
    const auto a = nlohmann::json(analyze(fixture(name), opt)).dump(2);
    const auto b = nlohmann::json(analyze(fixture(name), opt)).dump(2);
    o.require(a == b, name + " byte-identical");
  }
  const auto p1 = perturb(fixture("square"), 1e-3, 7), p2 = perturb(fixture("square"), 1e-3, 7);
  o.require(p1.vertices() == p2.vertices(), "perturb reproducible");
  for (const auto& name : generic_fixtures()) {
    const auto k = fixture(name);
    if (k.size() > 8) continue;
    const auto qs = quadrisecants(k);
    const auto oracle = brute_force_quadrisecants(k);
    o.note << " " << name << ": " << qs.size() << "/" << oracle.size() << ";";
    o.require(same_line_sets(lines_of(qs), lines_of(oracle), 1e-6), name + " matches oracle");
  }
  const auto oct = perturbed_octagon();
  o.require(quadrisecants(oct).empty() && brute_force_quadrisecants(oct).empty(), "perturbed octagon matches oracle");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"quadrisecant existence on the trefoils", c1},
      {"inscribed alternating quadrilateral is 4pi", c2},
      {"total curvature of trefoils > 4pi, square = 2pi", c3},
      {"perturbed convex octagon has no quadrisecants", c4},
      {"transversals on the z = xy regulus", c5},
      {"trisecant manifold glues completely", c6},
      {"double-point census equals quadrisecant census", c7},
      {"trisecant projections keep distance h from the diagonal", c8},
      {"second hull membership", c9},
      {"trisecants from every trefoil6 vertex", c10},
      {"determinism and oracle equivalence", c11},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.note << " [exception: " << e.what() << "]";
    }
    std::printf("%s criterion %zu: %s:%s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.note.str().c_str());
    std::fflush(stdout);
    failures += o.ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
