#pragma once

// The analysis pipeline and its JSON report.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "analysis.hpp"
#include "audit.hpp"
#include "quadrisecant.hpp"
#include "secant_structure.hpp"
#include "transversal.hpp"

namespace quadknot {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

using Triple = std::array<double, 3>;

inline Triple to_triple(const Vec3& v) { return {v.x, v.y, v.z}; }

struct QuadRecord {
  std::string type;
  std::string knot_order;
  std::array<int, 4> edges{};
  std::array<double, 4> t{}, s{};
  std::array<Triple, 4> points{};
  Triple direction{}, moment{};
  bool vertex_adjacent = false;

  bool operator==(const QuadRecord&) const = default;
};

inline QuadRecord to_record(const Quadrisecant& q) {
  QuadRecord r;
  r.type = to_string(q.qtype);
  r.knot_order = q.knot_order;
  for (int i = 0; i < 4; ++i) {
    r.edges[i] = q.points[i].edge;
    r.t[i] = q.points[i].t;
    r.s[i] = q.points[i].s;
    r.points[i] = to_triple(q.points[i].position);
  }
  r.direction = to_triple(q.line.d());
  r.moment = to_triple(q.line.m());
  r.vertex_adjacent = q.vertex_adjacent;
  return r;
}

struct ManifoldSummary {
  int intervals = 0, skew_intervals = 0, adjacent_intervals = 0, half_open_intervals = 0;
  int components = 0, circles = 0, arcs = 0;
  int vertex_endpoints = 0, glued_endpoints = 0, degenerate_endpoints = 0, unmatched = 0;
  bool monotone = true;

  bool operator==(const ManifoldSummary&) const = default;
};

inline ManifoldSummary summarize(const TrisecantManifold& m) {
  ManifoldSummary s;
  s.intervals = static_cast<int>(m.intervals.size());
  for (const auto& iv : m.intervals) {
    (iv.kind == SecantKind::Skew ? s.skew_intervals : s.adjacent_intervals)++;
    if (iv.half_open()) ++s.half_open_intervals;
    s.monotone = s.monotone && interval_monotone(iv);
  }
  s.components = static_cast<int>(m.components.size());
  for (const auto& c : m.components) (c.kind == ManifoldComponent::Kind::Circle ? s.circles : s.arcs)++;
  s.vertex_endpoints = m.vertex_endpoints;
  s.glued_endpoints = m.glued_endpoints();
  s.degenerate_endpoints = m.degenerate_endpoints;
  s.unmatched = static_cast<int>(m.unmatched.size());
  return s;
}

struct CurvatureSummary {
  double total = 0.0;
  bool exceeds_four_pi = false;
  std::vector<double> inscribed_alternating;  // per alternating quadrisecant, in list order

  bool operator==(const CurvatureSummary&) const = default;
};

struct HullRecord {
  Triple point{};
  int planes_tested = 0;
  int min_cut = 0;
  bool passed = true;
  Triple failing_normal{};  // zero unless failed
  double failing_offset = 0.0;

  bool operator==(const HullRecord&) const = default;
};

inline HullRecord to_record(const SecondHullWitness& w) {
  HullRecord r;
  r.point = to_triple(w.point);
  r.planes_tested = w.planes_tested;
  r.min_cut = w.min_cut;
  r.passed = w.passed();
  if (w.failing_plane) {
    r.failing_normal = to_triple(w.failing_plane->normal.vec());
    r.failing_offset = w.failing_plane->offset;
  }
  return r;
}

struct ThicknessSummary {
  int samples_per_edge = 0;
  double thickness = 0.0;
  double ropelength = 0.0;

  bool operator==(const ThicknessSummary&) const = default;
};

struct AnalysisReport {
  int schema_version = kSchemaVersion;
  std::string tool_version = kToolVersion;
  std::string name;
  int n = 0;
  double length = 0.0;
  double min_edge_length = 0.0;
  ToleranceConfig tolerances;
  bool perturbed = false;
  double perturb_magnitude = 0.0;
  std::uint64_t seed = 0;
  int hull_planes = 0;
  AuditReport nondegeneracy, genericity;
  bool generic = false;
  QuadCensus census;
  std::vector<QuadRecord> quadrisecants;
  ManifoldSummary manifold;
  QuadCensus double_point_census;  // implied by the pi12 double points
  CurvatureSummary curvature;
  std::vector<HullRecord> second_hull;
  ThicknessSummary thickness;

  bool operator==(const AnalysisReport&) const = default;
};

struct AnalyzeOptions {
  double perturb_magnitude = 0.0;  // 0: never perturb
  std::uint64_t seed = 0;
  int hull_planes = 10000;
  int thickness_samples = 4;
  int interval_samples = 64;
};

// Audits, optionally perturbs into general position, then runs every solver.
// Returns early, with only the audits filled in, if the knot is not generic.
inline AnalysisReport analyze(const PolygonalKnot& input, const AnalyzeOptions& opt = {}) {
  AnalysisReport r;
  r.seed = opt.seed;
  r.hull_planes = opt.hull_planes;
  r.perturb_magnitude = opt.perturb_magnitude;

  PolygonalKnot k = input;
  std::optional<QuadrisecantSearch> search;
  auto audit = [&](const PolygonalKnot& c) {
    r.nondegeneracy = nondegeneracy_check(c);
    r.genericity = {};
    search.reset();
    if (!r.nondegeneracy.passed) return false;
    try {
      search = find_quadrisecants(c);
    } catch (const Error&) {
      search.reset();
    }
    r.genericity = genericity_check(c, search ? &*search : nullptr);
    return r.genericity.passed;
  };
  r.generic = audit(k);
  if (!r.generic && opt.perturb_magnitude > 0.0) {
    k = perturb(k, opt.perturb_magnitude, opt.seed);
    r.perturbed = true;
    r.generic = audit(k);
  }

  r.name = k.name();
  r.n = k.size();
  r.length = k.length();
  r.min_edge_length = k.min_edge_length();
  r.tolerances = k.tolerance();
  if (!r.generic) return r;

  std::vector<Quadrisecant> qs = search->quadrisecants;
  r.census = census(qs);
  for (const auto& q : qs) r.quadrisecants.push_back(to_record(q));

  const TrisecantManifold m = trisecant_manifold(k, {opt.interval_samples, true});
  r.manifold = summarize(m);
  r.double_point_census =
      double_point_census(group_by_line(k, double_points(k, project_all(m, Projection::P12))));

  r.curvature.total = total_curvature(k);
  r.curvature.exceeds_four_pi = r.curvature.total > 4.0 * M_PI;
  for (const auto& q : qs)
    if (q.qtype == QuadType::Alternating) {
      const auto quad = inscribed_quadrilateral(q);
      r.curvature.inscribed_alternating.push_back(total_curvature(quad));
      r.second_hull.push_back(to_record(second_hull_test(k, midsegment_witness(q), opt.hull_planes, opt.seed)));
    }

  r.thickness.samples_per_edge = opt.thickness_samples;
  r.thickness.thickness = thickness_estimate(k, opt.thickness_samples);
  r.thickness.ropelength = k.length() / r.thickness.thickness;
  return r;
}

// JSON ---------------------------------------------------------------------

inline void to_json(nlohmann::json& j, const ToleranceConfig& t) {
  j = {{"eps_collinear", t.eps_collinear}, {"eps_coplanar", t.eps_coplanar}, {"eps_skew", t.eps_skew},
       {"eps_root", t.eps_root},           {"eps_unit", t.eps_unit},         {"eps_plucker", t.eps_plucker},
       {"eps_quadric", t.eps_quadric},     {"eps_match", t.eps_match},       {"scale", t.scale}};
}
inline void from_json(const nlohmann::json& j, ToleranceConfig& t) {
  for (const auto& [key, value] : j.items()) t.set(key, value.get<double>());
}

inline void to_json(nlohmann::json& j, const Violation& v) {
  j = {{"condition", to_string(v.condition)}, {"witness", v.witness}, {"detail", v.detail}, {"magnitude", v.magnitude}};
}
inline void from_json(const nlohmann::json& j, Violation& v) {
  const std::string c = j.at("condition").get<std::string>();
  for (Condition x : {Condition::NoFourCoplanar, Condition::NoThreeCollinear, Condition::G1, Condition::G2, Condition::G3})
    if (c == to_string(x)) v.condition = x;
  j.at("witness").get_to(v.witness);
  j.at("detail").get_to(v.detail);
  j.at("magnitude").get_to(v.magnitude);
}

inline void to_json(nlohmann::json& j, const AuditReport& a) { j = {{"passed", a.passed}, {"violations", a.violations}}; }
inline void from_json(const nlohmann::json& j, AuditReport& a) {
  j.at("passed").get_to(a.passed);
  j.at("violations").get_to(a.violations);
}

inline void to_json(nlohmann::json& j, const QuadCensus& c) {
  j = {{"total", c.total}, {"simple", c.simple}, {"flipped", c.flipped}, {"alternating", c.alternating}};
}
inline void from_json(const nlohmann::json& j, QuadCensus& c) {
  j.at("total").get_to(c.total);
  j.at("simple").get_to(c.simple);
  j.at("flipped").get_to(c.flipped);
  j.at("alternating").get_to(c.alternating);
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(QuadRecord, type, knot_order, edges, t, s, points, direction, moment,
                                   vertex_adjacent)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ManifoldSummary, intervals, skew_intervals, adjacent_intervals,
                                   half_open_intervals, components, circles, arcs, vertex_endpoints,
                                   glued_endpoints, degenerate_endpoints, unmatched, monotone)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CurvatureSummary, total, exceeds_four_pi, inscribed_alternating)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(HullRecord, point, planes_tested, min_cut, passed, failing_normal, failing_offset)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ThicknessSummary, samples_per_edge, thickness, ropelength)

inline void to_json(nlohmann::json& j, const AnalysisReport& r) {
  j = nlohmann::json::object();
  j["schema_version"] = r.schema_version;
  j["tool_version"] = r.tool_version;
  j["knot"] = {{"name", r.name}, {"n", r.n}, {"length", r.length}, {"min_edge_length", r.min_edge_length}};
  j["tolerances"] = r.tolerances;
  j["seeds"] = {{"seed", r.seed}, {"hull_planes", r.hull_planes}};
  j["perturbation"] = {{"applied", r.perturbed}, {"magnitude", r.perturb_magnitude}};
  j["nondegeneracy"] = r.nondegeneracy;
  j["genericity"] = r.genericity;
  j["generic"] = r.generic;
  j["quadrisecants"] = {{"census", r.census}, {"list", r.quadrisecants}};
  j["alternating_count"] = r.census.alternating;
  j["trisecant_manifold"] = r.manifold;
  j["double_point_census"] = r.double_point_census;
  j["curvature"] = r.curvature;
  j["second_hull"] = r.second_hull;
  j["thickness"] = r.thickness;
}

inline void from_json(const nlohmann::json& j, AnalysisReport& r) {
  j.at("schema_version").get_to(r.schema_version);
  if (r.schema_version != kSchemaVersion)
    throw ParseError("unsupported report schema version " + std::to_string(r.schema_version));
  j.at("tool_version").get_to(r.tool_version);
  const auto& kn = j.at("knot");
  kn.at("name").get_to(r.name);
  kn.at("n").get_to(r.n);
  kn.at("length").get_to(r.length);
  kn.at("min_edge_length").get_to(r.min_edge_length);
  j.at("tolerances").get_to(r.tolerances);
  j.at("seeds").at("seed").get_to(r.seed);
  j.at("seeds").at("hull_planes").get_to(r.hull_planes);
  j.at("perturbation").at("applied").get_to(r.perturbed);
  j.at("perturbation").at("magnitude").get_to(r.perturb_magnitude);
  j.at("nondegeneracy").get_to(r.nondegeneracy);
  j.at("genericity").get_to(r.genericity);
  j.at("generic").get_to(r.generic);
  j.at("quadrisecants").at("census").get_to(r.census);
  j.at("quadrisecants").at("list").get_to(r.quadrisecants);
  j.at("trisecant_manifold").get_to(r.manifold);
  j.at("double_point_census").get_to(r.double_point_census);
  j.at("curvature").get_to(r.curvature);
  j.at("second_hull").get_to(r.second_hull);
  j.at("thickness").get_to(r.thickness);
}

}  // namespace quadknot
