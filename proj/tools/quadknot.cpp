// quadknot: audits and secant solvers for closed polygonal knots.
//
//   quadknot analyze knot.xyz --json
//   quadknot hull knot.xyz --point 0,0,0 --planes 10000 --seed 3
//   quadknot export knot.xyz --obj out.obj
//
// Exit codes: 0 ok, 1 input error, 2 genericity failure, 3 invariant violation.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <quadknot/quadknot.hpp>

using namespace quadknot;
using nlohmann::json;

namespace {

struct Flags {
  std::string input;
  bool json_out = false;
  double perturb_mag = 0.0;
  std::uint64_t seed = 0;
  std::string tolerance;
  int planes = 10000;
  int samples = 64;
  double from_point = 0.0;
  std::string point;
  std::string obj;
  std::string csv;
};

int exit_code(const Error& e) {
  switch (e.category()) {
    case Error::Category::Genericity: return 2;
    case Error::Category::Invariant: return 3;
    default: return 1;
  }
}

const char* category_name(Error::Category c) {
  switch (c) {
    case Error::Category::Input: return "input";
    case Error::Category::Genericity: return "genericity";
    case Error::Category::Invariant: return "invariant";
    case Error::Category::Usage: return "usage";
  }
  return "?";
}

void emit_error(const std::string& kind, const std::string& category, const std::string& message,
                const json& extra = json::object()) {
  json j = {{"error", kind}, {"category", category}, {"message", message}};
  for (const auto& [k, v] : extra.items()) j[k] = v;
  std::cerr << j.dump() << '\n';
}

std::vector<double> split_numbers(const std::string& s, char sep) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(detail::parse_real(tok, 0));
  return out;
}

PolygonalKnot load(const Flags& f) {
  std::ifstream in(f.input, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + f.input + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::string name = f.input;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos) name.erase(0, slash + 1);
  if (auto dot = name.find_last_of('.'); dot != std::string::npos && dot > 0) name.erase(dot);
  PolygonalKnot k = load_knot(text, sniff_format(text), name);
  if (f.tolerance.empty()) return k;

  ToleranceConfig tol = k.tolerance();
  bool fixed_scale = false;
  std::stringstream ss(f.tolerance);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--tolerance expects key=value pairs, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    tol.set(key, detail::parse_real(item.substr(eq + 1), 0));
    if (key == "scale") fixed_scale = true;
  }
  std::vector<Point3> v(k.vertices().begin(), k.vertices().end());
  if (fixed_scale) return PolygonalKnot::with_fixed_scale(std::move(v), tol, k.name());
  return PolygonalKnot(std::move(v), k.name(), tol);
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

json knot_point_json(const KnotPoint& p) {
  return {{"edge", p.edge}, {"t", p.t}, {"s", p.s}, {"position", to_triple(p.position)}};
}

json trisecant_json(const Trisecant& t) {
  json pts = json::array();
  for (const auto& p : t.points) pts.push_back(knot_point_json(p));
  return {{"points", pts}, {"order_class", to_string(t.order_class)}, {"kind", to_string(t.kind)}};
}

// A knot ready for the solvers: audited, and perturbed if allowed and needed.
struct Prepared {
  PolygonalKnot knot;
  AuditReport nondegeneracy, genericity;
  std::optional<QuadrisecantSearch> search;
  bool perturbed = false;
};

Prepared prepare(const Flags& f) {
  Prepared p{load(f), {}, {}, std::nullopt, false};
  auto audit = [&] {
    p.nondegeneracy = nondegeneracy_check(p.knot);
    p.search.reset();
    p.genericity = {};
    if (!p.nondegeneracy.passed) return false;
    try {
      p.search = find_quadrisecants(p.knot);
    } catch (const Error&) {
    }
    p.genericity = genericity_check(p.knot, p.search ? &*p.search : nullptr);
    return p.genericity.passed;
  };
  if (!audit() && f.perturb_mag > 0.0) {
    p.knot = perturb(p.knot, f.perturb_mag, f.seed);
    p.perturbed = true;
    audit();
  }
  return p;
}

// Reports the failed audit on stderr; returns the exit code.
int genericity_failure(const AuditReport& nd, const AuditReport& g) {
  const AuditReport& failed = nd.passed ? g : nd;
  std::string msg = "knot is not generic";
  if (!failed.violations.empty()) msg += ": " + std::string(to_string(failed.violations.front().condition));
  emit_error("GenericityFailure", "genericity", msg,
             {{"audit", nd.passed ? "genericity" : "nondegeneracy"}, {"violations", failed.violations}});
  return 2;
}

json header(const PolygonalKnot& k, const Flags& f, bool perturbed) {
  return {{"schema_version", kSchemaVersion},
          {"tool_version", kToolVersion},
          {"knot", {{"name", k.name()}, {"n", k.size()}, {"length", k.length()}, {"min_edge_length", k.min_edge_length()}}},
          {"seeds", {{"seed", f.seed}}},
          {"perturbation", {{"applied", perturbed}, {"magnitude", f.perturb_mag}}}};
}

void print_audit(const char* title, const AuditReport& r) {
  std::cout << title << ": " << (r.passed ? "passed" : "FAILED") << '\n';
  for (const auto& v : r.violations) {
    std::cout << "  " << to_string(v.condition) << " [";
    for (std::size_t i = 0; i < v.witness.size(); ++i) std::cout << (i ? " " : "") << v.witness[i];
    std::cout << "] " << v.detail << '\n';
  }
}

void print_quads(const std::vector<QuadRecord>& qs) {
  for (const auto& q : qs) {
    std::cout << "  " << q.type << " (" << q.knot_order << ") edges";
    for (int e : q.edges) std::cout << ' ' << e;
    std::cout << "  s";
    for (double s : q.s) std::cout << ' ' << s;
    std::cout << '\n';
  }
}

int cmd_analyze(const Flags& f) {
  const PolygonalKnot k = load(f);
  AnalyzeOptions opt;
  opt.perturb_magnitude = f.perturb_mag;
  opt.seed = f.seed;
  opt.hull_planes = f.planes;
  opt.interval_samples = f.samples;
  const AnalysisReport r = analyze(k, opt);
  if (f.json_out) {
    print(json(r));
  } else {
    std::cout << "knot " << r.name << ": n=" << r.n << " L=" << r.length << " h=" << r.min_edge_length << '\n';
    std::cout << "seed " << r.seed << (r.perturbed ? " (perturbed)" : "") << '\n';
    print_audit("nondegeneracy", r.nondegeneracy);
    if (r.nondegeneracy.passed)
      print_audit("genericity", r.genericity);
    else
      std::cout << "genericity: not run\n";
    if (r.generic) {
      std::cout << "quadrisecants: " << r.census.total << " (simple " << r.census.simple << ", flipped "
                << r.census.flipped << ", alternating " << r.census.alternating << ")\n";
      print_quads(r.quadrisecants);
      std::cout << "trisecant manifold: " << r.manifold.intervals << " intervals, " << r.manifold.circles
                << " circles, " << r.manifold.arcs << " arcs, " << r.manifold.unmatched << " unmatched\n";
      std::cout << "total curvature: " << r.curvature.total << (r.curvature.exceeds_four_pi ? " (> 4pi)" : "")
                << '\n';
      for (const auto& h : r.second_hull)
        std::cout << "second hull: min cut " << h.min_cut << " over " << h.planes_tested << " planes, "
                  << (h.passed ? "passed" : "failed") << '\n';
      std::cout << "thickness: " << r.thickness.thickness << ", ropelength " << r.thickness.ropelength << '\n';
    }
  }
  if (!r.generic) return genericity_failure(r.nondegeneracy, r.genericity);
  return 0;
}

int cmd_genericity(const Flags& f) {
  const Prepared p = prepare(f);
  const bool ok = p.nondegeneracy.passed && p.genericity.passed;
  if (f.json_out) {
    json j = header(p.knot, f, p.perturbed);
    j["nondegeneracy"] = p.nondegeneracy;
    j["genericity"] = p.genericity;
    j["generic"] = ok;
    print(j);
  } else {
    print_audit("nondegeneracy", p.nondegeneracy);
    if (p.nondegeneracy.passed) print_audit("genericity", p.genericity);
  }
  return ok ? 0 : genericity_failure(p.nondegeneracy, p.genericity);
}

int cmd_quadrisecants(const Flags& f) {
  const Prepared p = prepare(f);
  if (!p.nondegeneracy.passed || !p.genericity.passed) return genericity_failure(p.nondegeneracy, p.genericity);
  std::vector<QuadRecord> recs;
  for (const auto& q : p.search->quadrisecants) recs.push_back(to_record(q));
  const QuadCensus c = census(p.search->quadrisecants);
  if (f.json_out) {
    json j = header(p.knot, f, p.perturbed);
    j["quadrisecants"] = {{"census", c}, {"list", recs}};
    j["alternating_count"] = c.alternating;
    print(j);
  } else {
    std::cout << "quadrisecants: " << c.total << " (simple " << c.simple << ", flipped " << c.flipped
              << ", alternating " << c.alternating << ")\n";
    print_quads(recs);
  }
  return 0;
}

int cmd_trisecants(const Flags& f) {
  const Prepared p = prepare(f);
  if (!p.nondegeneracy.passed || !p.genericity.passed) return genericity_failure(p.nondegeneracy, p.genericity);
  const KnotPoint a = p.knot.point_at(f.from_point);
  const auto ts = trisecants_from_point(p.knot, a);
  if (f.json_out) {
    json j = header(p.knot, f, p.perturbed);
    json list = json::array();
    for (const auto& t : ts) list.push_back(trisecant_json(t));
    j["from_point"] = knot_point_json(a);
    j["trisecants"] = list;
    print(j);
  } else {
    std::cout << ts.size() << " trisecants from s=" << a.s << " (edge " << a.edge << ")\n";
    for (const auto& t : ts)
      std::cout << "  edges " << t.points[0].edge << ' ' << t.points[1].edge << ' ' << t.points[2].edge << "  "
                << to_string(t.order_class) << '\n';
  }
  return 0;
}

int cmd_manifold(const Flags& f) {
  const Prepared p = prepare(f);
  if (!p.nondegeneracy.passed || !p.genericity.passed) return genericity_failure(p.nondegeneracy, p.genericity);
  const TrisecantManifold m = trisecant_manifold(p.knot, {f.samples, true});
  const ManifoldSummary s = summarize(m);
  const auto curves = project_all(m, Projection::P12);
  const QuadCensus dp = double_point_census(group_by_line(p.knot, double_points(p.knot, curves)));
  const QuadCensus qc = census(p.search->quadrisecants);
  if (!f.csv.empty()) {
    std::ofstream out(f.csv);
    if (!out) throw InvalidArgument("cannot write '" + f.csv + "'");
    write_csv(out, curves);
  }
  if (f.json_out) {
    json j = header(p.knot, f, p.perturbed);
    j["trisecant_manifold"] = s;
    json comps = json::array();
    for (const auto& c : m.components)
      comps.push_back({{"kind", to_string(c.kind)}, {"intervals", c.intervals}, {"boundary", c.boundary}});
    j["components"] = comps;
    j["double_point_census"] = dp;
    j["quadrisecant_census"] = qc;
    j["censuses_agree"] = dp == qc;
    print(j);
  } else {
    std::cout << "intervals: " << s.intervals << " (skew " << s.skew_intervals << ", adjacent "
              << s.adjacent_intervals << ", half-open " << s.half_open_intervals << ")\n";
    std::cout << "components: " << s.components << " (circles " << s.circles << ", arcs " << s.arcs << ")\n";
    std::cout << "endpoints: " << s.glued_endpoints << " glued, " << s.degenerate_endpoints << " degenerate, "
              << s.unmatched << " unmatched\n";
    std::cout << "double points imply " << dp.total << " quadrisecants (alternating " << dp.alternating << "), "
              << (dp == qc ? "matching" : "NOT matching") << " the direct census\n";
  }
  return 0;
}

int cmd_curvature(const Flags& f) {
  const PolygonalKnot k = load(f);
  const double total = total_curvature(k);
  if (f.json_out) {
    json j = header(k, f, false);
    j["curvature"] = {{"total", total}, {"exceeds_four_pi", total > 4.0 * M_PI}};
    print(j);
  } else {
    std::cout << "total curvature: " << total << " (" << total / M_PI << " pi)\n";
  }
  return 0;
}

int cmd_hull(const Flags& f) {
  const PolygonalKnot k = load(f);
  const auto c = split_numbers(f.point, ',');
  if (c.size() != 3) throw InvalidArgument("--point expects x,y,z");
  const SecondHullWitness w = second_hull_test(k, {c[0], c[1], c[2]}, f.planes, f.seed);
  const HullRecord r = to_record(w);
  if (f.json_out) {
    json j = header(k, f, false);
    j["seeds"]["hull_planes"] = f.planes;
    j["second_hull"] = r;
    print(j);
  } else {
    std::cout << "seed " << f.seed << '\n';
    std::cout << "min cut " << r.min_cut << " over " << r.planes_tested << " planes: "
              << (r.passed ? "passed" : "failed") << '\n';
  }
  return 0;
}

// Clips a line to an axis-aligned box (slab method).
std::optional<std::pair<Point3, Point3>> clip_to_box(const PluckerLine& l, const Point3& lo, const Point3& hi) {
  const Point3 o = l.anchor();
  const Vec3 d = l.d();
  double t0 = -std::numeric_limits<double>::infinity(), t1 = std::numeric_limits<double>::infinity();
  const double oc[3] = {o.x, o.y, o.z}, dc[3] = {d.x, d.y, d.z}, lc[3] = {lo.x, lo.y, lo.z}, hc[3] = {hi.x, hi.y, hi.z};
  for (int a = 0; a < 3; ++a) {
    if (dc[a] == 0.0) {
      if (oc[a] < lc[a] || oc[a] > hc[a]) return std::nullopt;
      continue;
    }
    double u = (lc[a] - oc[a]) / dc[a], v = (hc[a] - oc[a]) / dc[a];
    if (u > v) std::swap(u, v);
    t0 = std::max(t0, u);
    t1 = std::min(t1, v);
  }
  if (t0 > t1) return std::nullopt;
  return std::make_pair(l.at(t0), l.at(t1));
}

int cmd_export(const Flags& f) {
  const Prepared p = prepare(f);
  if (!p.nondegeneracy.passed || !p.genericity.passed) return genericity_failure(p.nondegeneracy, p.genericity);
  const PolygonalKnot& k = p.knot;
  Point3 lo = k.vertex(0), hi = k.vertex(0);
  for (const auto& v : k.vertices()) {
    lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
  }
  const double pad = 0.1 * k.tolerance().scale;
  lo = lo - Vec3{pad, pad, pad};
  hi = hi + Vec3{pad, pad, pad};

  std::ofstream out(f.obj);
  if (!out) throw InvalidArgument("cannot write '" + f.obj + "'");
  out.precision(17);
  out << "# " << k.name() << '\n' << "o knot\n";
  for (const auto& v : k.vertices()) out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
  out << 'l';
  for (int i = 1; i <= k.size(); ++i) out << ' ' << i;
  out << " 1\n";
  int next = k.size() + 1, lines = 0;
  for (const auto& q : p.search->quadrisecants) {
    const auto seg = clip_to_box(q.line, lo, hi);
    if (!seg) continue;
    out << "o quadrisecant_" << lines++ << '\n';
    out << "v " << seg->first.x << ' ' << seg->first.y << ' ' << seg->first.z << '\n';
    out << "v " << seg->second.x << ' ' << seg->second.y << ' ' << seg->second.z << '\n';
    out << "l " << next << ' ' << next + 1 << '\n';
    next += 2;
  }
  const int vertices = next - 1;
  if (f.json_out) {
    json j = header(k, f, p.perturbed);
    j["obj"] = {{"path", f.obj}, {"vertices", vertices}, {"quadrisecant_lines", lines}};
    print(j);
  } else {
    std::cout << "wrote " << f.obj << ": " << vertices << " vertices, " << lines << " quadrisecant lines\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadrisecants, trisecants and related audits for polygonal knots"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* sub) {
    sub->add_option("input", f.input, "knot file (plain xyz or JSON)")->required();
    sub->add_flag("--json", f.json_out, "machine-readable output");
    sub->add_option("--tolerance", f.tolerance, "tolerance overrides, key=val,...");
  };
  auto randomized = [&](CLI::App* sub) { sub->add_option("--seed", f.seed, "seed for randomized steps"); };
  auto perturbable = [&](CLI::App* sub) {
    sub->add_option("--perturb", f.perturb_mag, "perturb into general position if the audits fail");
    randomized(sub);
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "run every audit and solver");
  common(analyze_cmd);
  perturbable(analyze_cmd);
  analyze_cmd->add_option("--planes", f.planes, "random planes per second-hull test");
  analyze_cmd->add_option("--samples", f.samples, "samples per trisecant interval");

  auto* quad_cmd = app.add_subcommand("quadrisecants", "list quadrisecants");
  common(quad_cmd);
  perturbable(quad_cmd);

  auto* tri_cmd = app.add_subcommand("trisecants", "trisecants through a knot point");
  common(tri_cmd);
  perturbable(tri_cmd);
  tri_cmd->add_option("--from-point", f.from_point, "arclength of the point")->required();

  auto* man_cmd = app.add_subcommand("manifold", "trisecant manifold and double points");
  common(man_cmd);
  perturbable(man_cmd);
  man_cmd->add_option("--samples", f.samples, "samples per trisecant interval");
  man_cmd->add_option("--csv", f.csv, "dump the projected curves");

  auto* gen_cmd = app.add_subcommand("genericity", "non-degeneracy and genericity audits");
  common(gen_cmd);
  perturbable(gen_cmd);

  auto* curv_cmd = app.add_subcommand("curvature", "total curvature");
  common(curv_cmd);

  auto* hull_cmd = app.add_subcommand("hull", "second-hull test at a point");
  common(hull_cmd);
  randomized(hull_cmd);
  hull_cmd->add_option("--point", f.point, "x,y,z")->required();
  hull_cmd->add_option("--planes", f.planes, "random planes");

  auto* export_cmd = app.add_subcommand("export", "OBJ with the knot and its quadrisecant lines");
  common(export_cmd);
  perturbable(export_cmd);
  export_cmd->add_option("--obj", f.obj, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("UsageError", "usage", e.what());
    return 1;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(f);
    if (*quad_cmd) return cmd_quadrisecants(f);
    if (*tri_cmd) return cmd_trisecants(f);
    if (*man_cmd) return cmd_manifold(f);
    if (*gen_cmd) return cmd_genericity(f);
    if (*curv_cmd) return cmd_curvature(f);
    if (*hull_cmd) return cmd_hull(f);
    if (*export_cmd) return cmd_export(f);
  } catch (const Error& e) {
    json extra = json::object();
    if (const auto* q = dynamic_cast<const QuintisecantFound*>(&e)) extra["components"] = q->components();
    if (const auto* d = dynamic_cast<const DegenerateInput*>(&e)) extra["indices"] = d->indices();
    emit_error(e.kind(), category_name(e.category()), e.what(), extra);
    return exit_code(e);
  } catch (const std::exception& e) {
    emit_error("InternalError", "invariant", e.what());
    return 3;
  }
  return 1;
}
