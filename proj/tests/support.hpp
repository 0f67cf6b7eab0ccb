#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <quadknot/quadknot.hpp>

#ifndef QUADKNOT_FIXTURE_DIR
#error "QUADKNOT_FIXTURE_DIR must be defined"
#endif

namespace qk_test {

using namespace quadknot;

inline std::string fixture_path(const std::string& name) { return std::string(QUADKNOT_FIXTURE_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline PolygonalKnot fixture(const std::string& stem) {
  const std::string text = read_file(fixture_path(stem + ".xyz"));
  return load_knot(text, KnotFormat::PlainXYZ, stem);
}

inline const std::vector<std::string>& generic_fixtures() {
  static const std::vector<std::string> names{"tetra4", "trefoil6", "trefoil32", "octagon_perturbed"};
  return names;
}

// Ruling {(t, y0, y0 t)} of z = xy, and the opposite ruling {(x0, t, x0 t)}.
inline PluckerLine ruling_y(double y0) { return PluckerLine::along({0, y0, 0}, {1, 0, y0}); }
inline PluckerLine ruling_x(double x0) { return PluckerLine::along({x0, 0, 0}, {0, 1, x0}); }

// Substitution oracle for z - xy along p + s d: the coefficients of the
// restricted polynomial c0 + c1 s + c2 s^2.
inline std::array<double, 3> saddle_restriction(const Point3& p, const Vec3& d) {
  return {p.z - p.x * p.y, d.z - p.x * d.y - p.y * d.x, -d.x * d.y};
}

inline double line_coord_distance(const PluckerLine& a, const PluckerLine& b) {
  const PluckerLine ca = a.canonical(), cb = b.canonical();
  return std::max((ca.d() - cb.d()).norm(), (ca.m() - cb.m()).norm());
}

// Brute-force quadrisecant oracle. For every 4-set of edges, minimizes the
// distance of the last two points from the line through the first two
// (Levenberg-Marquardt, t = (1 + sin theta) / 2 keeps each point on its
// closed edge) from a grid of starts, and keeps zero-residual solutions
// with four well separated points.
struct OracleQuad {
  std::array<int, 4> edges;
  std::array<double, 4> t;
  PluckerLine line;
};

struct CollinearityResidual {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  std::array<Point3, 4> p0;
  std::array<Vec3, 4> d;

  int inputs() const { return 4; }
  int values() const { return 6; }

  std::array<Point3, 4> points(const Eigen::VectorXd& th) const {
    std::array<Point3, 4> x;
    for (int i = 0; i < 4; ++i) x[i] = p0[i] + d[i] * (0.5 * (1.0 + std::sin(th(i))));
    return x;
  }

  int operator()(const Eigen::VectorXd& th, Eigen::VectorXd& f) const {
    const auto x = points(th);
    const Vec3 u = x[1] - x[0];
    const double un = std::max(u.norm(), 1e-12);
    const Vec3 r2 = u.cross(x[2] - x[0]) / un, r3 = u.cross(x[3] - x[0]) / un;
    f.resize(6);
    f << r2.x, r2.y, r2.z, r3.x, r3.y, r3.z;
    return 0;
  }
};

inline std::vector<OracleQuad> brute_force_quadrisecants(const PolygonalKnot& k, int grid = 4) {
  const int n = k.size();
  const double scale = k.tolerance().scale;
  std::vector<OracleQuad> out;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          std::array<int, 4> e{a, b, c, d};
          // first two must be non-adjacent so the reference line is well defined
          bool found = false;
          for (int i = 0; i < 4 && !found; ++i)
            for (int j = i + 1; j < 4 && !found; ++j)
              if (!k.adjacent_edges(e[i], e[j])) {
                std::array<int, 4> r{e[i], e[j], 0, 0};
                int m = 2;
                for (int q = 0; q < 4; ++q)
                  if (q != i && q != j) r[m++] = e[q];
                e = r;
                found = true;
              }
          if (!found) continue;

          CollinearityResidual fn;
          for (int i = 0; i < 4; ++i) {
            fn.p0[i] = k.vertex(e[i]);
            fn.d[i] = k.edge_vector(e[i]);
          }
          Eigen::NumericalDiff<CollinearityResidual> nd(fn);
          const int starts = grid * grid * grid * grid;
          for (int s = 0; s < starts; ++s) {
            Eigen::VectorXd th(4);
            int code = s;
            for (int i = 0; i < 4; ++i) {
              const double t = (code % grid + 0.5) / grid;
              code /= grid;
              th(i) = std::asin(2.0 * t - 1.0);
            }
            Eigen::LevenbergMarquardt<Eigen::NumericalDiff<CollinearityResidual>> lm(nd);
            lm.parameters.maxfev = 300;
            lm.parameters.xtol = 1e-15;
            lm.parameters.ftol = 1e-15;
            lm.minimize(th);
            Eigen::VectorXd f(6);
            fn(th, f);
            if (f.norm() > 1e-9 * scale) continue;
            const auto x = fn.points(th);
            double sep = std::numeric_limits<double>::infinity();
            for (int i = 0; i < 4; ++i)
              for (int j = i + 1; j < 4; ++j) sep = std::min(sep, distance(x[i], x[j]));
            if (sep < 1e-4 * scale) continue;
            OracleQuad q;
            q.edges = e;
            for (int i = 0; i < 4; ++i) q.t[i] = 0.5 * (1.0 + std::sin(th(i)));
            q.line = PluckerLine::through(x[0], x[1]).canonical();
            bool dup = false;
            for (const auto& o : out) dup = dup || line_coord_distance(o.line, q.line) < 1e-6;
            if (!dup) out.push_back(q);
          }
        }
  return out;
}

// Both line sets agree: every line of one is within tol of a line of the other.
inline bool same_line_sets(const std::vector<PluckerLine>& a, const std::vector<PluckerLine>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& x : a) {
    bool hit = false;
    for (const auto& y : b) hit = hit || line_coord_distance(x, y) <= tol;
    if (!hit) return false;
  }
  return true;
}

// Random embedded-ish polygon: vertices on a jittered circle in 3D.
inline std::vector<Point3> random_polygon(std::uint64_t seed, int n) {
  CounterRng rng(seed, 0);
  std::vector<Point3> v;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * (i + rng.uniform(-0.3, 0.3)) / n;
    v.push_back({std::cos(a) * rng.uniform(0.8, 1.2), std::sin(a) * rng.uniform(0.8, 1.2), rng.uniform(-0.5, 0.5)});
  }
  return v;
}

}  // namespace qk_test
