#include <gtest/gtest.h>

#include <json.hpp>

#include "support.hpp"

using namespace quadknot;
using namespace qk_test;
using nlohmann::json;

#ifndef QUADKNOT_GOLDEN_DIR
#error "QUADKNOT_GOLDEN_DIR must be defined"
#endif

namespace {

json golden(const std::string& stem) {
  return json::parse(read_file(std::string(QUADKNOT_GOLDEN_DIR) + "/" + stem + ".json"));
}

}  // namespace

TEST(Report, RoundTrip) {
  for (const auto& name : generic_fixtures()) {
    const auto r = analyze(fixture(name));
    const json j = r;
    const auto back = j.get<AnalysisReport>();
    EXPECT_EQ(back, r) << name;
    EXPECT_EQ(json(back).dump(), j.dump()) << name;
  }
}

TEST(Report, SchemaVersionChecked) {
  json j = analyze(fixture("tetra4"));
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  j["schema_version"] = kSchemaVersion + 1;
  EXPECT_THROW(j.get<AnalysisReport>(), ParseError);
}

TEST(Report, Golden) {
  for (const auto& name : generic_fixtures()) EXPECT_EQ(json(analyze(fixture(name))), golden(name)) << name;
  AnalyzeOptions opt;
  opt.perturb_magnitude = 1e-3;
  opt.seed = 7;
  const auto r = analyze(fixture("square"), opt);
  EXPECT_EQ(json(r), golden("square_perturbed"));
  EXPECT_TRUE(r.perturbed);
  EXPECT_TRUE(r.generic);
  EXPECT_EQ(r.census.total, 0);
}

TEST(Report, Deterministic) {
  for (const std::string name : {"trefoil6", "octagon_perturbed"}) {
    const auto a = json(analyze(fixture(name))).dump(2);
    const auto b = json(analyze(fixture(name))).dump(2);
    EXPECT_EQ(a, b) << name;
  }
}

TEST(Report, Contents) {
  const auto r = analyze(fixture("trefoil6"));
  EXPECT_TRUE(r.generic);
  EXPECT_FALSE(r.perturbed);
  EXPECT_EQ(r.n, 6);
  EXPECT_EQ(r.census.alternating, 3);
  EXPECT_EQ(r.double_point_census, r.census);
  EXPECT_EQ(r.quadrisecants.size(), static_cast<std::size_t>(r.census.total));
  EXPECT_EQ(r.manifold.unmatched, 0);
  EXPECT_TRUE(r.manifold.monotone);
  EXPECT_TRUE(r.curvature.exceeds_four_pi);
  ASSERT_EQ(r.curvature.inscribed_alternating.size(), 3u);
  for (double c : r.curvature.inscribed_alternating) EXPECT_NEAR(c, 4 * M_PI, 1e-9);
  ASSERT_EQ(r.second_hull.size(), 3u);
  for (const auto& h : r.second_hull) {
    EXPECT_TRUE(h.passed);
    EXPECT_GE(h.min_cut, 4);
  }
  EXPECT_GT(r.thickness.thickness, 0.0);
  const json j = r;
  EXPECT_EQ(j["alternating_count"], 3);
  EXPECT_EQ(j["seeds"]["seed"], 0);
}

TEST(Report, NonGenericStopsEarly) {
  const auto r = analyze(fixture("square"));
  EXPECT_FALSE(r.generic);
  EXPECT_FALSE(r.nondegeneracy.passed);
  EXPECT_TRUE(r.quadrisecants.empty());
  EXPECT_TRUE(r.second_hull.empty());
}
