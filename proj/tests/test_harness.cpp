#include <lieflow/lieflow.hpp>
#include <lieflow/report.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lieflow;

TEST(Harness, CatalogContents) {
  ASSERT_EQ(catalog().size(), 7u);
  EXPECT_EQ(find_scenario("heis-saddle").expected, Expected::central_subgroup);
  EXPECT_EQ(find_scenario("plane-rotation").expected, Expected::all);
  EXPECT_THROW(find_scenario("nope"), InputError);
  for (const auto& sc : catalog()) EXPECT_NO_THROW(sc.make_flow()) << sc.name;
}

TEST(Harness, PlaneSaddleRecurrenceNearOrigin) {
  const auto r = run_scenario("plane-saddle");
  EXPECT_TRUE(r.passed);
  EXPECT_FALSE(r.recurrent.empty());
  for (int v : r.recurrent) EXPECT_LE(r.graph->coords[v].norm(), 0.2);
}

TEST(Harness, PlaneRotationAllRecurrent) {
  const auto r = run_scenario("plane-rotation");
  EXPECT_TRUE(r.passed);
  EXPECT_GE(r.mutual_reachability, 0.95);
}

TEST(Harness, HeisenbergSaddleAtSmallEps) {
  Overrides ov;
  ov.eps = 0.1;
  const auto r = run_scenario("heis-saddle", ov);
  EXPECT_TRUE(r.passed) << (r.reasons.empty() ? "" : r.reasons.front());
  EXPECT_LE(r.max_central_distance, 0.2);
  EXPECT_EQ(r.dim_plus, 1);
  EXPECT_EQ(r.dim_zero, 1);
  EXPECT_EQ(r.dim_minus, 1);
}

TEST(Harness, HeisenbergSweepIsMonotone) {
  const auto s = sweep(find_scenario("heis-saddle"), {0.2, 0.1});
  EXPECT_TRUE(s.monotone);
  for (const auto& r : s.reports) EXPECT_TRUE(r.passed) << r.eps;
}

TEST(Harness, PlaneSweepShrinks) {
  const auto s = sweep(find_scenario("plane-saddle"), {0.2, 0.1, 0.05});
  EXPECT_TRUE(s.monotone);
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& r : s.reports) {
    double radius = 0;
    for (int v : r.recurrent) radius = std::max(radius, r.graph->coords[v].norm());
    EXPECT_LE(radius, prev + 1e-12);
    prev = radius;
  }
  EXPECT_THROW(sweep(find_scenario("plane-saddle"), {}), InputError);
  EXPECT_THROW(sweep(find_scenario("plane-saddle"), {0.1, -1}), InputError);
}

TEST(Harness, LargeEpsMakesEveryInteriorNodeRecurrent) {
  Overrides ov;
  ov.eps = 3.0;
  ov.spacing = 0.5;
  ov.window = Window::cube(2, 4.0);
  const auto r = run_scenario("plane-rotation", ov);
  ASSERT_GT(r.interior_count, 0);
  EXPECT_EQ(static_cast<int>(r.recurrent.size()), r.interior_count);
}

TEST(Harness, NoInteriorNodesFails) {
  Overrides ov;
  ov.eps = 5.0;
  const auto r = run_scenario("plane-saddle", ov);
  EXPECT_FALSE(r.passed);
  ASSERT_FALSE(r.reasons.empty());
  EXPECT_EQ(r.reasons.front(), "no interior nodes");
}

TEST(Harness, DeterministicOutput) {
  Overrides ov;
  ov.seed = 42;
  const auto a = to_json(run_scenario("heis-shear", ov)).dump();
  const auto b = to_json(run_scenario("heis-shear", ov)).dump();
  EXPECT_EQ(a, b);
  ov.threads = 4;
  EXPECT_EQ(to_json(run_scenario("heis-shear", ov)).dump(), a);
}

TEST(Harness, RestrictionCheck) {
  const auto& sc = find_scenario("heis-saddle");
  const auto r = restriction_check(sc, run_scenario(sc));
  EXPECT_TRUE(r.applicable);
  EXPECT_TRUE(r.all_recurrent);
  EXPECT_TRUE(r.passed);
  const auto& so3 = find_scenario("so3-inner");
  EXPECT_FALSE(restriction_check(so3, run_scenario(so3)).applicable);
}

TEST(Report, JsonSchemaKeys) {
  const auto r = run_scenario("plane-saddle");
  const Json j = to_json(r);
  for (const char* key : {"schema", "kind", "scenario", "parameters", "flow", "graph", "recurrence", "expected",
                          "verdict", "reasons", "warnings"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_FALSE(j.contains("seconds"));
  EXPECT_TRUE(to_json(r, true).contains("seconds"));
  EXPECT_EQ(j["verdict"], "PASS");
  EXPECT_EQ(j["recurrence"]["count"], r.recurrent.size());
  const Json s = to_json(sweep(find_scenario("plane-saddle"), {0.2, 0.1}));
  EXPECT_EQ(s["kind"], "sweep");
  EXPECT_EQ(s["runs"].size(), 2u);
}

TEST(Report, CsvRows) {
  const auto r = run_scenario("plane-saddle");
  std::istringstream in(to_csv(r));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "node,x0,x1,interior,recurrent,component,central_distance,drift,out_degree");
  int rows = 0, recurrent = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    ASSERT_GE(cells.size(), 6u);
    recurrent += cells[4] == "1";
  }
  EXPECT_EQ(rows, r.node_count);
  EXPECT_EQ(recurrent, static_cast<int>(r.recurrent.size()));
}

TEST(Report, WriteAtomic) {
  const auto dir = std::filesystem::temp_directory_path() / "lieflow_write_atomic";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "out.txt").string();
  write_atomic(path, "first");
  write_atomic(path, "second");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(content, "second");
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  EXPECT_THROW(write_atomic((dir / "missing" / "x.txt").string(), "x"), InputError);
  std::filesystem::remove_all(dir);
}
