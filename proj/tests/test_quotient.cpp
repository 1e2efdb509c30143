#include <lieflow/lieflow.hpp>

#include <gtest/gtest.h>

#include "generators.hpp"

using namespace lieflow;

namespace {

Mat axis(int n, int i) {
  Mat m = Mat::Zero(n, 1);
  m(i, 0) = 1;
  return m;
}

Flow by_name(const char* name) { return find_scenario(name).make_flow(); }

// A cycle through the origin of a quotient graph, of length >= 2.
std::vector<int> origin_cycle(const ChainGraph& g) {
  const int o = nearest_node(g, Vec::Zero(g.window.dim()));
  const auto scc = strongly_connected_components(g);
  for (int w : scc.classes[scc.component[o]])
    if (w != o) {
      auto p = shortest_path(g, o, w);
      const auto q = shortest_path(g, w, o);
      p.insert(p.end(), q.begin() + 1, q.end());
      return p;
    }
  return shortest_path(g, o, o);
}

}  // namespace

TEST(Quotient, HeisenbergByCenter) {
  const QuotientMap qm(by_name("heis-saddle"), axis(3, 2));
  EXPECT_EQ(qm.quotient_dim(), 2);
  const Flow& q = qm.induced_flow();
  EXPECT_EQ(q.chart().kind(), ChartKind::abelian);
  Mat expect = Mat::Zero(2, 2);
  expect(0, 0) = 1;
  expect(1, 1) = -1;
  EXPECT_LT((q.generator() - expect).norm(), 1e-14);
  EXPECT_LT(qm.intertwining_residual(100, 2.0), 1e-9);
}

TEST(Quotient, TrivialIdealKeepsTheFlow) {
  const Flow f = by_name("heis-shear");
  const QuotientMap qm(f, Mat(3, 0));
  EXPECT_EQ(qm.quotient_dim(), 3);
  EXPECT_LT((qm.induced_flow().generator() - f.generator()).norm(), 1e-15);
  EXPECT_EQ(qm.induced_flow().chart().kind(), ChartKind::nilpotent_exp);
  EXPECT_LT(qm.intertwining_residual(100, 2.0), 1e-9);
}

TEST(Quotient, PlaneSaddleByStableAxis) {
  const QuotientMap qm(by_name("plane-saddle"), axis(2, 1));
  ASSERT_EQ(qm.quotient_dim(), 1);
  EXPECT_NEAR(qm.induced_flow().generator()(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(homo_witness(qm, 0.3, 50), 0.3, 1e-12);
}

TEST(Quotient, RejectsBadSubspaces) {
  EXPECT_THROW(QuotientMap(by_name("heis-saddle"), axis(3, 0)), InputError);
  EXPECT_THROW(QuotientMap(by_name("plane-rotation"), axis(2, 0)), InputError);
  EXPECT_THROW(QuotientMap(by_name("so3-inner"), axis(3, 2)), UnsupportedError);
}

TEST(Quotient, WholeGroupQuotient) {
  const QuotientMap qm(by_name("heis-saddle"), Mat::Identity(3, 3));
  EXPECT_TRUE(qm.trivial_quotient());
  EXPECT_TRUE(std::isinf(homo_witness(qm, 0.3, 10)));
  EXPECT_THROW(qm.induced_flow(), UnsupportedError);
}

TEST(Quotient, HomoWitnessHeisenberg) {
  const QuotientMap qm(by_name("heis-saddle"), axis(3, 2));
  EXPECT_GE(homo_witness(qm, 0.3, 100, 2.0), 0.2);
}

TEST(Quotient, ProjectZeroResidualChain) {
  const Flow f = by_name("heis-saddle");
  const QuotientMap qm(f, axis(3, 2));
  const Chain xi = orbit_segment(f, f.chart().exp(Vec::Constant(3, 0.5)), 1.0);
  EXPECT_LT(validate_chain(qm.induced_flow(), project_chain(qm, xi), 1e-12, 1.0).max_residual, 1e-14);
}

TEST(Quotient, ProjectedResidualsDoNotGrow) {
  gen::Rng rng(3);
  for (const char* name : {"heis-saddle", "heis-shear"}) {
    const Flow f = by_name(name);
    const QuotientMap qm(f, axis(3, 2));
    for (int k = 0; k < 50; ++k) {
      const Chain xi = gen::chain(rng, f, 0.2, 0.5, 4, 1.5);
      const auto a = jump_residuals(f, xi);
      const auto b = jump_residuals(qm.induced_flow(), project_chain(qm, xi));
      for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LE(b[i], a[i] + 1e-12) << name;
    }
  }
}

TEST(Quotient, EngineCycleProjectsToOriginCycle) {
  const auto& sc = find_scenario("heis-saddle");
  const Flow f = sc.make_flow();
  const QuotientMap qm(f, axis(3, 2));
  const auto g = build_chain_graph(f, sc.window, sc.spacing, sc.eps, sc.tau);
  const int v = nearest_node(g, (Vec(3) << 0, 0, 0.4).finished());
  const auto cyc = shortest_path(g, v, v);
  ASSERT_FALSE(cyc.empty());
  const Chain proj = project_chain(qm, extract_chain(g, cyc));
  EXPECT_TRUE(validate_chain(qm.induced_flow(), proj, sc.eps, sc.tau).valid);
  for (const auto& p : proj.points) EXPECT_LT(p.coords.norm(), 1e-12);
}

TEST(Quotient, LiftZeroResidualChain) {
  const Flow f = by_name("heis-saddle");
  const QuotientMap qm(f, axis(3, 2));
  const Flow& q = qm.induced_flow();
  const Chain zeta = orbit_segment(q, q.chart().exp((Vec(2) << 0.4, -0.3).finished()), 1.0);
  const auto lifted = lift_chain(qm, zeta, 0.3);
  EXPECT_LT(lifted.correction.coords.norm(), 1e-9);
  EXPECT_LT(validate_chain(f, lifted.chain, 1e-9, 1.0).max_residual, 1e-9);
}

TEST(Quotient, LiftOriginCycle) {
  const auto& sc = find_scenario("heis-saddle");
  const Flow f = sc.make_flow();
  const QuotientMap qm(f, axis(3, 2));
  const double eps = homo_witness(qm, 0.3, 100);
  const Flow& q = qm.induced_flow();
  const auto g = build_chain_graph(q, Window::cube(2, 2.0), 0.1, eps, sc.tau);
  const auto cyc = origin_cycle(g);
  ASSERT_GE(cyc.size(), 3u);
  const Chain zeta = extract_chain(g, cyc);
  const auto lifted = lift_chain(qm, zeta, 0.3);
  EXPECT_TRUE(validate_chain(f, lifted.chain, 0.3, sc.tau).valid);
  // Ends at exp(cZ) times the inverse of the start.
  const auto& c = f.chart();
  const auto end = c.mul(lifted.chain.back(), qm.section(zeta.back()));
  EXPECT_LT(residual_outside(qm.ideal(), c.log(end)), 1e-6);
  EXPECT_LT(residual_outside(qm.ideal(), c.log(lifted.correction)), 1e-12);
}

TEST(Quotient, LiftWithTrivialIdealInvertsPoints) {
  const Flow f = by_name("heis-shear");
  const QuotientMap qm(f, Mat(3, 0));
  gen::Rng rng(4);
  const Chain zeta = gen::chain(rng, qm.induced_flow(), 0.1, 0.25, 3, 1.0);
  const auto lifted = lift_chain(qm, zeta, 0.3);
  for (std::size_t i = 0; i < zeta.points.size(); ++i)
    EXPECT_LT((lifted.chain.points[i].coords + zeta.points[i].coords).norm(), 1e-12);
}

TEST(QuotientProperty, IntertwiningOnCatalogQuotients) {
  EXPECT_LT(QuotientMap(by_name("heis-saddle"), axis(3, 2)).intertwining_residual(200, 2.0), 1e-9);
  EXPECT_LT(QuotientMap(by_name("heis-shear"), axis(3, 2)).intertwining_residual(200, 2.0), 1e-9);
  EXPECT_LT(QuotientMap(by_name("plane-saddle"), axis(2, 0)).intertwining_residual(200, 2.0), 1e-9);
  EXPECT_LT(QuotientMap(by_name("plane-shear"), axis(2, 0)).intertwining_residual(200, 2.0), 1e-9);
}

TEST(QuotientProperty, ProjectLiftRoundTrip) {
  const auto& sc = find_scenario("heis-saddle");
  const Flow f = sc.make_flow();
  const QuotientMap qm(f, axis(3, 2));
  gen::Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    const Chain xi = gen::chain(rng, f, 0.05, 1.0, 3, 0.5);
    const Chain zeta = project_chain(qm, xi);
    const auto lifted = lift_chain(qm, zeta, 0.3);
    const auto& c = f.chart();
    const auto gap = c.mul(lifted.chain.back(), xi.back());
    EXPECT_LT(residual_outside(qm.ideal(), c.log(gap)), 1e-6);
  }
}

TEST(QuotientProperty, ChainTransitiveLifting) {
  const auto& sc = find_scenario("heis-shear");
  const Flow f = sc.make_flow();
  const QuotientMap qm(f, axis(3, 2));
  const auto q = build_chain_graph(qm.induced_flow(), Window::cube(2, 2.0), sc.spacing, sc.eps, sc.tau);
  EXPECT_GE(mutual_reachability_fraction(q, strongly_connected_components(q)), 0.9);
  // H = center with the restricted (trivial) flow.
  const Flow center = Flow::derivation(GroupChart::abelian(1), Mat::Zero(1, 1));
  const auto h = build_chain_graph(center, Window::cube(1, 2.0), sc.spacing, sc.eps, sc.tau);
  EXPECT_EQ(mutual_reachability_fraction(h, strongly_connected_components(h)), 1.0);
  const auto g = build_chain_graph(f, sc.window, sc.spacing, sc.eps, sc.tau);
  EXPECT_GT(mutual_reachability_fraction(g, strongly_connected_components(g)), 0.9);
}
