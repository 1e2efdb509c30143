#include <lieflow/lieflow.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"

using namespace lieflow;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }
Vec v3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

Flow heis_saddle() { return find_scenario("heis-saddle").make_flow(); }
Flow plane_saddle() { return find_scenario("plane-saddle").make_flow(); }

}  // namespace

TEST(Group, HeisenbergProduct) {
  const auto c = GroupChart::nilpotent_exp(algebras::heisenberg3());
  const auto g = c.mul(c.exp(v3(1, 0, 0)), c.exp(v3(0, 1, 0)));
  EXPECT_LT((c.log(g) - v3(1, 1, 0.5)).norm(), 1e-15);
}

TEST(Group, InverseGivesIdentity) {
  gen::Rng rng(1);
  const GroupChart charts[] = {GroupChart::abelian(2), GroupChart::nilpotent_exp(algebras::heisenberg3()),
                               groups::sl2_chart(), groups::so3_chart()};
  for (const auto& c : charts) {
    const auto a = c.exp(gen::vec(rng, c.dim(), 0.4));
    EXPECT_LT(c.log(c.mul(a, c.inv(a))).norm(), 1e-12) << to_string(c.kind());
  }
}

TEST(Group, AbelianProduct) {
  const auto c = GroupChart::abelian(2);
  EXPECT_LT((c.mul(c.exp(v2(1, 2)), c.exp(v2(3, -1))).coords - v2(4, 1)).norm(), 0.0 + 1e-15);
}

TEST(Group, NilpotentChartNeedsNilpotentAlgebra) {
  EXPECT_THROW(GroupChart::nilpotent_exp(algebras::sl2()), InputError);
}

TEST(Group, MatrixElementsSatisfyRelations) {
  gen::Rng rng(2);
  const auto sl = groups::sl2_chart();
  const auto so = groups::so3_chart();
  for (int k = 0; k < 50; ++k) {
    const auto a = sl.exp(gen::vec(rng, 3, 0.5));
    EXPECT_NEAR(a.matrix.determinant(), 1.0, 1e-10);
    const auto r = so.exp(gen::vec(rng, 3, 1.0));
    EXPECT_LT((r.matrix.transpose() * r.matrix - Mat::Identity(3, 3)).norm(), 1e-10);
    EXPECT_NEAR(r.matrix.determinant(), 1.0, 1e-10);
  }
}

TEST(Group, ChartMismatchRejected) {
  const auto sl = groups::sl2_chart();
  const auto h = GroupChart::nilpotent_exp(algebras::heisenberg3());
  EXPECT_THROW(sl.mul(GroupElement::from_coords(v3(0, 0, 0)), sl.identity()), InputError);
  EXPECT_THROW(h.mul(h.identity(), sl.identity()), InputError);
}

TEST(Group, Distances) {
  const auto a = GroupChart::abelian(2);
  EXPECT_EQ(a.distance(a.exp(v2(1, 1)), a.exp(v2(1, 1))), 0.0);
  EXPECT_NEAR(a.distance(a.exp(v2(1, 1)), a.exp(v2(2, 1))), 1.0, 1e-15);
  const auto h = GroupChart::nilpotent_exp(algebras::heisenberg3());
  EXPECT_NEAR(h.distance(h.identity(), h.exp(v3(0, 0, 0.3))), 0.3, 1e-15);
}

TEST(Group, MatrixDistanceOutsideWindowFailsClosed) {
  const auto so = groups::so3_chart();
  EXPECT_THROW(so.distance(so.identity(), so.exp(v3(1.4, 0, 0))), OutOfWindowError);
  EXPECT_NEAR(so.distance(so.identity(), so.exp(v3(0.2, 0, 0))), 0.2, 1e-12);
}

TEST(Flow, HeisenbergSaddleApply) {
  const Flow f = heis_saddle();
  const auto g = f.chart().exp(v3(1, 1, 0.5));
  EXPECT_LT((f.apply(1.0, g).coords - v3(std::exp(1.0), std::exp(-1.0), 0.5)).norm(), 1e-14);
  EXPECT_LT((f.apply(0.0, g).coords - g.coords).norm(), 0.0 + 1e-15);
}

TEST(Flow, RotationQuarterTurn) {
  const Flow f = find_scenario("plane-rotation").make_flow();
  const auto y = f.apply(std::numbers::pi / 2, f.chart().exp(v2(1, 0)));
  EXPECT_LT((y.coords - v2(0, 1)).norm(), 1e-14);
}

TEST(Flow, ModeChartCompatibility) {
  EXPECT_THROW(Flow::derivation(groups::sl2_chart(), Mat::Zero(3, 3)), UnsupportedError);
  EXPECT_THROW(Flow::inner(GroupChart::abelian(2), v2(1, 0)), UnsupportedError);
  EXPECT_THROW(Flow::derivation(GroupChart::nilpotent_exp(algebras::heisenberg3()), Mat::Identity(3, 3)), InputError);
}

TEST(Flow, CentralDistance) {
  const Flow f = heis_saddle();
  EXPECT_NEAR(central_distance(f, f.chart().exp(v3(0, 0, 0.7))), 0.0, 1e-15);
  EXPECT_NEAR(central_distance(f, f.chart().exp(v3(1, 0, 0))), 1.0, 1e-15);
  const Flow r = find_scenario("plane-rotation").make_flow();
  EXPECT_EQ(central_distance(r, r.chart().exp(v2(1.3, -0.4))), 0.0);
  const Flow so = find_scenario("so3-inner").make_flow();
  EXPECT_NEAR(central_distance(so, so.chart().exp(v3(0.3, -0.2, 0.1))), 0.0, 1e-12);
}

TEST(Flow, FactorizeHeisenbergRoundTrip) {
  const Flow f = heis_saddle();
  const auto& c = f.chart();
  const double a = 0.8, b = -1.3, z = 0.4;
  const auto g = c.mul(c.mul(c.exp(v3(a, 0, 0)), c.exp(v3(0, 0, z))), c.exp(v3(0, b, 0)));
  const auto fz = factorize(f, g);
  EXPECT_LT((fz.unstable.coords - v3(a, 0, 0)).norm(), 1e-10);
  EXPECT_LT((fz.central.coords - v3(0, 0, z)).norm(), 1e-10);
  EXPECT_LT((fz.stable.coords - v3(0, b, 0)).norm(), 1e-10);
  EXPECT_LT(fz.residual, 1e-9);
}

TEST(Flow, FactorizeTrivialCases) {
  const Flow f = heis_saddle();
  const auto id = factorize(f, f.chart().identity());
  EXPECT_LT(id.unstable.coords.norm() + id.central.coords.norm() + id.stable.coords.norm(), 1e-15);
  const Flow p = plane_saddle();
  const auto s = factorize(p, p.chart().exp(v2(3, -2)));
  EXPECT_LT((s.unstable.coords - v2(3, 0)).norm(), 1e-12);
  EXPECT_LT(s.central.coords.norm(), 1e-12);
  EXPECT_LT((s.stable.coords - v2(0, -2)).norm(), 1e-12);
  EXPECT_THROW(factorize(find_scenario("so3-inner").make_flow(), groups::so3_chart().identity()), UnsupportedError);
}

TEST(Flow, UniformNeighborhood) {
  const auto h = uniform_neighborhood_check(heis_saddle(), 0.5, 2.0, 60);
  EXPECT_TRUE(h.passed);
  EXPECT_GE(h.rho, 0.1);

  const auto p = uniform_neighborhood_check(plane_saddle(), 0.5, 1.0, 60);
  EXPECT_TRUE(p.passed);
  EXPECT_LE(p.rho, 0.5 * (1.0 - std::exp(-1.0)) + 1e-9);

  const auto r = uniform_neighborhood_check(find_scenario("plane-rotation").make_flow(), 0.5, 1.0, 10);
  EXPECT_TRUE(r.trivial);
  EXPECT_TRUE(r.passed);

  EXPECT_THROW(uniform_neighborhood_check(find_scenario("so3-inner").make_flow(), 0.5, 1.0, 10), UnsupportedError);
}

TEST(Flow, ReversedFlowInvertsTime) {
  const Flow f = heis_saddle();
  const auto g = f.chart().exp(v3(0.3, -0.7, 1.1));
  EXPECT_LT(f.chart().distance(f.reversed().apply(0.6, g), f.apply(-0.6, g)), 1e-14);
}

TEST(FlowProperty, HomomorphismAndFlowLaw) {
  gen::Rng rng(21);
  for (const auto& sc : catalog()) {
    const Flow f = sc.make_flow();
    const auto& c = f.chart();
    const double r = c.exp_chart() ? 1.5 : 0.15;
    const double tmax = c.exp_chart() ? 1.0 : 0.5;
    for (int k = 0; k < 1000; ++k) {
      const double t = gen::uniform(rng, -tmax, tmax), s = gen::uniform(rng, -tmax, tmax);
      const auto a = c.exp(gen::vec(rng, c.dim(), r)), b = c.exp(gen::vec(rng, c.dim(), r));
      ASSERT_LT(c.distance(f.apply(t, c.mul(a, b)), c.mul(f.apply(t, a), f.apply(t, b))), 1e-9) << sc.name;
      ASSERT_LT(c.distance(f.apply(t + s, a), f.apply(t, f.apply(s, a))), 1e-9) << sc.name;
    }
  }
}

TEST(FlowProperty, SubgroupsAreInvariant) {
  gen::Rng rng(22);
  for (const char* name : {"plane-saddle", "heis-saddle", "heis-shear"}) {
    const Flow f = find_scenario(name).make_flow();
    const auto& c = f.chart();
    const auto& tri = f.tri();
    for (int k = 0; k < 200; ++k) {
      const double t = gen::uniform(rng, -1, 1);
      if (tri.zero.cols()) {
        const auto g = c.exp(tri.zero * gen::vec(rng, static_cast<int>(tri.zero.cols()), 2.0));
        ASSERT_LT(central_distance(f, g), 1e-12);
        EXPECT_LT(central_distance(f, f.apply(t, g)), 1e-9) << name;
      }
      for (const Mat* sub : {&tri.plus, &tri.minus}) {
        if (!sub->cols()) continue;
        const auto g = c.exp(*sub * gen::vec(rng, static_cast<int>(sub->cols()), 2.0));
        EXPECT_LT(residual_outside(*sub, c.log(f.apply(t, g))), 1e-9) << name;
      }
    }
  }
}

TEST(FlowProperty, StableSubgroupContracts) {
  gen::Rng rng(23);
  for (const char* name : {"plane-saddle", "heis-saddle"}) {
    const Flow f = find_scenario(name).make_flow();
    const auto& c = f.chart();
    const Mat& m = f.tri().minus;
    for (int k = 0; k < 100; ++k) {
      const auto s = c.exp(m * gen::vec(rng, static_cast<int>(m.cols()), 0.5));
      double prev = c.distance(c.identity(), s);
      for (int i = 1; i <= 10; ++i) {
        const double d = c.distance(c.identity(), f.apply(0.2 * i, s));
        EXPECT_LE(d, prev * (1 + 1e-12));
        prev = d;
      }
      EXPECT_LE(c.distance(c.identity(), f.apply(1.0, s)), 0.5);
    }
  }
}

TEST(FlowProperty, LeftInvariantDistance) {
  gen::Rng rng(24);
  for (const auto& sc : catalog()) {
    const Flow f = sc.make_flow();
    const auto& c = f.chart();
    const double r = c.exp_chart() ? 2.0 : 0.15;
    for (int k = 0; k < 300; ++k) {
      const auto g = c.exp(gen::vec(rng, c.dim(), r));
      const auto x = c.exp(gen::vec(rng, c.dim(), r));
      const auto y = c.mul(x, c.exp(gen::in_ball(rng, c.dim(), 0.3)));
      EXPECT_LT(std::abs(c.distance(c.mul(g, x), c.mul(g, y)) - c.distance(x, y)), 1e-10) << sc.name;
      EXPECT_NEAR(c.distance(x, y), c.distance(y, x), 1e-10) << sc.name;
    }
  }
}

TEST(FlowProperty, CoordinateHalfwidthsCoverBalls) {
  gen::Rng rng(25);
  for (const auto& sc : catalog()) {
    const Flow f = sc.make_flow();
    const auto& c = f.chart();
    const double r = c.exp_chart() ? 2.0 : 0.4;
    for (double eps : {0.05, 0.1, 0.3}) {
      for (int k = 0; k < 300; ++k) {
        const Vec xc = gen::vec(rng, c.dim(), r);
        const auto x = c.exp(xc);
        const auto y = c.mul(x, c.exp(gen::in_ball(rng, c.dim(), eps)));
        const Vec w = c.coordinate_halfwidths(xc, eps);
        const Vec diff = (c.log(y) - xc).cwiseAbs();
        EXPECT_TRUE((diff.array() <= w.array()).all()) << sc.name << " eps " << eps;
      }
    }
  }
}
