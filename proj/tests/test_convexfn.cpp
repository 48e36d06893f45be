#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "cqmorph/convexfn.hpp"
#include "cqmorph/counterexample.hpp"
#include "cqmorph/divergence.hpp"
#include "cqmorph/sampling.hpp"
#include "test_support.hpp"

namespace cqmorph {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool midpoint_convex(const ConvexFn& f) {
  for (int i = 0; i <= 40; ++i) {
    for (int j = 0; j <= 40; ++j) {
      const double x = 2.5 * i;
      const double y = 2.5 * j;
      const double mid = f(0.5 * (x + y));
      const double avg = 0.5 * (f(x) + f(y));
      if (std::isinf(avg)) continue;
      if (mid > avg + 1e-9) return false;
    }
  }
  return true;
}

void expect_slope_consistent(const ConvexFn& f) {
  const double s = f.slope_at_infinity();
  if (std::isinf(s)) return;
  // Secant slopes of a convex function increase to the limit slope. Near
  // s = 1 the power family converges geometrically but slowly in log L, so
  // compare an Aitken extrapolation of the last steps.
  double prev = -std::numeric_limits<double>::infinity();
  double last_step = 0.0;
  double step = 0.0;
  for (double L = 1e2; L <= 1e200; L *= 1e6) {
    const double est = (f(2 * L) - f(L)) / L;
    EXPECT_LE(est, s + 1e-9) << f.label();
    EXPECT_GE(est, prev - 1e-9) << f.label();
    last_step = step;
    step = est - prev;
    prev = est;
  }
  double limit = prev;
  const double ratio = step / last_step;
  if (ratio > 0.0 && ratio < 1.0) limit += step * ratio / (1.0 - ratio);
  EXPECT_NEAR(limit, s, 1e-4 * std::max(1.0, std::abs(s))) << f.label();
}

TEST(PowerFamily, Examples) {
  EXPECT_DOUBLE_EQ(power_family(0.5)(4.0), -2.0);
  EXPECT_EQ(power_family(1.0).slope_at_infinity(), -1.0);
  EXPECT_EQ(power_family(0.3).slope_at_infinity(), 0.0);
  EXPECT_TRUE(midpoint_convex(power_family(0.9)));
  EXPECT_TRUE(power_family(0.9).operator_convex());
  EXPECT_THROW(power_family(0.0), ValidationError);
  EXPECT_THROW(power_family(1.5), ValidationError);
}

TEST(ResolventFamily, Examples) {
  EXPECT_DOUBLE_EQ(resolvent_family(1.0)(1.0), 0.5);
  EXPECT_EQ(resolvent_family(0.0)(0.0), kInf);
  EXPECT_EQ(resolvent_family(2.0).slope_at_infinity(), 0.0);
  EXPECT_THROW(resolvent_family(-1.0), ValidationError);
}

TEST(SquareFn, Examples) {
  EXPECT_DOUBLE_EQ(square_fn()(3.0), 9.0);
  EXPECT_EQ(square_fn().slope_at_infinity(), kInf);
  EXPECT_TRUE(square_fn().operator_convex());
}

TEST(OtherBuiltins, MonomialAndXlogx) {
  EXPECT_FALSE(monomial_fn(4).operator_convex());
  EXPECT_TRUE(monomial_fn(1.5).operator_convex());
  EXPECT_DOUBLE_EQ(monomial_fn(4)(2.0), 16.0);
  EXPECT_EQ(monomial_fn(1).slope_at_infinity(), 1.0);
  EXPECT_EQ(xlogx_fn()(0.0), 0.0);
  EXPECT_NEAR(xlogx_fn()(2.0), 2.0 * std::log(2.0), 1e-15);
}

TEST(Builtins, MidpointConvexityAndSlopes) {
  std::vector<ConvexFn> fns = testing::operator_convex_builtins();
  fns.push_back(resolvent_family(0.0));
  fns.push_back(monomial_fn(4));
  fns.push_back(monomial_fn(1));
  for (double s : default_s_grid()) fns.push_back(power_family(s));
  for (double t : default_t_grid()) fns.push_back(resolvent_family(t));
  for (const auto& f : fns) {
    EXPECT_TRUE(midpoint_convex(f)) << f.label();
    expect_slope_consistent(f);
  }
}

TEST(FromLowner, Examples) {
  LownerRep square;
  square.beta = 1.0;
  const ConvexFn f = from_lowner(square);
  for (double x : {0.0, 0.5, 2.0, 7.0}) EXPECT_NEAR(f(x), x * x, 1e-14);
  EXPECT_EQ(f.slope_at_infinity(), kInf);

  LownerRep atom;
  atom.measure = {{1.0, 1.0}};
  const ConvexFn g = from_lowner(atom);
  EXPECT_NEAR(g(1.0), 0.0, 1e-15);
  EXPECT_NEAR(g.slope_at_infinity(), 0.5, 1e-15);
  EXPECT_TRUE(g.operator_convex());
  expect_slope_consistent(g);
}

TEST(FromLowner, InvalidRep) {
  LownerRep r;
  r.beta = -1;
  EXPECT_THROW(from_lowner(r), ValidationError);
  r.beta = 0;
  r.measure = {{1.0, 1.0}, {1.0, 2.0}};
  EXPECT_THROW(from_lowner(r), ValidationError);
  r.measure = {{0.0, 1.0}};
  EXPECT_THROW(from_lowner(r), ValidationError);
  r.measure = {{1.0, -1.0}};
  EXPECT_THROW(from_lowner(r), ValidationError);
}

TEST(FromLowner, OperatorJensenHolds) {
  LownerRep rep;
  rep.f0 = 1.0;
  rep.alpha = 0.3;
  rep.beta = 0.2;
  rep.measure = {{0.25, 2.0}, {5.0, 1.0}};
  const auto r = jensen_violation_search(from_lowner(rep), 2, 4, 100, 31);
  EXPECT_FALSE(r.violation.has_value());
  EXPECT_GE(r.min_gap_seen, -1e-9);
}

TEST(WitnessFn, Examples) {
  const HermitianOp one = HermitianOp::identity(1);
  const ConvexFn f = witness_fn(one, one);
  EXPECT_NEAR(f(2.5), 3.5, 1e-14);
  const ConvexFn g = witness_fn(HermitianOp::diagonal(std::vector<double>{1, 0}),
                                HermitianOp::diagonal(std::vector<double>{0, 1}));
  EXPECT_NEAR(g(0.5), 1.0, 1e-14);
  EXPECT_NEAR(g(3.0), 3.0, 1e-14);
  EXPECT_EQ(g.slope_at_infinity(), 1.0);
  EXPECT_FALSE(g.operator_convex());
  EXPECT_THROW(witness_fn(HermitianOp::identity(2), HermitianOp::identity(3)), ValidationError);
}

TEST(WitnessFn, MatchesClassicalEigenvalueSum) {
  Rng rng = make_rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 3;
    const HermitianOp w0 = random_hermitian(rng, d);
    const HermitianOp w1 = random_hermitian(rng, d);
    const ClassicalPair pair(random_prob_vector(rng, 4, 0.2), random_prob_vector(rng, 4, 0.2));
    double oracle = 0.0;
    for (std::size_t x = 0; x < 4; ++x) {
      oracle += testing::oracle_eigenvalues(pair.p0[x] * w0.matrix() + pair.p1[x] * w1.matrix())
                    .maxCoeff();
    }
    ASSERT_NEAR(f_divergence(witness_fn(w0, w1), pair), oracle, 1e-9) << trial;
    ASSERT_NEAR(dw_classical(w0, w1, pair), oracle, 1e-9) << trial;
  }
}

TEST(CauchyInterpolate, SingleNode) {
  const auto c = cauchy_interpolate({1.0}, {1.0}, {0.5});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(c[0], 1.0, 1e-14);
}

TEST(CauchyInterpolate, SquareValues) {
  const std::vector<double> nodes{0.0, 1.0};
  const std::vector<double> poles{1.0, 2.0};
  const std::vector<double> values{0.0, 1.0};
  const auto c = cauchy_interpolate(nodes, poles, values);
  for (std::size_t i = 0; i < 2; ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j < 2; ++j) v += c[j] / (nodes[i] + poles[j]);
    EXPECT_NEAR(v, values[i], 1e-10);
  }
}

TEST(CauchyInterpolate, RandomSixPoints) {
  Rng rng = make_rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> nodes;
    std::vector<double> poles;
    std::vector<double> values;
    for (int i = 0; i < 6; ++i) {
      nodes.push_back(0.5 * i + 0.3 * u(rng));
      poles.push_back(0.1 + 0.7 * i + 0.3 * u(rng));
      values.push_back(u(rng) - 0.5);
    }
    const auto c = cauchy_interpolate(nodes, poles, values);
    for (std::size_t i = 0; i < 6; ++i) {
      double v = 0.0;
      for (std::size_t j = 0; j < 6; ++j) v += c[j] / (nodes[i] + poles[j]);
      ASSERT_NEAR(v, values[i], 1e-8);
    }
  }
}

TEST(CauchyInterpolate, Errors) {
  EXPECT_THROW(cauchy_interpolate({1.0, 1.0}, {1.0, 2.0}, {0.0, 0.0}), ValidationError);
  EXPECT_THROW(cauchy_interpolate({1.0, 2.0}, {1.0, 1.0}, {0.0, 0.0}), ValidationError);
  EXPECT_THROW(cauchy_interpolate({1.0}, {0.0}, {0.0}), ValidationError);
  EXPECT_THROW(cauchy_interpolate({1.0}, {1.0, 2.0}, {0.0}), ValidationError);
}

TEST(ParseFnSpec, KnownSpecs) {
  EXPECT_EQ(parse_fn_spec("square").label(), "square");
  EXPECT_DOUBLE_EQ(parse_fn_spec("power:0.5")(4.0), -2.0);
  EXPECT_DOUBLE_EQ(parse_fn_spec("resolvent:2")(2.0), 0.25);
  EXPECT_DOUBLE_EQ(parse_fn_spec("power4")(2.0), 16.0);
  EXPECT_FALSE(parse_fn_spec("power4").operator_convex());
  EXPECT_DOUBLE_EQ(parse_fn_spec("monomial:3")(2.0), 8.0);
  const ConvexFn l = parse_fn_spec(R"(lowner:{"f0":0,"alpha":0,"beta":1,"measure":[]})");
  EXPECT_NEAR(l(3.0), 9.0, 1e-14);
  const ConvexFn a = parse_fn_spec(R"(lowner:{"beta":0,"measure":[[1,1]]})");
  EXPECT_NEAR(a(1.0), 0.0, 1e-15);
}

TEST(ParseFnSpec, UnknownSpecs) {
  EXPECT_THROW(parse_fn_spec("cube"), ValidationError);
  EXPECT_THROW(parse_fn_spec("power:abc"), ValidationError);
  EXPECT_THROW(parse_fn_spec("power:2"), ValidationError);
  EXPECT_THROW(parse_fn_spec("lowner:{bad"), ValidationError);
}

TEST(Grids, Defaults) {
  const auto t = default_t_grid();
  ASSERT_EQ(t.size(), 64u);
  EXPECT_NEAR(t.front(), 1e-3, 1e-15);
  EXPECT_NEAR(t.back(), 1e3, 1e-9);
  EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
  const auto s = default_s_grid();
  ASSERT_EQ(s.size(), 32u);
  EXPECT_DOUBLE_EQ(s.front(), 0.5);
  EXPECT_DOUBLE_EQ(s.back(), 0.999);
  EXPECT_EQ(log_grid(2.0, 8.0, 1), std::vector<double>{2.0});
}

}  // namespace
}  // namespace cqmorph
