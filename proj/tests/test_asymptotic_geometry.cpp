#include <gtest/gtest.h>

#include <random>

#include "toric/asymptotic.hpp"
#include "toric/oracles.hpp"

using namespace toric;

TEST(DirectionalSlope, Linear) {
  const auto s = directional_slope(FunctionSpec::linear({3}), CurveSpec::along({1}));
  EXPECT_NEAR(s.estimate, 3.0, 1e-9);
  EXPECT_TRUE(s.stable);
}

TEST(DirectionalSlope, RadialPowers) {
  EXPECT_NEAR(directional_slope(FunctionSpec::radial(0.5), CurveSpec::along({1})).estimate, 0.0, kSlopeTolerance);
  EXPECT_NEAR(directional_slope(FunctionSpec::radial(1.0), CurveSpec::along({1})).estimate, 1.0, 1e-9);
}

TEST(DirectionalSlope, MaxOfLinear) {
  const auto f = FunctionSpec::max_linear({{1, 0}, {0, 2}});
  EXPECT_NEAR(directional_slope(f, CurveSpec::along({1, 1})).estimate, 1.0, 1e-9);
  EXPECT_NEAR(directional_slope(f, CurveSpec::along({3, 1})).estimate, 2.0, 1e-9);
}

TEST(DirectionalSlope, Scaling) {
  const auto f = FunctionSpec::max_linear({{1, 0.5}, {0.2, 2}}, {0, -0.3});
  for (std::int64_t k = 1; k <= 4; ++k) {
    const double one = directional_slope(f, CurveSpec::along({1, 2})).estimate;
    const double many = directional_slope(f, CurveSpec::along({k, 2 * k})).estimate;
    EXPECT_NEAR(many, k * one, 1e-6);
  }
}

TEST(DirectionalSlope, BasePointDoesNotMatter) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.05, 0.6);
  const auto f = FunctionSpec::sum({FunctionSpec::max_linear({{1, 0}, {0, 2}}, {0, 0.4}), FunctionSpec::radial(0.5)});
  const double ref = directional_slope(f, CurveSpec::along({2, 1})).estimate;
  for (int i = 0; i < 10; ++i) {
    CurveSpec c{{2, 1}, {U(rng), U(rng)}};
    EXPECT_NEAR(directional_slope(f, c).estimate, ref, kSlopeTolerance);
  }
}

TEST(DirectionalSlope, OffsetsDoNotMatter) {
  const auto a = FunctionSpec::max_linear({{1, 0}, {0, 2}}, {0, 0});
  const auto b = FunctionSpec::max_linear({{1, 0}, {0, 2}}, {-0.9, 0.7});
  for (const auto& c : default_curves(2, 3))
    EXPECT_NEAR(directional_slope(a, c).estimate, directional_slope(b, c).estimate, 1e-6);
}

TEST(DirectionalSlope, RejectsBadCurves) {
  EXPECT_THROW(CurveSpec::along({0}), ParameterError);
  EXPECT_THROW((CurveSpec{{1}, {-0.5}}.validate()), ParameterError);
  EXPECT_THROW(directional_slope(FunctionSpec::zero(2), CurveSpec::along({1})), DimensionError);
}

TEST(DefaultCurves, CountAndDiagonal) {
  const auto c = default_curves(2, 5);
  EXPECT_EQ(c.size(), 25u);
  EXPECT_TRUE(std::any_of(c.begin(), c.end(), [](const CurveSpec& s) { return s.exponents == std::vector<std::int64_t>{1, 1}; }));
}

TEST(SlopeCondition, Examples) {
  const auto one = default_curves(1, 5);
  EXPECT_TRUE(slope_condition(FunctionSpec::zero(), FunctionSpec::radial(0.9), one).holds);
  const auto r = slope_condition(FunctionSpec::zero(), FunctionSpec::linear({1}), one);
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.curves[r.worst].curve.exponents, std::vector<std::int64_t>{5});

  const auto f = FunctionSpec::max_linear({{1, 0}, {0, 1}});
  const auto g = FunctionSpec::linear({0.5, 0.5});
  EXPECT_FALSE(slope_condition(f, g, default_curves(2, 2)).holds);
  EXPECT_TRUE(slope_condition(f, g, {CurveSpec::along({1, 1})}).holds);
  EXPECT_THROW(slope_condition(f, g, {}), ParameterError);
}

TEST(NewtonBody, LinearIsHalfLine) {
  const auto dual = DualGrid::uniform(1, -0.5, 2.5, 25);
  const auto body = newton_body(FunctionSpec::linear({1}), dual);
  for (std::size_t i = 0; i < dual.size(); ++i) {
    const double p = dual.axis(0)[i];
    if (std::abs(p - 1) > 1e-9) {
      EXPECT_EQ(body.contains(i), p > 1) << p;
    }
  }
  EXPECT_FALSE(body.range_warning);
}

TEST(NewtonBody, RadialHalfIsPositiveHalfLine) {
  const auto dual = DualGrid::uniform(1, -0.5, 2.5, 25);
  const auto body = newton_body(FunctionSpec::radial(0.5), dual);
  for (std::size_t i = 0; i < dual.size(); ++i) {
    const double p = dual.axis(0)[i];
    if (p < -1e-9 || p > 0.25) {
      EXPECT_EQ(body.contains(i), p > 0) << p;
    }
  }
}

TEST(NewtonBody, MaxOfCoordinates) {
  const auto dual = DualGrid::uniform(2, -0.5, 2.5, 13);
  const auto body = newton_body(FunctionSpec::max_linear({{1, 0}, {0, 1}}), dual);
  EXPECT_TRUE(is_upward_closed(body));
  EXPECT_TRUE(is_discretely_convex(body));
  std::vector<double> l(2);
  for (std::size_t i = 0; i < dual.size(); ++i) {
    dual.nodes().point(i, l);
    const double margin = std::min({l[0], l[1], l[0] + l[1] - 1});
    if (std::abs(margin) > 0.3) {
      EXPECT_EQ(body.contains(i), margin > 0) << l[0] << "," << l[1];
    }
  }
}

TEST(NewtonBody, RangeWarning) {
  const auto body = newton_body(FunctionSpec::linear({1}), DualGrid::uniform(1, 0.5, 2, 7));
  EXPECT_TRUE(body.range_warning);
}

TEST(NewtonBody, SupportFunctionMatchesSlopes) {
  const auto f = FunctionSpec::max_linear({{1, 0}, {0, 2}, {1, 1}}, {0, -0.2, 0.1});
  const auto dual = DualGrid::uniform(2, -0.5, 2.5, 25);
  const auto body = newton_body(f, dual);
  for (const auto& c : default_curves(2, 3)) {
    const std::vector<double> b(c.exponents.begin(), c.exponents.end());
    EXPECT_NEAR(support_min(body, b), directional_slope(f, c).estimate, 0.125 * (b[0] + b[1]) + kSlopeTolerance);
  }
}

TEST(NewtonInclusion, Examples) {
  const auto dual = DualGrid::uniform(1, -0.5, 2.5, 25);
  EXPECT_TRUE(newton_inclusion(FunctionSpec::linear({2}), FunctionSpec::linear({1}), dual).included);
  const auto bad = newton_inclusion(FunctionSpec::linear({1}), FunctionSpec::linear({2}), dual);
  EXPECT_FALSE(bad.included);
  EXPECT_GT(bad.excess_cells, 1u);
  EXPECT_TRUE(newton_inclusion(FunctionSpec::zero(), FunctionSpec::radial(0.7), dual).included);
}

TEST(NewtonInclusion, AgreesWithSlopeConditionOnMaxLinear) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coef(0, 2), count(1, 3);
  const auto dual = DualGrid::uniform(2, -0.5, 2.5, 25);
  const auto curves = default_curves(2, 5);
  for (int c = 0; c < 12; ++c) {
    std::vector<std::vector<double>> pf(count(rng)), pg(count(rng));
    for (auto* P : {&pf, &pg})
      for (auto& p : *P) p = {double(coef(rng)), double(coef(rng))};
    const auto f = FunctionSpec::max_linear(pf), g = FunctionSpec::max_linear(pg);
    const bool exact = oracle::max_linear_slope_verdict(pf, pg);
    EXPECT_EQ(slope_condition(f, g, curves).holds, exact) << c;
    EXPECT_EQ(newton_inclusion(f, g, dual).included, exact) << c;
  }
}
