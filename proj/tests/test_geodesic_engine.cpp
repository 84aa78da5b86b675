#include <gtest/gtest.h>

#include "toric/geodesic.hpp"

using namespace toric;

namespace {
GridNd box(std::size_t n, std::size_t res, double depth = 4) { return build_grid({n, depth, 1e-3, DomainShape::box}, res); }
}  // namespace

TEST(GeodesicAt, ConstantPathWhenEndpointsAgree) {
  const GridNd g = box(1, 129);
  const auto f = sample(FunctionSpec::radial(0.5), g);
  for (double t : {0.1, 0.5, 0.9}) {
    const auto u = geodesic_at(f, f, t).values;
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(u[i].raw(), f[i].raw(), 1e-12);
  }
}

TEST(GeodesicAt, BelowChordAndShaped) {
  const GridNd g = box(2, 17);
  const auto f = sample(FunctionSpec::radial(0.5), g);
  const auto h = sample(FunctionSpec::max_linear({{1, 0}, {0, 2}}, {0, -0.2}), g);
  for (double t : {0.25, 0.5, 0.75}) {
    const auto u = geodesic_at(f, h, t).values;
    EXPECT_TRUE(u.is_convex());
    EXPECT_TRUE(u.is_increasing());
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_LE(u[i].raw(), (1 - t) * f[i].raw() + t * h[i].raw() + 1e-12);
      EXPECT_LE(u[i].raw(), 1e-12);
    }
  }
}

TEST(GeodesicAt, LinearEndpointSlice) {
  // f = 0, g = x: on the truncated box the slice is max(x, -t L)
  const GridNd g = box(1, 257);
  const auto f = sample(FunctionSpec::zero(), g), h = sample(FunctionSpec::linear({1}), g);
  const double t = 0.5, L = 4;
  const auto u = geodesic_at(f, h, t).values;
  const double cell = g.max_cell_diameter();
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(u[i].raw(), std::max(g.axis(0)[i], -t * L), cell);
}

TEST(GeodesicAt, RejectsTimesOutsideOpenInterval) {
  const GridNd g = box(1, 9);
  const auto f = sample(FunctionSpec::zero(), g);
  EXPECT_THROW(geodesic_at(f, f, 0.0), ParameterError);
  EXPECT_THROW(geodesic_at(f, f, 1.0), ParameterError);
}

TEST(GeodesicOracle, AgreesWithFastPath) {
  const GridNd g = box(1, 65);
  const auto f = sample(FunctionSpec::max_linear({{0.5}, {2}}, {0, -0.5}), g);
  const auto h = sample(FunctionSpec::linear({1}), g);
  const auto slices = geodesic_oracle(f, h, 17);
  ASSERT_FALSE(slices.empty());
  const double tol = 2 * 2.0 * g.max_cell_diameter();
  for (const auto& s : slices) {
    const auto fast = geodesic_at(f, h, s.t).values;
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(fast[i].raw(), s.values[i].raw(), tol) << s.t;
  }
}

TEST(GeodesicOracle, ConvexInTime) {
  const GridNd g = box(1, 33);
  const auto f = sample(FunctionSpec::radial(0.5), g), h = sample(FunctionSpec::linear({1}), g);
  const auto s = geodesic_oracle(f, h, 17);
  for (std::size_t k = 1; k + 1 < s.size(); ++k)
    for (std::size_t i = 0; i < g.size(); ++i)
      EXPECT_GE(s[k - 1].values[i].raw() + s[k + 1].values[i].raw() - 2 * s[k].values[i].raw(), -1e-9);
}

TEST(MeasureTrace, ZeroForEqualEndpoints) {
  const GridNd g = box(1, 129);
  for (const auto& m : endpoint_measure_trace(FunctionSpec::radial(0.5), FunctionSpec::radial(0.5), g, 0.1, {0.2, 0.1}))
    EXPECT_EQ(m.measure, 0.0);
}

TEST(MeasureTrace, LinearEndpointIsConstant) {
  const GridNd g = TraceGrid{}.build(1);
  const auto tr = endpoint_measure_trace(FunctionSpec::zero(), FunctionSpec::linear({1}), g, 0.1, {0.2, 0.05});
  // measure of {x < -0.1}: pi e^{-0.2}
  for (const auto& m : tr) EXPECT_NEAR(m.measure, std::numbers::pi * std::exp(-0.2), 0.02);
  EXPECT_THROW(endpoint_measure_trace(FunctionSpec::zero(), FunctionSpec::zero(), g, 0.0, {0.5}), ParameterError);
}

TEST(TheoremCheck, Examples) {
  const auto a = theorem_check(FunctionSpec::zero(), FunctionSpec::radial(0.5));
  EXPECT_TRUE(a.verdict_slopes);
  EXPECT_TRUE(a.verdict_rooftop);
  EXPECT_TRUE(a.agreement);
  for (std::size_t k = 1; k < a.measure_trace.size(); ++k)
    EXPECT_LT(a.measure_trace[k].measure, a.measure_trace[k - 1].measure);

  const auto b = theorem_check(FunctionSpec::zero(), FunctionSpec::radial(1.0));
  EXPECT_FALSE(b.verdict_slopes);
  EXPECT_FALSE(b.verdict_rooftop);
  EXPECT_TRUE(b.agreement);

  const auto c = theorem_check(FunctionSpec::zero(), FunctionSpec::zero());
  EXPECT_TRUE(c.verdict_slopes && c.verdict_rooftop);
  for (const auto& m : c.measure_trace) EXPECT_EQ(m.measure, 0.0);
}
