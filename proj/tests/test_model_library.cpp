#include <gtest/gtest.h>

#include <numbers>

#include "toric/model_library.hpp"

using namespace toric;

TEST(RadialPower, Values) {
  const double a[] = {-4.0}, b[] = {-1.0};
  EXPECT_DOUBLE_EQ(radial_power(1.0).evaluate_log(a), -4.0);
  EXPECT_DOUBLE_EQ(radial_power(0.5).evaluate_log(a), -2.0);
  EXPECT_DOUBLE_EQ(radial_power(0.3).evaluate_log(b), -1.0);
  EXPECT_THROW(radial_power(0.0), ParameterError);
  EXPECT_THROW(radial_power(1.2), ParameterError);
}

TEST(Lelong, Origin) {
  EXPECT_NEAR(lelong_at_origin(radial_power(0.5)), 0.0, kSlopeTolerance);
  EXPECT_NEAR(lelong_at_origin(radial_power(1.0)), 1.0, 1e-9);
  EXPECT_NEAR(lelong_at_origin(FunctionSpec::linear({3})), 3.0, 1e-9);
  EXPECT_THROW(lelong_at_origin(FunctionSpec::zero(2)), DimensionError);
}

TEST(Energy, CalibrationHasUnitPoleMass) {
  const auto c = calibrate_energy();
  EXPECT_NEAR(c.pole_mass, 1.0, 1e-6);
  EXPECT_GT(c.kappa, 0.0);
}

TEST(Energy, PowerDichotomy) {
  for (double a : {0.40, 0.45, 0.48}) EXPECT_EQ(energy_e1(RadialProfile::power(a, 0.1)).verdict, "finite") << a;
  for (double a : {0.5, 0.55, 0.6, 1.0}) EXPECT_EQ(energy_e1(RadialProfile::power(a, 0.1)).verdict, "diverging") << a;
}

TEST(Energy, ClosedFormLimit) {
  // E = a y0^{2a-1} (1-a)/(1-2a) with y0 = -log(1-eps): integral plus vanishing boundary term
  for (double a : {0.3, 0.4}) {
    const double y0 = -std::log(0.9);
    const double exact = a * std::pow(y0, 2 * a - 1) * (1 - a) / (1 - 2 * a);
    const auto e = energy_e1(RadialProfile::power(a, 0.1));
    ASSERT_TRUE(e.extrapolated.has_value());
    EXPECT_NEAR(*e.extrapolated, exact, 0.01 * exact) << a;
  }
}

TEST(Energy, PartialSumsNondecreasing) {
  const auto e = energy_e1(RadialProfile::power(0.45, 0.1));
  for (std::size_t k = 1; k < e.partial.size(); ++k) EXPECT_GE(e.partial[k], e.partial[k - 1] - 1e-9);
}

TEST(Energy, NonConvexProfileRejected) {
  RadialProfile p{[](double s) { return -std::sqrt(-s) + 0.5 * std::sin(3 * s); }, std::nullopt, 0.1};
  EXPECT_THROW(energy_e1(p), ParameterError);
}

namespace {

// chi'' = (s+2)^2 (s+1/2)^2 on [-2,-1/2], zero elsewhere; chi = -1 below -2
double bump_profile(double s) {
  if (s <= -2) return -1;
  if (s <= -0.5) {
    const double a = s + 2;
    return -1 + std::pow(a, 6) / 30 - 3 * std::pow(a, 5) / 20 + 0.1875 * std::pow(a, 4);
  }
  return bump_profile(-0.5) + 0.253125 * (s + 0.5);
}

}  // namespace

TEST(Energy, MatchesPlanarRiemannSum) {
  const double margin = 0.1, R = 1 - margin;
  const auto e = energy_e1(RadialProfile{bump_profile, std::nullopt, margin});
  ASSERT_EQ(e.verdict, "finite");

  // sum of (-u) (1/2pi) Laplacian(u) over the disc of radius R, five-point stencil
  const int m = 1200;
  const double h = 2.0 / m;
  auto u = [](double x, double y) {
    const double r2 = x * x + y * y;
    return r2 == 0 ? -1.0 : bump_profile(0.5 * std::log(r2));
  };
  double sum = 0;
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) {
      const double x = -1 + i * h, y = -1 + j * h;
      if (x * x + y * y >= R * R) continue;
      const double c = u(x, y);
      const double lap = (u(x + h, y) + u(x - h, y) + u(x, y + h) + u(x, y - h) - 4 * c) / (h * h);
      sum += -c * lap * h * h / (2 * std::numbers::pi);
    }
  ASSERT_TRUE(e.extrapolated.has_value());
  EXPECT_NEAR(*e.extrapolated, sum, 0.01 * std::abs(sum));
}
