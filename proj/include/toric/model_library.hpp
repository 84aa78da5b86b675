#ifndef TORIC_MODEL_LIBRARY_HPP
#define TORIC_MODEL_LIBRARY_HPP

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "toric/asymptotic.hpp"
#include "toric/function_spec.hpp"

namespace toric {

/// u(z) = -(-log|z|)^alpha, 0 < alpha <= 1; alpha = 1 is log|z|.
inline FunctionSpec radial_power(double alpha) {
  if (!(alpha > 0 && alpha <= 1)) throw ParameterError("radial_power: alpha must lie in (0,1]");
  return FunctionSpec::radial(alpha);
}

/// Lelong number at the origin of a one-variable toric function.
inline double lelong_at_origin(const FunctionSpec& spec) {
  if (auto d = spec.dimension(); d && *d != 1)
    throw DimensionError("lelong_at_origin: one variable only; use directional_slope with explicit curves");
  return directional_slope(spec, CurveSpec::along({1})).estimate;
}

/// Radial profile u(z) = chi(log|z|) on the disc of radius 1 - margin.
struct RadialProfile {
  std::function<double(double)> chi;
  std::optional<double> alpha;
  double boundary_margin = 1e-3;

  static RadialProfile power(double alpha, double margin = 1e-3) {
    radial_power(alpha);  // validates
    return {[alpha](double s) { return alpha == 1 ? s : -std::pow(-s, alpha); }, alpha, margin};
  }

  static RadialProfile from_spec(const FunctionSpec& spec, double margin = 1e-3) {
    if (auto d = spec.dimension(); d && *d != 1) throw DimensionError("RadialProfile: one-variable spec required");
    std::optional<double> a;
    if (const auto* r = std::get_if<RadialPowerSpec>(&spec.variant())) a = r->alpha;
    return {[spec](double s) { return spec.evaluate_log(std::span<const double>(&s, 1)); }, a, margin};
  }

  double upper() const { return std::log1p(-boundary_margin); }
};

struct EnergyCalibration {
  double kappa = 0;       // d d^c = kappa * Laplacian-flux normalization
  double pole_mass = 0;   // mass of d d^c s at the pole after calibration
};

struct EnergyEstimate {
  std::vector<double> truncations;   // S_k
  std::vector<double> partial;       // E_k
  std::string verdict;               // "finite" | "diverging"
  std::optional<double> extrapolated;
  double reference = 0;              // alpha = 0.4 value used for the divergence threshold
  EnergyCalibration calibration;
};

namespace detail {

inline double d1(const std::function<double(double)>& chi, double s) {
  const double h = 1e-4 * std::abs(s);
  return (chi(s + h) - chi(s - h)) / (2 * h);
}

inline double d2(const std::function<double(double)>& chi, double s) {
  const double h = 1e-3 * std::abs(s);
  const double a = chi(s + h), b = chi(s), c = chi(s - h);
  if (a - 2 * b + c < -1e-9 * (1 + std::abs(b))) throw ParameterError("energy: profile is not convex");
  return std::max(0.0, (a - 2 * b + c) / (h * h));
}

// Circle flux of grad u through |z| = e^S, by the trapezoid rule in theta.
inline double circle_flux(const std::function<double(double)>& chi, double S) {
  constexpr int kTheta = 64;
  const double r = std::exp(S);
  const double radial = d1(chi, S) / r;  // du/dr, independent of theta
  double acc = 0;
  for (int j = 0; j < kTheta; ++j) acc += radial * r;
  return acc * (2 * std::numbers::pi / kTheta);
}

// int_{s_lo}^{s_hi} (-chi) chi'' ds in the variable u = log(-s), composite Simpson.
inline double energy_segment(const std::function<double(double)>& chi, double s_lo, double s_hi) {
  const double u0 = std::log(-s_hi), u1 = std::log(-s_lo);
  const int m = 2 * std::max(1, int(std::ceil((u1 - u0) / 0.02 / 2)));
  const double h = (u1 - u0) / m;
  auto I = [&](double u) {
    const double s = -std::exp(u);
    return -chi(s) * d2(chi, s) * std::exp(u);
  };
  double acc = I(u0) + I(u1);
  for (int i = 1; i < m; ++i) acc += (i % 2 ? 4 : 2) * I(u0 + h * i);
  return acc * h / 3;
}

}  // namespace detail

/// kappa from the unit-mass condition for chi(s) = s, and the resulting
/// pole mass checked at a second radius.
inline EnergyCalibration calibrate_energy() {
  const std::function<double(double)> id = [](double s) { return s; };
  EnergyCalibration c;
  c.kappa = 1 / detail::circle_flux(id, -1.0);
  c.pole_mass = c.kappa * detail::circle_flux(id, -37.0);
  return c;
}

/// S_k = -2^k, k = 0..count-1.
inline std::vector<double> default_truncations(std::size_t count = 1001) {
  std::vector<double> s(count);
  for (std::size_t k = 0; k < count; ++k) s[k] = -std::ldexp(1.0, int(k));
  return s;
}

namespace detail {

inline EnergyEstimate energy_series(const RadialProfile& p, const std::vector<double>& S, double stop_change,
                                    double diverge_above) {
  const double s0 = p.upper();
  if (S.empty()) throw ParameterError("energy: empty truncation sequence");
  for (std::size_t k = 0; k < S.size(); ++k)
    if (!(S[k] < s0) || (k > 0 && !(S[k] < S[k - 1])))
      throw ParameterError("energy: truncations must decrease strictly below log(1 - margin)");
  EnergyEstimate e;
  e.calibration = calibrate_energy();
  const double norm = e.calibration.kappa * 2 * std::numbers::pi;
  double integral = 0, prev_s = s0;
  for (std::size_t k = 0; k < S.size(); ++k) {
    integral += energy_segment(p.chi, S[k], prev_s);
    prev_s = S[k];
    const double boundary = -p.chi(S[k]) * d1(p.chi, S[k]);
    const double Ek = norm * (integral + boundary);
    e.truncations.push_back(S[k]);
    e.partial.push_back(Ek);
    const std::size_t m = e.partial.size();
    if (m >= 2 && std::abs(Ek - e.partial[m - 2]) < stop_change) {
      e.verdict = "finite";
      double x = Ek;
      if (m >= 3) {
        const double a = e.partial[m - 3], b = e.partial[m - 2];
        const double den = Ek - 2 * b + a;
        if (std::abs(den) > 1e-15) x = Ek - (Ek - b) * (Ek - b) / den;
      }
      e.extrapolated = std::max(x, Ek);
      return e;
    }
    if (Ek > diverge_above) {
      e.verdict = "diverging";
      return e;
    }
  }
  e.verdict = "diverging";
  return e;
}

}  // namespace detail

/// E_1(u) = int (-u) dd^c u for u = chi(log|z|) on the disc of radius
/// 1 - margin, through the truncations S_k:
///   E_k = int_{S_k}^{s0} (-chi) chi'' ds + (-chi(S_k)) chi'(S_k),
/// scaled by the calibrated normalization. "finite" once successive values
/// change by less than 1e-3; "diverging" once E_k exceeds ten times the
/// value for alpha = 0.4, or if the truncations run out first.
inline EnergyEstimate energy_e1(const RadialProfile& profile, const std::vector<double>& truncations) {
  const auto ref = detail::energy_series(RadialProfile::power(0.4, profile.boundary_margin), default_truncations(),
                                         1e-3, kInf);
  const double ref_value = ref.partial.back();
  auto e = detail::energy_series(profile, truncations, 1e-3, 10 * ref_value);
  e.reference = ref_value;
  return e;
}

inline EnergyEstimate energy_e1(const RadialProfile& profile) { return energy_e1(profile, default_truncations()); }

}  // namespace toric

#endif  // TORIC_MODEL_LIBRARY_HPP
