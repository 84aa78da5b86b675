#ifndef TORIC_ENVELOPE_HPP
#define TORIC_ENVELOPE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "toric/asymptotic.hpp"
#include "toric/function_spec.hpp"
#include "toric/legendre.hpp"

namespace toric {

/// Dual grid for envelopes of a pair: fitted to both inputs, plus every line
/// hull slope of min(f, g).
inline DualGrid envelope_pair_dual(const SampledFunction& f, const SampledFunction& g, std::size_t resolution = 0) {
  if (!(f.grid() == g.grid())) throw ParameterError("envelope: f and g live on different grids");
  const auto m = pointwise_min(f, g);
  const SampledFunction* p[] = {&f, &g};
  DualGrid d = DualGrid::fitted(p, resolution);
  const auto raw = m.raw();
  for (std::size_t k = 0; k < d.dimension(); ++k) d = d.with_nodes(k, detail::line_hull_slopes(m.grid(), raw, k));
  return d;
}

/// P(f, g) = (min(f, g))** = (max(f*, g*))*, the largest convex minorant of
/// both inputs.
inline SampledFunction envelope_pair(const SampledFunction& f, const SampledFunction& g, const DualGrid& dual) {
  if (!(f.grid() == g.grid())) throw ParameterError("envelope: f and g live on different grids");
  if (!f.has_finite_value() && !g.has_finite_value())
    throw UndefinedConjugateError("envelope: both inputs are +INF everywhere");
  return biconjugate(pointwise_min(f, g), dual);
}

inline SampledFunction envelope_pair(const SampledFunction& f, const SampledFunction& g, std::size_t resolution = 0) {
  return envelope_pair(f, g, envelope_pair_dual(f, g, resolution));
}

/// Conjugate-side form max(f*, g*) transformed back; agrees with
/// envelope_pair on a common dual grid.
inline SampledFunction envelope_pair_dual_route(const SampledFunction& f, const SampledFunction& g,
                                                const DualGrid& dual) {
  const auto h = pointwise_max(conjugate(f, dual), conjugate(g, dual));
  return detail::restore_infinite(pointwise_min(f, g), conjugate_to_grid(h, f.grid()));
}

/// Truncation schedule for the rooftop limit lim_{c -> inf} P(f, g + c):
/// shifts c_k, sampling depths L_k >= 10 c_k and a fixed probe window
/// [-probe_depth, log(1 - margin)]^n on which successive envelopes are compared.
struct RooftopSchedule {
  std::vector<double> shifts;
  std::vector<double> depths;
  double probe_depth = 4;
  double boundary_margin = 1e-3;
  double fine_step = 1.0 / 64;
  double growth = 1.05;
  double stop_tol = 1e-3;       // sup change on the window that ends the schedule
  double verdict_rel = 0.05;    // tolerance 0.05 * (1 + sup |f|) on the window

  /// c_k = 2^k (k < count), L_k = 40 c_k. Grids coarsen with the dimension.
  static RooftopSchedule standard(std::size_t n = 1) {
    RooftopSchedule s;
    const int count = n == 1 ? 64 : (n == 2 ? 24 : 14);
    for (int k = 0; k < count; ++k) {
      s.shifts.push_back(std::ldexp(1.0, k));
      s.depths.push_back(40 * std::ldexp(1.0, k));
    }
    if (n == 2) {
      s.fine_step = 0.125;
      s.growth = 1.2;
    } else if (n >= 3) {
      s.fine_step = 0.5;
      s.growth = 1.6;
    }
    return s;
  }

  void validate() const {
    if (shifts.empty() || shifts.size() != depths.size()) throw ProtocolError("rooftop: empty or mismatched schedule");
    if (!(probe_depth > 0) || !(boundary_margin > 0 && boundary_margin < 1))
      throw ProtocolError("rooftop: invalid probe window");
    for (std::size_t k = 0; k < shifts.size(); ++k) {
      if (!(shifts[k] > 0) || (k > 0 && !(shifts[k] > shifts[k - 1])))
        throw ProtocolError("rooftop: shifts must be positive and increasing");
      if (depths[k] < 10 * shifts[k]) throw ProtocolError("rooftop: truncation depth below 10 times the shift");
      if (depths[k] < 10 * probe_depth) throw ProtocolError("rooftop: probe window deeper than a tenth of the truncation");
    }
  }
};

struct RooftopResult {
  SampledFunction estimate;           // last envelope restricted to the probe window
  std::vector<double> sup_changes;    // sup |P_k - P_{k-1}| on the window
  std::size_t steps = 0;
  bool stabilized = false;
  double residual = 0;                // sup |estimate - f| on the window
  double tolerance = 0;
  bool converged_to_f = false;
};

/// lim_{c -> inf} P(f, g + c) evaluated through the schedule; stops once the
/// envelopes on the probe window change by less than stop_tol.
inline std::size_t pair_dimension(const FunctionSpec& f, const FunctionSpec& g) {
  std::size_t n = 1;
  if (auto d = f.dimension()) n = *d;
  else if (auto dg = g.dimension()) n = *dg;
  if (auto dg = g.dimension(); dg && *dg != n) throw DimensionError("f and g differ in dimension");
  return n;
}

inline RooftopResult rooftop_limit(const FunctionSpec& f, const FunctionSpec& g, const RooftopSchedule& sched) {
  sched.validate();
  const std::size_t n = pair_dimension(f, g);

  const double upper = std::log1p(-sched.boundary_margin);
  const double fine = 2 * sched.probe_depth;
  RooftopResult res;
  std::vector<double> prev, window;
  GridNd window_grid;
  SampledFunction window_f;

  for (std::size_t k = 0; k < sched.shifts.size(); ++k) {
    const auto axis = graded_nodes(sched.depths[k], upper, fine, sched.fine_step, sched.growth);
    const GridNd grid = detail::tensor_grid(n, axis);
    const auto F = sample(f, grid);
    const auto G = sample(g, grid);
    if (k == 0) {
      if (!validate_pole_condition(F).ok || !validate_pole_condition(G).ok)
        throw PoleConditionError("rooftop: input violates the pole condition");
      std::vector<double> waxis;
      for (double v : axis)
        if (v >= -sched.probe_depth - 1e-12) waxis.push_back(v);
      window_grid = detail::tensor_grid(n, waxis);
    }
    const auto M = pointwise_min(F, shifted(G, sched.shifts[k]));
    // same envelope; the hull form keeps one-dimensional chords spanning
    // very deep truncations accurate near the window
    const auto P = n == 1 ? convexify_by_hull(M) : biconjugate(M);

    // window nodes are the trailing `wn` nodes of each axis
    const std::size_t wn = window_grid.extent(0), off = axis.size() - wn;
    window.assign(window_grid.size(), 0);
    std::vector<double> fw(window_grid.size());
    std::vector<std::size_t> widx(n), gidx(n);
    for (std::size_t i = 0; i < window_grid.size(); ++i) {
      window_grid.unravel(i, widx);
      for (std::size_t a = 0; a < n; ++a) gidx[a] = widx[a] + off;
      const std::size_t j = grid.ravel(gidx);
      window[i] = P[j].raw();
      fw[i] = F[j].raw();
    }
    if (k == 0) window_f = SampledFunction::from_raw(window_grid, fw);
    res.steps = k + 1;
    if (!prev.empty()) {
      double d = 0;
      for (std::size_t i = 0; i < window.size(); ++i) d = std::max(d, std::abs(window[i] - prev[i]));
      res.sup_changes.push_back(d);
      if (d < sched.stop_tol) {
        res.stabilized = true;
        break;
      }
    }
    prev = window;
  }

  res.estimate = SampledFunction::from_raw(window_grid, window);
  double sup_f = 0;
  for (std::size_t i = 0; i < window.size(); ++i) {
    const double fv = window_f[i].raw();
    sup_f = std::max(sup_f, std::abs(fv));
    res.residual = std::max(res.residual, std::abs(window[i] - fv));
  }
  res.tolerance = sched.verdict_rel * (1 + sup_f);
  res.converged_to_f = res.stabilized && res.residual < res.tolerance;
  return res;
}

inline RooftopResult rooftop_limit(const FunctionSpec& f, const FunctionSpec& g) {
  return rooftop_limit(f, g, RooftopSchedule::standard(pair_dimension(f, g)));
}

struct EndpointCheck {
  double slope_f = 0;
  double slope_g = 0;
  bool holds = false;   // f is at least as singular as g at the origin
};

/// One-variable criterion: the rooftop limit returns f iff the Lelong
/// number of f at the origin is at least that of g.
inline EndpointCheck check_1d_endpoint(const FunctionSpec& f, const FunctionSpec& g, double tol = kSlopeTolerance) {
  for (const auto* s : {&f, &g})
    if (auto d = s->dimension(); d && *d != 1) throw DimensionError("check_1d_endpoint: one-variable inputs required");
  const auto c = CurveSpec::along({1});
  EndpointCheck r;
  r.slope_f = directional_slope(f, c).estimate;
  r.slope_g = directional_slope(g, c).estimate;
  r.holds = r.slope_f >= r.slope_g - tol;
  return r;
}

}  // namespace toric

#endif  // TORIC_ENVELOPE_HPP
