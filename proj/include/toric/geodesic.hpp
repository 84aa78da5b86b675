#ifndef TORIC_GEODESIC_HPP
#define TORIC_GEODESIC_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "toric/asymptotic.hpp"
#include "toric/envelope.hpp"
#include "toric/function_spec.hpp"
#include "toric/legendre.hpp"

namespace toric {

/// Geodesic u_t at one time, sampled on the primal grid.
struct GeodesicSlice {
  double t = 0;
  SampledFunction values;
};

namespace detail {

inline void check_time(double t) {
  if (!(t > 0 && t < 1)) throw ParameterError("geodesic: time must lie in (0,1)");
}

inline DualGrid geodesic_dual(const SampledFunction& f, const SampledFunction& g, std::size_t resolution) {
  const SampledFunction* p[] = {&f, &g};
  return envelope_dual(p, resolution);
}

}  // namespace detail

/// u_t = ((1-t) f* + t g*)*, the Legendre interpolation of the endpoints.
///
/// The dual grid holds every line hull slope of both endpoints, so in one
/// variable the conjugates are piecewise linear between dual nodes and the
/// slice is exact at the primal nodes.
inline GeodesicSlice geodesic_at(const SampledFunction& f, const SampledFunction& g, double t,
                                 const DualGrid& dual) {
  detail::check_time(t);
  if (!(f.grid() == g.grid())) throw ParameterError("geodesic: endpoints on different grids");
  const auto fs = conjugate(f, dual);
  const auto gs = conjugate(g, dual);
  std::vector<ExtendedValue> h(dual.size());
  bool finite = false;
  for (std::size_t i = 0; i < h.size(); ++i) {
    h[i] = (1 - t) * fs[i] + t * gs[i];
    finite = finite || h[i].is_finite();
  }
  if (!finite) throw DegenerateGeodesicError("geodesic: interpolated conjugate is +INF everywhere");
  auto u = conjugate_to_grid(ConjugateFunction(dual, std::move(h)), f.grid());
  // outside the effective domain of either endpoint the slice is +INF
  std::vector<ExtendedValue> v = u.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (f[i].is_infinite() || g[i].is_infinite()) v[i] = ExtendedValue::infinity();
  return {t, SampledFunction(f.grid(), std::move(v))};
}

inline GeodesicSlice geodesic_at(const SampledFunction& f, const SampledFunction& g, double t,
                                 std::size_t resolution = 0) {
  return geodesic_at(f, g, t, detail::geodesic_dual(f, g, resolution));
}

inline GeodesicSlice geodesic_at(const FunctionSpec& f, const FunctionSpec& g, double t, const GridNd& grid) {
  return geodesic_at(sample(f, grid), sample(g, grid), t);
}

/// Slices at the interior times k/(T-1), k = 1..T-2, of the convex
/// envelope in (x, t) of the function equal to f at t = 0, g at t = 1 and 0
/// in between. This is the upper-envelope definition of the geodesic,
/// computed without the interpolation formula.
inline std::vector<GeodesicSlice> geodesic_oracle(const SampledFunction& f, const SampledFunction& g,
                                                  std::size_t time_layers, std::size_t time_resolution = 1024) {
  if (!(f.grid() == g.grid())) throw ParameterError("geodesic: endpoints on different grids");
  if (time_layers < 3) throw ParameterError("geodesic_oracle: at least three time layers required");
  const GridNd& g0 = f.grid();
  const std::size_t n = g0.dimension();
  auto axes = g0.axes();
  axes.push_back(uniform_nodes(0, 1, time_layers));
  const GridNd joint(axes);

  const std::size_t T = time_layers;
  std::vector<double> raw(joint.size());
  for (std::size_t i = 0; i < g0.size(); ++i) {
    const double fv = f[i].raw(), gv = g[i].raw();
    const bool outside = fv == kInf || gv == kInf;
    for (std::size_t k = 0; k < T; ++k) {
      double v = 0;
      if (k == 0) v = fv;
      else if (k + 1 == T) v = gv;
      if (outside) v = kInf;
      raw[i * T + k] = v;
    }
  }
  const auto F = SampledFunction::from_raw(joint, raw);

  // dual axes: hull-slope ranges, uniform nodes plus the hull slopes themselves
  std::vector<std::vector<double>> daxes;
  for (std::size_t k = 0; k <= n; ++k) {
    const auto s = detail::line_hull_slopes(joint, raw, k);
    double lo = s.empty() ? -1 : s.front(), hi = s.empty() ? 1 : s.back();
    const double pad = 0.1 * std::max({hi - lo, std::abs(lo), std::abs(hi), 1.0});
    const std::size_t m = k < n ? 2 * g0.extent(k) : time_resolution;
    auto a = uniform_nodes(lo - pad, hi + pad, std::max<std::size_t>(m, 2));
    a.insert(a.end(), s.begin(), s.end());
    std::sort(a.begin(), a.end());
    std::vector<double> u;
    for (double v : a)
      if (u.empty() || v - u.back() > 1e-13 * std::max(1.0, std::abs(v))) u.push_back(v);
    daxes.push_back(std::move(u));
  }
  const auto env = biconjugate(F, DualGrid(std::move(daxes)));

  std::vector<GeodesicSlice> out;
  for (std::size_t k = 1; k + 1 < T; ++k) {
    std::vector<ExtendedValue> v(g0.size());
    for (std::size_t i = 0; i < g0.size(); ++i) v[i] = env[i * T + k];
    out.push_back({double(k) / double(T - 1), SampledFunction(g0, std::move(v))});
  }
  return out;
}

/// Measure of the region where u_t differs from f by more than eps: the
/// push-forward measure of the grid cells with a corner where |u_t - f| > eps.
inline double deviation_measure(const SampledFunction& u, const SampledFunction& f, double eps) {
  if (!(u.grid() == f.grid())) throw ParameterError("deviation_measure: grid mismatch");
  const GridNd& g = f.grid();
  const std::size_t n = g.dimension();
  CellMask mask(g);
  std::vector<std::size_t> idx(n), c(n);
  for (std::size_t cell = 0; cell < mask.size(); ++cell) {
    mask.unravel(cell, idx);
    for (std::size_t corner = 0; corner < (std::size_t(1) << n); ++corner) {
      for (std::size_t k = 0; k < n; ++k) c[k] = idx[k] + ((corner >> k) & 1);
      const std::size_t j = g.ravel(c);
      const double a = u[j].raw(), b = f[j].raw();
      if (std::isfinite(a) && std::isfinite(b) && std::abs(a - b) > eps) {
        mask.set(cell);
        break;
      }
    }
  }
  return measure_pushforward(mask);
}

struct MeasurePoint {
  double t = 0;
  double measure = 0;
};

/// m(t) = measure{|u_t - f| > eps} for each requested time.
inline std::vector<MeasurePoint> endpoint_measure_trace(const SampledFunction& f, const SampledFunction& g,
                                                        double eps, const std::vector<double>& times) {
  if (!(eps > 0)) throw ParameterError("endpoint_measure_trace: eps must be positive");
  const auto dual = detail::geodesic_dual(f, g, 0);
  std::vector<MeasurePoint> out;
  for (double t : times) {
    const auto s = geodesic_at(f, g, t, dual);
    out.push_back({t, deviation_measure(s.values, f, eps)});
  }
  return out;
}

inline std::vector<MeasurePoint> endpoint_measure_trace(const FunctionSpec& f, const FunctionSpec& g,
                                                        const GridNd& grid, double eps,
                                                        const std::vector<double>& times) {
  return endpoint_measure_trace(sample(f, grid), sample(g, grid), eps, times);
}

/// Grid for measure traces: step `fine_step` on [-fine_depth, log(1-margin)],
/// geometric below down to -depth. The slice t*g(x/t) is only resolved on
/// x >= -t*depth, so the trace needs depth well beyond (eps/t)^2-type scales.
struct TraceGrid {
  double depth = 400;
  double fine_depth = 4;
  double fine_step = 0;   // 0: 1/256 in one variable, coarser above
  double growth = 1.05;
  double boundary_margin = 1e-3;

  GridNd build(std::size_t n) const {
    double step = fine_step;
    if (step == 0) step = n == 1 ? 1.0 / 256 : (n == 2 ? 1.0 / 16 : 0.25);
    const auto axis = graded_nodes(depth, std::log1p(-boundary_margin), fine_depth, step, n == 1 ? growth : 1.3);
    return GridNd(std::vector<std::vector<double>>(n, axis));
  }
};

struct ConvergenceOptions {
  TraceGrid trace_grid;
  double eps = 0.1;
  std::vector<double> times{0.2, 0.1, 0.05, 0.025};
  std::int64_t bmax = 5;
};

/// Two independent verdicts on u_t -> u_0 plus the measure trace. A
/// disagreement between the verdicts is reported, never resolved.
struct ConvergenceReport {
  bool verdict_slopes = false;   // slope condition over the default curves
  bool verdict_rooftop = false;  // rooftop limit reproduces f
  bool agreement = false;
  std::vector<MeasurePoint> measure_trace;
  SlopeConditionResult slopes;
  RooftopResult rooftop;
};

inline ConvergenceReport theorem_check(const FunctionSpec& f, const FunctionSpec& g,
                                       const ConvergenceOptions& opt = {}) {
  ConvergenceReport rep;
  const std::size_t n = pair_dimension(f, g);
  rep.slopes = slope_condition(f, g, default_curves(n, opt.bmax));
  rep.verdict_slopes = rep.slopes.holds;
  rep.rooftop = rooftop_limit(f, g);
  rep.verdict_rooftop = rep.rooftop.converged_to_f;
  rep.agreement = rep.verdict_slopes == rep.verdict_rooftop;
  if (!opt.times.empty()) rep.measure_trace = endpoint_measure_trace(f, g, opt.trace_grid.build(n), opt.eps, opt.times);
  return rep;
}

}  // namespace toric

#endif  // TORIC_GEODESIC_HPP
