#ifndef TORIC_ASYMPTOTIC_HPP
#define TORIC_ASYMPTOTIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "toric/function_spec.hpp"
#include "toric/legendre.hpp"

namespace toric {

/// Monomial curve zeta -> (a_1 zeta^{b_1}, ..., a_n zeta^{b_n}). Only the
/// moduli |a_i| matter; in log coordinates the curve is log|a| + s*b.
struct CurveSpec {
  std::vector<std::int64_t> exponents;
  std::vector<double> moduli;

  /// Curve with the given exponents and the default base point
  /// |a_i| = 1/(2 sqrt(n)), which lies in the unit ball.
  static CurveSpec along(std::vector<std::int64_t> b) {
    const double m = 0.5 / std::sqrt(double(b.size()));
    CurveSpec c{std::move(b), {}};
    c.moduli.assign(c.exponents.size(), m);
    c.validate();
    return c;
  }

  void validate() const {
    if (exponents.empty() || exponents.size() != moduli.size())
      throw ParameterError("CurveSpec: exponents and moduli must be nonempty and of equal length");
    for (auto b : exponents)
      if (b < 1) throw ParameterError("CurveSpec: exponents must be positive integers");
    for (double a : moduli)
      if (!(a > 0) || !std::isfinite(a)) throw ParameterError("CurveSpec: moduli must be positive");
  }

  std::size_t dimension() const { return exponents.size(); }

  std::vector<double> base_point() const {
    std::vector<double> a(moduli.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::log(moduli[i]);
    return a;
  }
};

/// Curves with every exponent in {1..bmax}; the diagonal (1,...,1) is among them.
inline std::vector<CurveSpec> default_curves(std::size_t n, std::int64_t bmax = 5) {
  if (n == 0 || bmax < 1) throw ParameterError("default_curves: need n >= 1 and bmax >= 1");
  std::vector<CurveSpec> out;
  std::vector<std::int64_t> b(n, 1);
  while (true) {
    out.push_back(CurveSpec::along(b));
    std::size_t k = n;
    while (k > 0 && b[k - 1] == bmax) b[--k] = 1;
    if (k == 0) break;
    ++b[k - 1];
  }
  return out;
}

struct SlopeOptions {
  double start = 1.0;            // first |s|
  int min_doublings = 24;
  int max_doublings = 600;
  double stability = 1e-3;       // relative change accepted as settled
};

/// Asymptotic slope along a curve: estimate, secant history, stability.
struct SlopeValue {
  double estimate = 0;
  std::vector<double> history;   // secants (f(a+sb)-f(a))/s, s = -start*2^k
  bool stable = false;
};

/// lim_{s -> -inf} f(a + s b)/s, the Lelong number of u along the curve.
///
/// The secants from the base point decrease monotonically to the limit for
/// convex increasing f; they are accelerated with Aitken's delta-squared
/// process and accepted once two successive accelerated values agree. For a
/// tabulated spec the sequence stops at the edge of the table.
inline SlopeValue directional_slope(const FunctionSpec& f, const CurveSpec& curve, const SlopeOptions& opt = {}) {
  curve.validate();
  const std::size_t n = curve.dimension();
  if (auto d = f.dimension(); d && *d != n) throw DimensionError("directional_slope: curve dimension mismatch");
  const auto a = curve.base_point();
  const double fa = f.evaluate_log(a);
  if (!std::isfinite(fa)) throw PoleConditionError("directional_slope: base point value is not finite");

  double lower_limit = -kInf;
  if (const auto* t = std::get_if<SamplesSpec>(&f.variant())) {
    for (std::size_t k = 0; k < n; ++k) {
      const double lo = t->table->grid().axis(k).front();
      lower_limit = std::max(lower_limit, (lo - a[k]) / double(curve.exponents[k]));
    }
  }

  SlopeValue out;
  std::vector<double> acc;
  std::vector<double> x(n);
  // tables: start small enough that the sequence gets several doublings
  double s = std::isfinite(lower_limit) ? -std::min(opt.start, -lower_limit / 256) : -opt.start;
  if (!(s < 0)) throw ParameterError("directional_slope: base point lies on the edge of the table");
  int settled = 0;
  for (int k = 0; k <= opt.max_doublings; ++k, s *= 2) {
    if (s < lower_limit) break;
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i] + s * double(curve.exponents[i]);
    const double v = f.evaluate_log(x);
    if (!std::isfinite(v)) throw PoleConditionError("directional_slope: non-finite value along the curve");
    const double h = (v - fa) / s;
    const auto& hist = out.history;
    const double scale = 1 + std::abs(h);
    if (!hist.empty() && h > hist.back() + 1e-6 * scale)
      throw NoLimitError("directional_slope: secant history is not monotone (input not convex increasing?)");
    out.history.push_back(h);

    double e = h;
    const std::size_t m = hist.size();
    if (m >= 3) {
      const double d1 = hist[m - 1] - hist[m - 2];
      const double d0 = hist[m - 2] - hist[m - 3];
      const double den = d1 - d0;
      if (std::abs(d1) > 1e-13 * scale && std::abs(den) > 1e-9 * std::abs(d1)) e = hist[m - 1] - d1 * d1 / den;
    }
    e = std::clamp(e, 0.0, h);
    acc.push_back(e);
    if (acc.size() >= 2 && k >= opt.min_doublings) {
      const double change = std::abs(acc.back() - acc[acc.size() - 2]);
      settled = change < opt.stability * (1 + std::abs(acc.back())) ? settled + 1 : 0;
      if (settled >= 2) {
        out.stable = true;
        break;
      }
    }
  }
  if (acc.empty()) throw ParameterError("directional_slope: curve leaves the table immediately");
  out.estimate = acc.back();
  if (!out.stable && !f.is_tabulated())
    throw NoLimitError("directional_slope: asymptotic slope did not settle");
  return out;
}

/// Absolute slack used when comparing asymptotic slopes.
inline constexpr double kSlopeTolerance = 1e-2;

struct SlopeComparison {
  CurveSpec curve;
  double slope_f = 0;
  double slope_g = 0;
};

struct SlopeConditionResult {
  bool holds = true;
  std::size_t worst = 0;       // index into `curves` with the largest deficit
  double worst_gap = 0;        // slope_f - slope_g at the worst curve
  std::vector<SlopeComparison> curves;
};

/// slope_f(b) >= slope_g(b) - tol for every curve.
inline SlopeConditionResult slope_condition(const FunctionSpec& f, const FunctionSpec& g,
                                            const std::vector<CurveSpec>& curves, double tol = kSlopeTolerance,
                                            const SlopeOptions& opt = {}) {
  if (curves.empty()) throw ParameterError("slope_condition: empty curve set");
  SlopeConditionResult r;
  r.worst_gap = kInf;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    SlopeComparison c{curves[i], directional_slope(f, curves[i], opt).estimate,
                      directional_slope(g, curves[i], opt).estimate};
    const double gap = c.slope_f - c.slope_g;
    if (gap < r.worst_gap) {
      r.worst_gap = gap;
      r.worst = i;
    }
    if (gap < -tol) r.holds = false;
    r.curves.push_back(std::move(c));
  }
  return r;
}

struct NewtonOptions {
  double depth = 1024;        // L; the body is read off the change between L and 2L
  double fine_depth = 4;
  double fine_step = 0.25;
  double growth = 1.15;
  double boundary_margin = 1e-3;
  double stability = 1e-3;    // tol_stab = stability * (1 + |f*|)
};

/// Discrete Newton body: dual nodes where the conjugate is finite, detected
/// as truncation-stable between depths L and 2L.
struct NewtonBody {
  DualGrid dual;
  std::vector<unsigned char> mask;
  std::vector<double> margin;   // |f*_{2L} - f*_{L}| per node
  std::size_t unstable = 0;
  bool range_warning = false;   // dual grid does not reach slope 0

  bool contains(std::size_t i) const { return mask[i] != 0; }
  std::size_t count() const { return std::size_t(std::count(mask.begin(), mask.end(), 1)); }
};

namespace detail {

inline std::vector<double> merged_nodes(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  std::vector<double> out;
  for (double v : a)
    if (out.empty() || v - out.back() > 1e-12 * std::max(1.0, std::abs(v))) out.push_back(v);
  return out;
}

inline GridNd tensor_grid(std::size_t n, const std::vector<double>& axis) {
  return GridNd(std::vector<std::vector<double>>(n, axis));
}

}  // namespace detail

inline NewtonBody newton_body(const FunctionSpec& f, const DualGrid& dual, const NewtonOptions& opt = {}) {
  const std::size_t n = dual.dimension();
  if (auto d = f.dimension(); d && *d != n) throw DimensionError("newton_body: dual grid dimension mismatch");
  const double upper = std::log1p(-opt.boundary_margin);
  double depth = opt.depth;
  if (const auto* t = std::get_if<SamplesSpec>(&f.variant())) {
    double table_depth = kInf;
    for (std::size_t k = 0; k < n; ++k) table_depth = std::min(table_depth, -t->table->grid().axis(k).front());
    depth = std::min(depth, table_depth / 2);
  }
  const double fine = std::min(opt.fine_depth, depth / 2);
  const auto shallow = graded_nodes(depth, upper, fine, opt.fine_step, opt.growth);
  const auto deep = detail::merged_nodes(shallow, graded_nodes(2 * depth, upper, fine, opt.fine_step, opt.growth));
  const auto fl = conjugate(sample(f, detail::tensor_grid(n, shallow)), dual);
  const auto f2 = conjugate(sample(f, detail::tensor_grid(n, deep)), dual);

  NewtonBody body{dual, std::vector<unsigned char>(dual.size(), 0), std::vector<double>(dual.size(), 0.0), 0, false};
  for (std::size_t i = 0; i < dual.size(); ++i) {
    const double a = fl[i].raw(), b = f2[i].raw();
    body.margin[i] = std::abs(b - a);
    if (body.margin[i] < opt.stability * (1 + std::abs(b))) body.mask[i] = 1;
    else ++body.unstable;
  }
  for (std::size_t k = 0; k < n; ++k)
    if (dual.axis(k).front() > 0 || dual.axis(k).back() < 0) body.range_warning = true;
  return body;
}

/// min over body nodes of <lambda, b>; +inf for an empty body.
inline double support_min(const NewtonBody& body, std::span<const double> b) {
  const GridNd& g = body.dual.nodes();
  std::vector<double> p(g.dimension());
  double best = kInf;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!body.contains(i)) continue;
    g.point(i, p);
    double s = 0;
    for (std::size_t k = 0; k < p.size(); ++k) s += p[k] * b[k];
    best = std::min(best, s);
  }
  return best;
}

/// Every node above a member (coordinatewise, within the grid) is a member.
inline bool is_upward_closed(const NewtonBody& body) {
  const GridNd& g = body.dual.nodes();
  std::vector<std::size_t> idx(g.dimension());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!body.contains(i)) continue;
    g.unravel(i, idx);
    for (std::size_t k = 0; k < g.dimension(); ++k)
      if (idx[k] + 1 < g.extent(k) && !body.contains(i + g.stride(k))) return false;
  }
  return true;
}

/// Every grid line along an axis or a two-axis diagonal meets the body in a
/// contiguous run of nodes.
inline bool is_discretely_convex(const NewtonBody& body) {
  const GridNd& g = body.dual.nodes();
  const std::size_t n = g.dimension();
  std::vector<std::size_t> idx(n);
  auto check_dir = [&](const std::vector<int>& dir) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.unravel(i, idx);
      // start only at line origins
      bool origin = false;
      for (std::size_t k = 0; k < n; ++k) {
        if (dir[k] > 0 && idx[k] == 0) origin = true;
        if (dir[k] < 0 && idx[k] + 1 == g.extent(k)) origin = true;
      }
      if (!origin) continue;
      int state = 0;  // 0 before run, 1 inside, 2 after
      auto cur = idx;
      while (true) {
        const bool in = body.contains(g.ravel(cur));
        if (in && state == 2) return false;
        if (in) state = 1;
        else if (state == 1) state = 2;
        bool ok = true;
        for (std::size_t k = 0; k < n; ++k) {
          if (dir[k] > 0 && cur[k] + 1 >= g.extent(k)) ok = false;
          if (dir[k] < 0 && cur[k] == 0) ok = false;
        }
        if (!ok) break;
        for (std::size_t k = 0; k < n; ++k) cur[k] = std::size_t(std::int64_t(cur[k]) + dir[k]);
      }
    }
    return true;
  };
  std::vector<int> dir(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(dir.begin(), dir.end(), 0);
    dir[i] = 1;
    if (!check_dir(dir)) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      dir[j] = 1;
      if (!check_dir(dir)) return false;
      dir[j] = -1;
      if (!check_dir(dir)) return false;
      dir[j] = 0;
    }
  }
  return true;
}

struct InclusionReport {
  bool included = true;
  std::size_t excess_cells = 0;   // Chebyshev distance, in dual cells, from mask(f) to mask(g)
  double excess = 0;              // the same in slope units (cells times the largest dual step)
  std::size_t offending = 0;      // members of mask(f) farther than one cell from mask(g)
};

/// mask(f) within one dual cell of mask(g).
inline InclusionReport newton_inclusion(const NewtonBody& bf, const NewtonBody& bg) {
  if (!(bf.dual == bg.dual)) throw ParameterError("newton_inclusion: bodies live on different dual grids");
  const GridNd& g = bf.dual.nodes();
  const std::size_t n = g.dimension();
  InclusionReport rep;
  if (bf.count() == 0) return rep;

  // Chebyshev distance transform of mask(g) by repeated dilation.
  constexpr std::size_t kFar = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(g.size(), kFar);
  std::vector<std::size_t> frontier;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (bg.contains(i)) {
      dist[i] = 0;
      frontier.push_back(i);
    }
  std::vector<std::size_t> idx(n), nb(n);
  std::size_t neighbours = 1;
  for (std::size_t k = 0; k < n; ++k) neighbours *= 3;
  for (std::size_t level = 1; !frontier.empty(); ++level) {
    std::vector<std::size_t> next;
    for (std::size_t i : frontier) {
      g.unravel(i, idx);
      for (std::size_t code = 0; code < neighbours; ++code) {
        std::size_t c = code;
        bool ok = true;
        for (std::size_t k = 0; k < n; ++k) {
          const int d = int(c % 3) - 1;
          c /= 3;
          const auto v = std::int64_t(idx[k]) + d;
          if (v < 0 || v >= std::int64_t(g.extent(k))) ok = false;
          else nb[k] = std::size_t(v);
        }
        if (!ok) continue;
        const std::size_t j = g.ravel(nb);
        if (dist[j] == kFar) {
          dist[j] = level;
          next.push_back(j);
        }
      }
    }
    frontier = std::move(next);
  }

  double step = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& a = g.axis(k);
    for (std::size_t i = 1; i < a.size(); ++i) step = std::max(step, a[i] - a[i - 1]);
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!bf.contains(i)) continue;
    const std::size_t d = dist[i] == kFar ? g.size() : dist[i];
    rep.excess_cells = std::max(rep.excess_cells, d);
    if (d > 1) ++rep.offending;
  }
  rep.excess = double(rep.excess_cells) * step;
  rep.included = rep.offending == 0;
  return rep;
}

inline InclusionReport newton_inclusion(const FunctionSpec& f, const FunctionSpec& g, const DualGrid& dual,
                                        const NewtonOptions& opt = {}) {
  return newton_inclusion(newton_body(f, dual, opt), newton_body(g, dual, opt));
}

}  // namespace toric

#endif  // TORIC_ASYMPTOTIC_HPP
