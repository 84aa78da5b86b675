#ifndef TORIC_LEGENDRE_HPP
#define TORIC_LEGENDRE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "toric/errors.hpp"
#include "toric/sampled.hpp"

namespace toric {

/// Tensor grid of slopes on which conjugates are tabulated.
class DualGrid {
 public:
  DualGrid() = default;
  explicit DualGrid(std::vector<std::vector<double>> axes) : nodes_(std::move(axes)) {}

  /// Uniform `resolution` nodes per axis over the given [lo, hi] ranges.
  static DualGrid uniform(const std::vector<std::pair<double, double>>& ranges, std::size_t resolution) {
    std::vector<std::vector<double>> axes;
    for (auto [lo, hi] : ranges) axes.push_back(uniform_nodes(lo, hi, resolution));
    return DualGrid(std::move(axes));
  }

  static DualGrid uniform(std::size_t n, double lo, double hi, std::size_t resolution) {
    return uniform(std::vector<std::pair<double, double>>(n, {lo, hi}), resolution);
  }

  /// Range [min slope - 10%, max slope + 10%] of the discrete slopes of the
  /// given functions along each axis, `resolution` nodes (default 2N).
  static DualGrid fitted(std::span<const SampledFunction* const> fs, std::size_t resolution = 0);

  static DualGrid fitted(const SampledFunction& f, std::size_t resolution = 0) {
    const SampledFunction* p[] = {&f};
    return fitted(p, resolution);
  }

  /// Copy with extra nodes merged into one axis (duplicates dropped).
  DualGrid with_nodes(std::size_t axis, std::span<const double> extra) const {
    auto axes = nodes_.axes();
    auto& a = axes[axis];
    a.insert(a.end(), extra.begin(), extra.end());
    std::sort(a.begin(), a.end());
    std::vector<double> out;
    for (double v : a)
      if (out.empty() || v - out.back() > 1e-13 * std::max(1.0, std::abs(v))) out.push_back(v);
    a = std::move(out);
    return DualGrid(std::move(axes));
  }

  std::size_t dimension() const noexcept { return nodes_.dimension(); }
  std::size_t size() const noexcept { return nodes_.size(); }
  const GridNd& nodes() const noexcept { return nodes_; }
  const std::vector<double>& axis(std::size_t k) const { return nodes_.axis(k); }
  const std::vector<std::vector<double>>& axes() const noexcept { return nodes_.axes(); }

  friend bool operator==(const DualGrid& a, const DualGrid& b) { return a.nodes_ == b.nodes_; }

 private:
  GridNd nodes_;
};

/// Conjugate tabulated on a dual grid; entries may be +INF.
class ConjugateFunction {
 public:
  ConjugateFunction() = default;
  ConjugateFunction(DualGrid dual, std::vector<ExtendedValue> values) : dual_(std::move(dual)), values_(std::move(values)) {
    if (values_.size() != dual_.size()) throw ParameterError("ConjugateFunction: value count does not match dual grid");
  }

  const DualGrid& dual() const noexcept { return dual_; }
  const std::vector<ExtendedValue>& values() const noexcept { return values_; }
  ExtendedValue operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  std::vector<double> raw() const {
    std::vector<double> r(values_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = values_[i].raw();
    return r;
  }

  bool is_convex(double rel_tol = kShapeTolerance) const { return check_convex(dual_.nodes(), values_, rel_tol); }

 private:
  DualGrid dual_;
  std::vector<ExtendedValue> values_;
};

namespace detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Indices of the vertices of the lower convex hull of the finite points
/// (x[i], y[i]); x strictly increasing. Collinear interior points are dropped.
inline void lower_hull(std::span<const double> x, std::span<const double> y, std::vector<std::size_t>& hull) {
  hull.clear();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] < kInf)) continue;
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2], b = hull.back();
      // drop b if it lies on or above the chord a -> i
      const double lhs = (y[b] - y[a]) * (x[i] - x[a]);
      const double rhs = (y[i] - y[a]) * (x[b] - x[a]);
      if (lhs >= rhs) hull.pop_back();
      else break;
    }
    hull.push_back(i);
  }
}

/// out[j] = max_i (p[j] * x[i] - c[i]) over finite c, with p ascending.
///
/// Linear time: the maximiser over the lower hull of (x, c) moves
/// monotonically with p. Ties resolve to the smallest index. Lines that are
/// +INF everywhere produce -inf.
inline void legendre_line(std::span<const double> x, std::span<const double> c, std::span<const double> p,
                          std::span<double> out, std::vector<std::size_t>& hull) {
  lower_hull(x, c, hull);
  if (hull.empty()) {
    std::fill(out.begin(), out.end(), kNegInf);
    return;
  }
  std::size_t k = 0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    while (k + 1 < hull.size()) {
      const std::size_t a = hull[k], b = hull[k + 1];
      // advance while the next vertex is strictly better
      if (p[j] * (x[b] - x[a]) > c[b] - c[a]) ++k;
      else break;
    }
    out[j] = p[j] * x[hull[k]] - c[hull[k]];
  }
}

/// Calls fn(base, stride, count) for every line of a row-major array of the
/// given extents running along `axis`.
template <class Fn>
void for_each_line(const std::vector<std::size_t>& extents, std::size_t axis, Fn&& fn) {
  std::size_t stride = 1;
  for (std::size_t k = axis + 1; k < extents.size(); ++k) stride *= extents[k];
  const std::size_t count = extents[axis];
  std::size_t outer = 1;
  for (std::size_t k = 0; k < axis; ++k) outer *= extents[k];
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t s = 0; s < stride; ++s) fn(o * count * stride + s, stride, count);
}

/// Discrete Legendre transform from a tensor grid to another tensor grid:
/// out(p) = max_x <p, x> - values(x), via iterated one-dimensional
/// transforms (the maximum over a product set splits axis by axis).
inline std::vector<double> legendre_nd(const std::vector<std::vector<double>>& from,
                                       std::span<const double> values,
                                       const std::vector<std::vector<double>>& to) {
  const std::size_t n = from.size();
  if (to.size() != n) throw DimensionError("legendre: primal and dual dimensions differ");
  std::vector<std::size_t> ext(n);
  for (std::size_t k = 0; k < n; ++k) ext[k] = from[k].size();
  std::vector<double> cur(values.begin(), values.end());
  std::vector<double> cin, cout;
  std::vector<std::size_t> hull;
  for (std::size_t axis = 0; axis < n; ++axis) {
    std::vector<std::size_t> next_ext = ext;
    next_ext[axis] = to[axis].size();
    std::size_t total = 1;
    for (auto e : next_ext) total *= e;
    std::vector<double> next(total);
    std::size_t stride_out = 1;
    for (std::size_t k = axis + 1; k < n; ++k) stride_out *= next_ext[k];
    const std::size_t m = to[axis].size();
    cin.resize(ext[axis]);
    cout.resize(m);
    for_each_line(ext, axis, [&](std::size_t base, std::size_t stride, std::size_t count) {
      for (std::size_t i = 0; i < count; ++i) cin[i] = cur[base + i * stride];
      legendre_line(from[axis], cin, to[axis], cout, hull);
      // base = o*count*stride + s  ->  o*m*stride + s in the output layout
      const std::size_t o = base / (count * stride), s = base % (count * stride);
      const std::size_t obase = o * m * stride_out + s;
      for (std::size_t j = 0; j < m; ++j) next[obase + j * stride_out] = cout[j];
    });
    if (axis + 1 < n)
      for (double& v : next) v = -v;  // cost for the next pass
    cur = std::move(next);
    ext = std::move(next_ext);
  }
  return cur;
}

/// Slopes of the lower hulls of every grid line along `axis`.
inline std::vector<double> line_hull_slopes(const GridNd& g, std::span<const double> values, std::size_t axis) {
  std::vector<double> slopes, line(g.extent(axis));
  std::vector<std::size_t> hull;
  const auto& x = g.axis(axis);
  for_each_line(g.extents(), axis, [&](std::size_t base, std::size_t stride, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) line[i] = values[base + i * stride];
    lower_hull(x, line, hull);
    for (std::size_t k = 1; k < hull.size(); ++k)
      slopes.push_back((line[hull[k]] - line[hull[k - 1]]) / (x[hull[k]] - x[hull[k - 1]]));
  });
  std::sort(slopes.begin(), slopes.end());
  slopes.erase(std::unique(slopes.begin(), slopes.end()), slopes.end());
  return slopes;
}

}  // namespace detail

inline DualGrid DualGrid::fitted(std::span<const SampledFunction* const> fs, std::size_t resolution) {
  if (fs.empty()) throw ParameterError("DualGrid::fitted: no functions");
  const GridNd& g = fs.front()->grid();
  const std::size_t n = g.dimension();
  std::vector<std::pair<double, double>> ranges;
  std::vector<std::size_t> idx(n);
  std::size_t res = resolution;
  for (std::size_t k = 0; k < n; ++k) {
    double lo = kInf, hi = -kInf;
    for (const SampledFunction* f : fs) {
      if (!(f->grid() == g)) throw ParameterError("DualGrid::fitted: functions on different grids");
      const auto& x = g.axis(k);
      for (std::size_t flat = 0; flat < g.size(); ++flat) {
        g.unravel(flat, idx);
        if (idx[k] + 1 >= g.extent(k)) continue;
        const double a = (*f)[flat].raw(), b = (*f)[flat + g.stride(k)].raw();
        if (!std::isfinite(a) || !std::isfinite(b)) continue;
        const double s = (b - a) / (x[idx[k] + 1] - x[idx[k]]);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
    }
    if (lo > hi) lo = hi = 0;
    const double pad = 0.1 * std::max({hi - lo, std::abs(lo), std::abs(hi), 1.0});
    ranges.emplace_back(lo - pad, hi + pad);
    if (resolution == 0) res = std::max(res, 2 * g.extent(k));
  }
  return uniform(ranges, res);
}

/// f*(p) = max over nodes x of <p, x> - f(x), tabulated on `dual`.
inline ConjugateFunction conjugate(const SampledFunction& f, const DualGrid& dual) {
  if (!f.has_finite_value()) throw UndefinedConjugateError("conjugate: function is +INF everywhere");
  if (dual.dimension() != f.grid().dimension()) throw DimensionError("conjugate: dual grid dimension mismatch");
  const auto raw = f.raw();
  const auto out = detail::legendre_nd(f.grid().axes(), raw, dual.axes());
  std::vector<ExtendedValue> vals(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) vals[i] = ExtendedValue(out[i]);
  return ConjugateFunction(dual, std::move(vals));
}

/// h*(x) = max over dual nodes p of <p, x> - h(p), tabulated on `grid`.
inline SampledFunction conjugate_to_grid(const ConjugateFunction& h, const GridNd& grid) {
  if (h.dual().dimension() != grid.dimension()) throw DimensionError("conjugate: grid dimension mismatch");
  const auto raw = h.raw();
  if (std::none_of(raw.begin(), raw.end(), [](double v) { return v < kInf; }))
    throw UndefinedConjugateError("conjugate: dual function is +INF everywhere");
  const auto out = detail::legendre_nd(h.dual().axes(), raw, grid.axes());
  return SampledFunction::from_raw(grid, out);
}

/// Dual grid used for biconjugates: the fitted uniform grid plus the slopes
/// of every line hull, so one-dimensional envelopes are reproduced exactly.
inline DualGrid envelope_dual(std::span<const SampledFunction* const> fs, std::size_t resolution = 0) {
  DualGrid d = DualGrid::fitted(fs, resolution);
  for (const SampledFunction* f : fs) {
    const auto raw = f->raw();
    for (std::size_t k = 0; k < d.dimension(); ++k) {
      const auto s = detail::line_hull_slopes(f->grid(), raw, k);
      d = d.with_nodes(k, s);
    }
  }
  return d;
}

namespace detail {
inline SampledFunction restore_infinite(const SampledFunction& ref, const SampledFunction& g) {
  std::vector<ExtendedValue> v = g.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (ref[i].is_infinite()) v[i] = ExtendedValue::infinity();
  return SampledFunction(ref.grid(), std::move(v));
}
}  // namespace detail

/// f** on f's grid over the given dual grid. Nodes where f is +INF stay +INF.
inline SampledFunction biconjugate(const SampledFunction& f, const DualGrid& dual) {
  return detail::restore_infinite(f, conjugate_to_grid(conjugate(f, dual), f.grid()));
}

/// f** with the default envelope dual grid.
inline SampledFunction biconjugate(const SampledFunction& f, std::size_t resolution = 0) {
  const SampledFunction* p[] = {&f};
  return biconjugate(f, envelope_dual(p, resolution));
}

/// Greatest convex minorant P(f). Same result as biconjugate.
inline SampledFunction convexify(const SampledFunction& f, std::size_t resolution = 0) {
  return biconjugate(f, resolution);
}

/// One-dimensional lower convex envelope by direct hull interpolation; kept
/// as a cross-check for the conjugate route.
inline SampledFunction convexify_by_hull(const SampledFunction& f) {
  if (f.grid().dimension() != 1) throw DimensionError("convexify_by_hull: one-dimensional input required");
  if (!f.has_finite_value()) throw UndefinedConjugateError("convexify_by_hull: function is +INF everywhere");
  const auto& x = f.grid().axis(0);
  const auto y = f.raw();
  std::vector<std::size_t> hull;
  detail::lower_hull(x, y, hull);
  std::vector<double> out(y.size(), kInf);
  for (std::size_t k = 0; k < hull.size(); ++k) out[hull[k]] = y[hull[k]];
  for (std::size_t k = 1; k < hull.size(); ++k) {
    const std::size_t a = hull[k - 1], b = hull[k];
    // interpolate from the nearer vertex; chords can span many orders of magnitude
    const double slope = (y[b] - y[a]) / (x[b] - x[a]);
    for (std::size_t i = a + 1; i < b; ++i)
      out[i] = x[i] - x[a] < x[b] - x[i] ? y[a] + slope * (x[i] - x[a]) : y[b] + slope * (x[i] - x[b]);
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    if (y[i] == kInf) out[i] = kInf;
  return SampledFunction::from_raw(f.grid(), out);
}

/// Pointwise min / max / shift helpers on shared grids.
inline SampledFunction pointwise_min(const SampledFunction& f, const SampledFunction& g) {
  if (!(f.grid() == g.grid())) throw ParameterError("pointwise_min: grid mismatch");
  std::vector<ExtendedValue> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::min(f[i], g[i]);
  return SampledFunction(f.grid(), std::move(v));
}

inline SampledFunction shifted(const SampledFunction& f, double c) {
  std::vector<ExtendedValue> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] + c;
  return SampledFunction(f.grid(), std::move(v));
}

inline ConjugateFunction pointwise_max(const ConjugateFunction& a, const ConjugateFunction& b) {
  if (!(a.dual() == b.dual())) throw ParameterError("pointwise_max: dual grid mismatch");
  std::vector<ExtendedValue> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(a[i], b[i]);
  return ConjugateFunction(a.dual(), std::move(v));
}

}  // namespace toric

#endif  // TORIC_LEGENDRE_HPP
