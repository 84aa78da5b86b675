#ifndef TORIC_SAMPLED_HPP
#define TORIC_SAMPLED_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "toric/extended_value.hpp"
#include "toric/grid.hpp"

namespace toric {

/// Default slack for discrete convexity/monotonicity checks, relative to
/// (1 + largest finite magnitude).
inline constexpr double kShapeTolerance = 1e-9;

namespace detail {

inline double value_scale(std::span<const ExtendedValue> v) {
  double s = 0;
  for (auto e : v)
    if (e.is_finite()) s = std::max(s, std::abs(e.raw()));
  return s;
}

// Midpoint test f(mid) <= w f(lo) + (1-w) f(hi) along one index direction.
// `dir` holds -1/0/+1 per axis. Triples that are not collinear (possible on
// non-uniform axes) or touch +INF are skipped.
inline bool convex_along(const GridNd& g, std::span<const ExtendedValue> v, std::span<const int> dir, double tol) {
  const std::size_t n = g.dimension();
  std::vector<std::size_t> idx(n), lo(n), hi(n);
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    g.unravel(flat, idx);
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) {
      if (dir[k] == 0) {
        lo[k] = hi[k] = idx[k];
      } else {
        if (idx[k] == 0 || idx[k] + 1 >= g.extent(k)) ok = false;
        else {
          lo[k] = dir[k] > 0 ? idx[k] - 1 : idx[k] + 1;
          hi[k] = dir[k] > 0 ? idx[k] + 1 : idx[k] - 1;
        }
      }
    }
    if (!ok) continue;
    const double fm = v[flat].raw();
    const double fl = v[g.ravel(lo)].raw();
    const double fh = v[g.ravel(hi)].raw();
    if (!std::isfinite(fm) || !std::isfinite(fl) || !std::isfinite(fh)) continue;
    double w = -1;
    bool collinear = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (dir[k] == 0) continue;
      const auto& a = g.axis(k);
      const double dl = std::abs(a[idx[k]] - a[lo[k]]);
      const double dh = std::abs(a[hi[k]] - a[idx[k]]);
      const double wk = dh / (dl + dh);
      if (w < 0) w = wk;
      else if (std::abs(w - wk) > 1e-12) collinear = false;
    }
    if (!collinear) continue;
    if (fm > w * fl + (1 - w) * fh + tol) return false;
  }
  return true;
}

}  // namespace detail

/// True iff discrete second differences along every axis and every diagonal
/// pair are >= -tol on the finite region.
inline bool check_convex(const GridNd& g, std::span<const ExtendedValue> v, double rel_tol = kShapeTolerance) {
  const double tol = rel_tol * (1 + detail::value_scale(v));
  const std::size_t n = g.dimension();
  std::vector<int> dir(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(dir.begin(), dir.end(), 0);
    dir[i] = 1;
    if (!detail::convex_along(g, v, dir, tol)) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      dir[j] = 1;
      if (!detail::convex_along(g, v, dir, tol)) return false;
      dir[j] = -1;
      if (!detail::convex_along(g, v, dir, tol)) return false;
      dir[j] = 0;
    }
  }
  return true;
}

/// True iff first differences along each axis are >= -tol on the finite region.
inline bool check_increasing(const GridNd& g, std::span<const ExtendedValue> v, double rel_tol = kShapeTolerance) {
  const double tol = rel_tol * (1 + detail::value_scale(v));
  std::vector<std::size_t> idx(g.dimension());
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    g.unravel(flat, idx);
    for (std::size_t k = 0; k < g.dimension(); ++k) {
      if (idx[k] + 1 >= g.extent(k)) continue;
      const double a = v[flat].raw();
      const double b = v[flat + g.stride(k)].raw();
      if (std::isfinite(a) && std::isfinite(b) && b < a - tol) return false;
    }
  }
  return true;
}

/// Values of a function at every node of a grid, plus cached shape flags.
class SampledFunction {
 public:
  SampledFunction() = default;

  SampledFunction(GridNd grid, std::vector<ExtendedValue> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw ParameterError("SampledFunction: value count does not match grid");
    is_convex_ = check_convex(grid_, values_);
    is_increasing_ = check_increasing(grid_, values_);
  }

  static SampledFunction from_raw(GridNd grid, std::span<const double> raw) {
    std::vector<ExtendedValue> v;
    v.reserve(raw.size());
    for (double r : raw) v.push_back(r == kInf ? ExtendedValue::infinity() : ExtendedValue(r));
    return SampledFunction(std::move(grid), std::move(v));
  }

  const GridNd& grid() const noexcept { return grid_; }
  const std::vector<ExtendedValue>& values() const noexcept { return values_; }
  ExtendedValue operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }
  bool is_convex() const noexcept { return is_convex_; }
  bool is_increasing() const noexcept { return is_increasing_; }

  std::vector<double> raw() const {
    std::vector<double> r(values_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = values_[i].raw();
    return r;
  }

  bool has_finite_value() const {
    return std::any_of(values_.begin(), values_.end(), [](ExtendedValue e) { return e.is_finite(); });
  }

  /// Multilinear interpolation at a point inside the grid's bounding box;
  /// +INF if any corner of the enclosing cell is +INF.
  double interpolate(std::span<const double> x) const {
    const std::size_t n = grid_.dimension();
    std::vector<std::size_t> base(n);
    std::vector<double> frac(n);
    for (std::size_t k = 0; k < n; ++k) {
      const auto& a = grid_.axis(k);
      if (x[k] < a.front() - 1e-12 * std::max(1.0, std::abs(a.front())) ||
          x[k] > a.back() + 1e-12 * std::max(1.0, std::abs(a.back())))
        throw ParameterError("SampledFunction: point outside the sampled grid");
      auto it = std::upper_bound(a.begin(), a.end(), x[k]);
      std::size_t i = it == a.begin() ? 0 : std::size_t(it - a.begin()) - 1;
      if (i + 1 >= a.size()) i = a.size() - 2;
      base[k] = i;
      frac[k] = std::clamp((x[k] - a[i]) / (a[i + 1] - a[i]), 0.0, 1.0);
    }
    double acc = 0;
    std::vector<std::size_t> idx(n);
    for (std::size_t corner = 0; corner < (std::size_t(1) << n); ++corner) {
      double w = 1;
      for (std::size_t k = 0; k < n; ++k) {
        const bool up = (corner >> k) & 1;
        idx[k] = base[k] + (up ? 1 : 0);
        w *= up ? frac[k] : 1 - frac[k];
      }
      if (w == 0) continue;
      const double v = values_[grid_.ravel(idx)].raw();
      if (v == kInf) return kInf;
      acc += w * v;
    }
    return acc;
  }

 private:
  GridNd grid_;
  std::vector<ExtendedValue> values_;
  bool is_convex_ = false;
  bool is_increasing_ = false;
};

}  // namespace toric

#endif  // TORIC_SAMPLED_HPP
