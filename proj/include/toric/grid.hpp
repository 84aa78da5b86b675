#ifndef TORIC_GRID_HPP
#define TORIC_GRID_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "toric/errors.hpp"

namespace toric {

enum class DomainShape { box, logball };

inline std::string to_string(DomainShape s) { return s == DomainShape::box ? "box" : "logball"; }

inline DomainShape parse_shape(const std::string& s) {
  if (s == "box") return DomainShape::box;
  if (s == "logball") return DomainShape::logball;
  throw ParameterError("unknown domain shape '" + s + "' (expected box or logball)");
}

/// Region of logarithmic coordinates under study: [-depth, log(1-margin)]^n,
/// optionally cut down to the log image of the unit ball.
struct DomainSpec {
  std::size_t dimension = 1;
  double depth = 4.0;
  double boundary_margin = 1e-3;
  DomainShape shape = DomainShape::box;

  void validate() const {
    if (dimension == 0) throw ParameterError("DomainSpec: dimension must be positive");
    if (!(depth > 0) || !std::isfinite(depth)) throw ParameterError("DomainSpec: depth must be positive");
    if (!(boundary_margin > 0 && boundary_margin < 1))
      throw ParameterError("DomainSpec: boundary margin must lie in (0,1)");
  }

  double upper() const { return std::log1p(-boundary_margin); }
};

/// True iff x lies in C0 = {x : sum exp(2 x_i) < 1}.
inline bool in_log_ball(std::span<const double> x) {
  double s = 0;
  for (double xi : x) s += std::exp(2 * xi);
  return s < 1;
}

/// Tensor grid with a strictly increasing node sequence per axis, stored in
/// row-major order (last axis fastest).
class GridNd {
 public:
  GridNd() = default;

  explicit GridNd(std::vector<std::vector<double>> axes, DomainShape shape = DomainShape::box)
      : axes_(std::move(axes)), shape_(shape) {
    if (axes_.empty()) throw ParameterError("GridNd: at least one axis required");
    for (const auto& a : axes_) {
      if (a.size() < 2) throw ParameterError("GridNd: every axis needs at least two nodes");
      for (std::size_t i = 1; i < a.size(); ++i)
        if (!(a[i] > a[i - 1])) throw ParameterError("GridNd: axis nodes must be strictly increasing");
    }
    strides_.assign(axes_.size(), 1);
    for (std::size_t k = axes_.size() - 1; k > 0; --k) strides_[k - 1] = strides_[k] * axes_[k].size();
    size_ = strides_[0] * axes_[0].size();
  }

  std::size_t dimension() const noexcept { return axes_.size(); }
  std::size_t size() const noexcept { return size_; }
  std::size_t extent(std::size_t axis) const { return axes_[axis].size(); }
  const std::vector<double>& axis(std::size_t k) const { return axes_[k]; }
  const std::vector<std::vector<double>>& axes() const noexcept { return axes_; }
  std::size_t stride(std::size_t k) const { return strides_[k]; }
  DomainShape shape() const noexcept { return shape_; }

  std::vector<std::size_t> extents() const {
    std::vector<std::size_t> e;
    for (const auto& a : axes_) e.push_back(a.size());
    return e;
  }

  bool is_uniform(double rel_tol = 1e-9) const {
    for (const auto& a : axes_) {
      const double h = (a.back() - a.front()) / double(a.size() - 1);
      for (std::size_t i = 1; i < a.size(); ++i)
        if (std::abs((a[i] - a[i - 1]) - h) > rel_tol * std::max(1.0, std::abs(h))) return false;
    }
    return true;
  }

  void unravel(std::size_t flat, std::span<std::size_t> idx) const {
    for (std::size_t k = 0; k < dimension(); ++k) {
      idx[k] = flat / strides_[k];
      flat %= strides_[k];
    }
  }

  std::size_t ravel(std::span<const std::size_t> idx) const {
    std::size_t f = 0;
    for (std::size_t k = 0; k < dimension(); ++k) f += idx[k] * strides_[k];
    return f;
  }

  void point(std::size_t flat, std::span<double> x) const {
    for (std::size_t k = 0; k < dimension(); ++k) {
      x[k] = axes_[k][flat / strides_[k]];
      flat %= strides_[k];
    }
  }

  std::vector<double> point(std::size_t flat) const {
    std::vector<double> x(dimension());
    point(flat, x);
    return x;
  }

  /// Node lies in the domain the grid models (always true for the box shape).
  bool in_domain(std::size_t flat) const {
    if (shape_ == DomainShape::box) return true;
    return in_log_ball(point(flat));
  }

  /// Largest cell diameter (Euclidean).
  double max_cell_diameter() const {
    double s = 0;
    for (const auto& a : axes_) {
      double h = 0;
      for (std::size_t i = 1; i < a.size(); ++i) h = std::max(h, a[i] - a[i - 1]);
      s += h * h;
    }
    return std::sqrt(s);
  }

  friend bool operator==(const GridNd& a, const GridNd& b) { return a.axes_ == b.axes_ && a.shape_ == b.shape_; }

 private:
  std::vector<std::vector<double>> axes_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
  DomainShape shape_ = DomainShape::box;
};

inline std::vector<double> uniform_nodes(double lo, double hi, std::size_t count) {
  if (count < 2) throw ParameterError("uniform_nodes: need at least two nodes");
  if (!(hi > lo)) throw ParameterError("uniform_nodes: empty interval");
  std::vector<double> v(count);
  const double h = (hi - lo) / double(count - 1);
  for (std::size_t i = 0; i < count; ++i) v[i] = lo + h * double(i);
  v.back() = hi;
  return v;
}

/// Uniform grid over [-L, log(1-eps)]^n with `resolution` nodes per axis.
///
/// Resolutions below 16 are accepted for small worked examples; the
/// analysis routines size their own grids well above that.
inline GridNd build_grid(const DomainSpec& domain, std::size_t resolution) {
  domain.validate();
  if (resolution < 2) throw ParameterError("build_grid: resolution must be at least 2");
  const double hi = domain.upper();
  if (!(hi > -domain.depth)) throw ParameterError("build_grid: depth does not exceed the boundary margin");
  std::vector<std::vector<double>> axes(domain.dimension, uniform_nodes(-domain.depth, hi, resolution));
  return GridNd(std::move(axes), domain.shape);
}

/// Axis that is uniform with step `fine_step` on [-fine_depth, upper] and
/// geometrically coarsening (ratio `growth`) below that, down to -depth.
///
/// Grids built with the same fine part and growth share every node above
/// the shallower depth, so values read there can be compared across depths.
inline std::vector<double> graded_nodes(double depth, double upper, double fine_depth, double fine_step,
                                        double growth) {
  if (!(depth > fine_depth) || !(fine_depth > 0) || !(fine_step > 0) || !(growth > 1))
    throw ParameterError("graded_nodes: invalid parameters");
  std::vector<double> v;
  const auto fine = static_cast<std::size_t>(std::ceil((fine_depth + upper) / fine_step));
  for (std::size_t i = 0; i <= fine; ++i) v.push_back(upper - fine_step * double(i));
  double x = v.back();
  double step = fine_step;
  while (true) {
    step *= growth;
    x -= step;
    if (x <= -depth) break;
    v.push_back(x);
  }
  if (v.back() - (-depth) < 0.25 * step) v.pop_back();
  v.push_back(-depth);
  std::reverse(v.begin(), v.end());
  return v;
}

/// Cell-level boolean mask: one flag per grid cell, cells indexed row-major
/// with extents (N_k - 1).
class CellMask {
 public:
  explicit CellMask(const GridNd& grid) : grid_(&grid) {
    std::size_t c = 1;
    for (std::size_t k = 0; k < grid.dimension(); ++k) c *= grid.extent(k) - 1;
    flags_.assign(c, 0);
  }

  std::size_t size() const noexcept { return flags_.size(); }
  bool operator[](std::size_t i) const { return flags_[i] != 0; }
  void set(std::size_t i, bool v = true) { flags_[i] = v ? 1 : 0; }
  const GridNd& grid() const { return *grid_; }

  /// Lower-corner multi-index of a cell.
  void unravel(std::size_t cell, std::span<std::size_t> idx) const {
    for (std::size_t k = grid_->dimension(); k-- > 0;) {
      const std::size_t e = grid_->extent(k) - 1;
      idx[k] = cell % e;
      cell /= e;
    }
  }

 private:
  const GridNd* grid_;
  std::vector<unsigned char> flags_;
};

/// Lebesgue measure in z-space of the polyannuli corresponding to the
/// flagged cells: each cell contributes prod_i pi (e^{2 x_i^+} - e^{2 x_i^-}).
inline double measure_pushforward(const CellMask& mask) {
  const GridNd& g = mask.grid();
  std::vector<std::size_t> idx(g.dimension());
  double total = 0;
  for (std::size_t c = 0; c < mask.size(); ++c) {
    if (!mask[c]) continue;
    mask.unravel(c, idx);
    double m = 1;
    for (std::size_t k = 0; k < g.dimension(); ++k) {
      const double lo = g.axis(k)[idx[k]];
      const double hi = g.axis(k)[idx[k] + 1];
      m *= std::numbers::pi * (std::exp(2 * hi) - std::exp(2 * lo));
    }
    total += m;
  }
  return total;
}

}  // namespace toric

#endif  // TORIC_GRID_HPP
