#ifndef TORIC_ORACLES_HPP
#define TORIC_ORACLES_HPP

// Slow reference implementations used to cross-check the fast paths.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "toric/legendre.hpp"

namespace toric::oracle {

/// f*(p) = max_x <p,x> - f(x) by direct enumeration of every (x, p) pair.
inline std::vector<double> brute_conjugate(const GridNd& g, std::span<const double> values, const GridNd& dual) {
  std::vector<double> out(dual.size(), -kInf);
  if (g.dimension() == 1) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] != kInf) {
        xs.push_back(g.axis(0)[i]);
        ys.push_back(values[i]);
      }
    const std::size_t m = xs.size();
    for (std::size_t j = 0; j < dual.size(); ++j) {
      const double p = dual.axis(0)[j];
      double acc[8];
      std::fill(acc, acc + 8, -kInf);
      std::size_t i = 0;
      for (; i + 8 <= m; i += 8)
        for (int l = 0; l < 8; ++l) {
          const double v = p * xs[i + l] - ys[i + l];
          acc[l] = v > acc[l] ? v : acc[l];
        }
      double best = *std::max_element(acc, acc + 8);
      for (; i < m; ++i) best = std::max(best, p * xs[i] - ys[i]);
      out[j] = best;
    }
    return out;
  }
  std::vector<double> x(g.dimension()), p(dual.dimension());
  for (std::size_t j = 0; j < dual.size(); ++j) {
    dual.point(j, p);
    double best = -kInf;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (values[i] == kInf) continue;
      g.point(i, x);
      double s = 0;
      for (std::size_t k = 0; k < x.size(); ++k) s += p[k] * x[k];
      best = std::max(best, s - values[i]);
    }
    out[j] = best;
  }
  return out;
}

/// Lower convex envelope of finite points (x_i, y_i), x increasing, by gift
/// wrapping: from the current vertex take the point of least slope, the
/// farthest one on ties. Values at non-vertex nodes are interpolated.
inline std::vector<double> gift_wrap_envelope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  std::vector<double> out(n, kInf);
  std::size_t cur = 0;
  while (cur < n && y[cur] == kInf) ++cur;
  if (cur == n) return out;
  out[cur] = y[cur];
  while (true) {
    std::size_t best = n;
    double best_slope = kInf;
    for (std::size_t j = cur + 1; j < n; ++j) {
      if (y[j] == kInf) continue;
      const double s = (y[j] - y[cur]) / (x[j] - x[cur]);
      if (s <= best_slope) {
        best_slope = s;
        best = j;
      }
    }
    if (best == n) break;
    for (std::size_t i = cur + 1; i <= best; ++i) out[i] = y[cur] + best_slope * (x[i] - x[cur]);
    out[best] = y[best];
    cur = best;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (y[i] == kInf) out[i] = kInf;
  return out;
}

/// Convex envelope of finite data on a two-dimensional grid as the maximum
/// of all planes through three data points that stay below every datum.
///
/// The planes are enumerated per pair (A, B): planes containing A and B form
/// a one-parameter family z = z_A + <g0 + mu n, p - A>, every datum bounds mu
/// from one side, and the supporting planes through a third datum are the
/// ends of the feasible mu interval. Cubic in the node count.
inline std::vector<double> supporting_plane_envelope(const GridNd& g, std::span<const double> values) {
  if (g.dimension() != 2) throw DimensionError("supporting_plane_envelope: two-dimensional grid required");
  struct P {
    double x, y, z;
  };
  std::vector<P> pts;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (values[i] == kInf) continue;
    const auto q = g.point(i);
    pts.push_back({q[0], q[1], values[i]});
  }
  const std::size_t m = pts.size();
  double scale = 1;
  for (const auto& p : pts) scale = std::max(scale, std::abs(p.z));
  const double tol = 1e-12 * scale;

  std::vector<std::array<double, 3>> planes;  // z = a x + b y + c
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const P &A = pts[i], &B = pts[j];
      const double ex = B.x - A.x, ey = B.y - A.y, len2 = ex * ex + ey * ey;
      const double gx = (B.z - A.z) * ex / len2, gy = (B.z - A.z) * ey / len2;
      const double nx = -ey, ny = ex;
      double lo = -kInf, hi = kInf;
      bool feasible = true;
      for (std::size_t k = 0; k < m && feasible; ++k) {
        if (k == i || k == j) continue;
        const P& C = pts[k];
        const double d = nx * (C.x - A.x) + ny * (C.y - A.y);
        const double r = C.z - A.z - gx * (C.x - A.x) - gy * (C.y - A.y);
        if (std::abs(d) < 1e-12 * len2) {
          if (r < -tol) feasible = false;
        } else if (d > 0) {
          hi = std::min(hi, r / d);
        } else {
          lo = std::max(lo, r / d);
        }
      }
      if (!feasible || lo > hi + 1e-12) continue;
      for (double mu : {lo, hi}) {
        if (!std::isfinite(mu)) continue;
        const double a = gx + mu * nx, b = gy + mu * ny;
        planes.push_back({a, b, A.z - a * A.x - b * A.y});
      }
    }
  std::vector<double> out(g.size(), kInf);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (values[i] == kInf) continue;
    const auto q = g.point(i);
    double best = -kInf;
    for (const auto& pl : planes) best = std::max(best, pl[0] * q[0] + pl[1] * q[1] + pl[2]);
    out[i] = best;
  }
  return out;
}

/// Exact asymptotic slope of max_k <p_k, x> + c_k along b: min_k <p_k, b>.
inline double max_linear_slope(const std::vector<std::vector<double>>& pieces, std::span<const double> b) {
  double best = kInf;
  for (const auto& p : pieces) {
    double s = 0;
    for (std::size_t i = 0; i < b.size(); ++i) s += p[i] * b[i];
    best = std::min(best, s);
  }
  return best;
}

/// Exact verdict of slope_f(b) >= slope_g(b) for all b >= 0, for max-linear
/// f and g in at most three variables. The difference of the two slope
/// functions is piecewise linear and homogeneous, so its sign is decided on
/// the rays of the arrangement cut out by the hyperplanes <p_i - p_j, b> = 0
/// (pairs within each function) and b_k = 0.
inline bool max_linear_slope_verdict(const std::vector<std::vector<double>>& pf,
                                     const std::vector<std::vector<double>>& pg) {
  const std::size_t n = pf.front().size();
  if (n > 3) throw DimensionError("max_linear_slope_verdict: at most three variables");
  std::vector<std::vector<double>> normals;
  for (const auto* P : {&pf, &pg})
    for (std::size_t i = 0; i < P->size(); ++i)
      for (std::size_t j = i + 1; j < P->size(); ++j) {
        std::vector<double> v(n);
        for (std::size_t k = 0; k < n; ++k) v[k] = (*P)[i][k] - (*P)[j][k];
        normals.push_back(v);
      }
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> e(n, 0.0);
    e[k] = 1;
    normals.push_back(e);
  }
  std::vector<std::vector<double>> rays;
  if (n == 1) rays.push_back({1.0});
  else if (n == 2) {
    for (const auto& v : normals) rays.push_back({v[1], -v[0]});
  } else {
    for (std::size_t i = 0; i < normals.size(); ++i)
      for (std::size_t j = i + 1; j < normals.size(); ++j) {
        const auto &u = normals[i], &v = normals[j];
        rays.push_back({u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]});
      }
  }
  for (auto r : rays) {
    bool zero = std::all_of(r.begin(), r.end(), [](double v) { return v == 0; });
    if (zero) continue;
    for (int sign : {1, -1}) {
      std::vector<double> b(n);
      bool nonneg = true;
      for (std::size_t k = 0; k < n; ++k) {
        b[k] = sign * r[k];
        if (b[k] < 0) nonneg = false;
      }
      if (!nonneg) continue;
      if (max_linear_slope(pf, b) < max_linear_slope(pg, b) - 1e-12) return false;
    }
  }
  return true;
}

/// Exact Newton-body membership for max-linear f: lambda lies in
/// conv(pieces) + [0, inf)^n iff <lambda, b> >= min_k <p_k, b> for every
/// ray b of the arrangement above.
inline bool in_max_linear_body(const std::vector<std::vector<double>>& pieces, std::span<const double> lambda) {
  return max_linear_slope_verdict({std::vector<double>(lambda.begin(), lambda.end())}, pieces);
}

}  // namespace toric::oracle

#endif  // TORIC_ORACLES_HPP
