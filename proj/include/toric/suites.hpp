#ifndef TORIC_SUITES_HPP
#define TORIC_SUITES_HPP

// Seeded randomized property suites. Each returns case/failure counts and
// the worst deviation seen; the CLI `verify` command and the acceptance
// driver both run them.

#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "toric/asymptotic.hpp"
#include "toric/envelope.hpp"
#include "toric/geodesic.hpp"
#include "toric/legendre.hpp"
#include "toric/oracles.hpp"

namespace toric::suites {

struct SuiteResult {
  std::string suite;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double max_error = 0;
  double seconds = 0;
  std::vector<std::string> notes;

  bool passed() const { return failures == 0 && cases > 0; }
};

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// max_i (a_i x + b_i) with slopes in [0, 3] and offsets in [-1, 0].
inline std::vector<double> random_pl_convex(Rng& rng, const std::vector<double>& x, int pieces = 0) {
  if (pieces == 0) pieces = uniform_int(rng, 1, 8);
  std::vector<double> a(pieces), b(pieces), y(x.size(), -kInf);
  for (int k = 0; k < pieces; ++k) {
    a[k] = uniform(rng, 0, 3);
    b[k] = uniform(rng, -1, 0);
  }
  for (std::size_t i = 0; i < x.size(); ++i)
    for (int k = 0; k < pieces; ++k) y[i] = std::max(y[i], a[k] * x[i] + b[k]);
  return y;
}

/// Arbitrary (generally non-convex) data: a convex trend plus noise.
inline std::vector<double> random_rough(Rng& rng, const std::vector<double>& x) {
  auto y = random_pl_convex(rng, x);
  const double amp = uniform(rng, 0.05, 1.0);
  for (double& v : y) v += uniform(rng, -amp, amp);
  return y;
}

/// Minimum of 2-4 random affine functions on a grid (concave piecewise linear).
inline std::vector<double> random_min_affine(Rng& rng, const GridNd& g) {
  const int m = uniform_int(rng, 2, 4);
  std::vector<std::vector<double>> a(m, std::vector<double>(g.dimension()));
  std::vector<double> c(m);
  for (int k = 0; k < m; ++k) {
    for (double& v : a[k]) v = uniform(rng, -1, 2);
    c[k] = uniform(rng, -1, 1);
  }
  std::vector<double> y(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto p = g.point(i);
    double best = kInf;
    for (int k = 0; k < m; ++k) {
      double s = c[k];
      for (std::size_t j = 0; j < p.size(); ++j) s += a[k][j] * p[j];
      best = std::min(best, s);
    }
    y[i] = best;
  }
  return y;
}

namespace detail {

inline double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;  // includes matching infinities
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d;
}

}  // namespace detail

struct TransformSuiteResult : SuiteResult {
  double fast_seconds = 0;
  double brute_seconds = 0;
  double speedup() const { return fast_seconds > 0 ? brute_seconds / fast_seconds : 0; }
};

/// Fast conjugate against the O(N M) enumeration on random convex
/// piecewise-linear inputs (one variable, default dual grid).
inline TransformSuiteResult transform_suite(std::uint64_t seed, std::size_t cases = 200, std::size_t N = 4096,
                                            double tol = 1e-9) {
  const auto t0 = std::chrono::steady_clock::now();
  TransformSuiteResult r;
  r.suite = "transform";
  Rng rng(seed);
  const GridNd grid = build_grid(DomainSpec{1, 4.0, 1e-3, DomainShape::box}, N);
  for (std::size_t c = 0; c < cases; ++c) {
    const auto y = random_pl_convex(rng, grid.axis(0));
    const auto f = SampledFunction::from_raw(grid, y);
    const auto dual = DualGrid::fitted(f);
    auto t1 = std::chrono::steady_clock::now();
    const auto fast = conjugate(f, dual).raw();
    r.fast_seconds += detail::elapsed(t1);
    t1 = std::chrono::steady_clock::now();
    const auto brute = oracle::brute_conjugate(grid, y, dual.nodes());
    r.brute_seconds += detail::elapsed(t1);
    const double d = detail::max_abs_diff(fast, brute);
    r.max_error = std::max(r.max_error, d);
    ++r.cases;
    if (!(d <= tol)) ++r.failures;
  }
  r.seconds = detail::elapsed(t0);
  return r;
}

/// Conjugate identities on random data: min/max exchange and shift rule
/// (to 1e-12), antitonicity, f*** = f*, Fenchel-Young and monotone
/// convergence. Case 0 is f = g = 0. Odd cases are two-dimensional.
inline SuiteResult identities_suite(std::uint64_t seed, std::size_t cases = 200) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteResult r;
  r.suite = "identities";
  Rng rng(seed);
  const GridNd g1 = build_grid(DomainSpec{1, 4.0, 1e-3, DomainShape::box}, 257);
  const GridNd g2 = build_grid(DomainSpec{2, 4.0, 1e-3, DomainShape::box}, 17);
  auto fail = [&](std::size_t c, const std::string& what) {
    if (r.notes.size() < 20) r.notes.push_back("case " + std::to_string(c) + ": " + what);
  };
  for (std::size_t c = 0; c < cases; ++c) {
    const GridNd& grid = c % 2 ? g2 : g1;
    std::vector<double> yf(grid.size(), 0.0), yg(grid.size(), 0.0);
    if (c > 0) {
      if (grid.dimension() == 1) {
        yf = random_rough(rng, grid.axis(0));
        yg = random_rough(rng, grid.axis(0));
      } else {
        yf = random_min_affine(rng, grid);
        yg = random_min_affine(rng, grid);
        for (double& v : yf) v += uniform(rng, -0.2, 0.2);
      }
    }
    const auto f = SampledFunction::from_raw(grid, yf);
    const auto g = SampledFunction::from_raw(grid, yg);
    const SampledFunction* both[] = {&f, &g};
    const DualGrid dual = envelope_dual(both);
    const auto fs = conjugate(f, dual), gs = conjugate(g, dual);
    bool ok = true;

    // (min(f,g))* = max(f*, g*)
    const double d5 = detail::max_abs_diff(conjugate(pointwise_min(f, g), dual).raw(), pointwise_max(fs, gs).raw());
    if (!(d5 <= 1e-12)) ok = false, fail(c, "min/max exchange " + std::to_string(d5));
    r.max_error = std::max(r.max_error, d5);

    // (f + c)* = f* - c
    const double shift = uniform(rng, -3, 3);
    auto fsc = fs.raw();
    for (double& v : fsc) v -= shift;
    const double d6 = detail::max_abs_diff(conjugate(shifted(f, shift), dual).raw(), fsc);
    if (!(d6 <= 1e-12)) ok = false, fail(c, "shift rule " + std::to_string(d6));
    r.max_error = std::max(r.max_error, d6);

    // f <= h  =>  f* >= h*
    std::vector<double> yh(yf);
    std::vector<double> bump(grid.size());
    for (std::size_t i = 0; i < yh.size(); ++i) {
      bump[i] = uniform(rng, 0, 1);
      yh[i] += bump[i];
    }
    const auto hs = conjugate(SampledFunction::from_raw(grid, yh), dual).raw();
    const auto fr = fs.raw();
    for (std::size_t i = 0; i < fr.size(); ++i)
      if (fr[i] < hs[i]) {
        ok = false;
        fail(c, "antitonicity");
        break;
      }

    // f*** = f*
    const auto fss = biconjugate(f, dual);
    const double d4 = detail::max_abs_diff(conjugate(fss, dual).raw(), fr);
    if (!(d4 <= 1e-9)) ok = false, fail(c, "triple conjugate " + std::to_string(d4));

    // Fenchel-Young over every node pair
    std::vector<double> x(grid.dimension()), p(dual.dimension());
    for (std::size_t i = 0; i < grid.size() && ok; ++i) {
      grid.point(i, x);
      for (std::size_t j = 0; j < dual.size(); ++j) {
        dual.nodes().point(j, p);
        double s = 0;
        for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * p[k];
        if (yf[i] + fr[j] < s - 1e-9) {
          ok = false;
          fail(c, "Fenchel-Young");
          break;
        }
      }
    }

    // f_j = f + 2^-j bump decreases to f; f_j* increases to f*
    std::vector<double> prev;
    for (int j = 0; j <= 12 && ok; ++j) {
      std::vector<double> yj(yf);
      for (std::size_t i = 0; i < yj.size(); ++i) yj[i] += std::ldexp(bump[i], -j);
      const auto cj = conjugate(SampledFunction::from_raw(grid, yj), dual).raw();
      for (std::size_t i = 0; i < cj.size(); ++i) {
        if (!prev.empty() && cj[i] < prev[i] - 1e-12) ok = false;
        if (cj[i] > fr[i] + 1e-12 || cj[i] < fr[i] - std::ldexp(1.0, -j) - 1e-12) ok = false;
      }
      if (!ok) fail(c, "monotone convergence");
      prev = cj;
    }

    ++r.cases;
    if (!ok) ++r.failures;
  }
  r.seconds = detail::elapsed(t0);
  return r;
}

struct EnvelopeSuiteResult : SuiteResult {
  double max_error_1d = 0;
  double max_error_2d = 0;
};

/// Biconjugate against the gift-wrapping hull (one variable, rough data)
/// and against the supporting-plane envelope (17x17, minima of affine maps).
inline EnvelopeSuiteResult envelope_suite(std::uint64_t seed, std::size_t cases_1d = 100, std::size_t cases_2d = 20,
                                          std::size_t N = 1024) {
  const auto t0 = std::chrono::steady_clock::now();
  EnvelopeSuiteResult r;
  r.suite = "envelope";
  Rng rng(seed);
  const GridNd g1 = build_grid(DomainSpec{1, 4.0, 1e-3, DomainShape::box}, N);
  for (std::size_t c = 0; c < cases_1d; ++c) {
    const auto y = random_rough(rng, g1.axis(0));
    const auto ref = oracle::gift_wrap_envelope(g1.axis(0), y);
    const double d = detail::max_abs_diff(biconjugate(SampledFunction::from_raw(g1, y)).raw(), ref);
    r.max_error_1d = std::max(r.max_error_1d, d);
    ++r.cases;
    if (!(d <= 1e-9)) ++r.failures;
  }
  const GridNd g2 = build_grid(DomainSpec{2, 4.0, 1e-3, DomainShape::box}, 17);
  for (std::size_t c = 0; c < cases_2d; ++c) {
    const auto y = random_min_affine(rng, g2);
    const auto ref = oracle::supporting_plane_envelope(g2, y);
    const double d = detail::max_abs_diff(biconjugate(SampledFunction::from_raw(g2, y)).raw(), ref);
    r.max_error_2d = std::max(r.max_error_2d, d);
    ++r.cases;
    if (!(d <= 1e-6)) ++r.failures;
  }
  r.max_error = std::max(r.max_error_1d, r.max_error_2d);
  r.seconds = detail::elapsed(t0);
  return r;
}

/// Random max-linear f (1-3 pieces, integer slopes in {0,1,2}, offsets in [-1,0]).
inline FunctionSpec random_max_linear(Rng& rng, std::size_t n, std::vector<std::vector<double>>* pieces_out = nullptr) {
  const int m = uniform_int(rng, 1, 3);
  std::vector<std::vector<double>> pieces;
  std::vector<double> offsets;
  for (int k = 0; k < m; ++k) {
    std::vector<double> p(n);
    for (double& v : p) v = uniform_int(rng, 0, 2);
    pieces.push_back(p);
    offsets.push_back(uniform(rng, -1, 0));
  }
  if (pieces_out) *pieces_out = pieces;
  return FunctionSpec::max_linear(std::move(pieces), std::move(offsets));
}

struct EquivalenceResult : SuiteResult {
  std::size_t verdict_true = 0;
  std::size_t oracle_mismatches = 0;  // both paths agree but differ from the exact verdict
};

/// slope_condition against newton_inclusion on random max-linear pairs.
inline EquivalenceResult equivalence_suite(std::uint64_t seed, std::size_t n, std::size_t cases = 100,
                                           std::int64_t bmax = 5, double dual_step = 0.125) {
  const auto t0 = std::chrono::steady_clock::now();
  EquivalenceResult r;
  r.suite = "equivalence-n" + std::to_string(n);
  Rng rng(seed + 7919 * n);
  const auto curves = default_curves(n, bmax);
  const auto count = std::size_t(std::llround(3.0 / dual_step)) + 1;
  const auto dual = DualGrid::uniform(n, -0.5, 2.5, count);
  for (std::size_t c = 0; c < cases; ++c) {
    std::vector<std::vector<double>> pf, pg;
    const auto f = random_max_linear(rng, n, &pf);
    const auto g = random_max_linear(rng, n, &pg);
    const bool vs = slope_condition(f, g, curves).holds;
    // polyhedral bodies: a shallow truncation already resolves them
    NewtonOptions shallow;
    shallow.depth = 64;
    const bool vn = newton_inclusion(f, g, dual, shallow).included;
    const bool exact = oracle::max_linear_slope_verdict(pf, pg);
    ++r.cases;
    if (vs) ++r.verdict_true;
    if (vs != vn) {
      ++r.failures;
      if (r.notes.size() < 20) r.notes.push_back("case " + std::to_string(c) + ": slopes and Newton bodies disagree");
    } else if (vs != exact) {
      ++r.oracle_mismatches;
    }
  }
  r.seconds = detail::elapsed(t0);
  return r;
}

struct GeodesicSuiteResult : SuiteResult {
  double worst_ratio = 0;          // sup|fast - oracle| / (2 Lip cell)
  double linear_slice_error = 0;   // f = 0, g = x: sup |u_t - x| over x >= -tL, in cells
  std::vector<double> linear_slopes;
};

/// Fast geodesic slices against the (x,t) envelope oracle, plus the
/// f = 0, g = x persistence checks.
inline GeodesicSuiteResult geodesic_suite(std::uint64_t seed, std::size_t cases = 50, std::size_t N = 257,
                                          std::size_t layers = 33) {
  const auto t0 = std::chrono::steady_clock::now();
  GeodesicSuiteResult r;
  r.suite = "geodesic";
  Rng rng(seed);
  const DomainSpec dom{1, 4.0, 1e-3, DomainShape::box};
  const GridNd grid = build_grid(dom, N);
  const auto& x = grid.axis(0);
  const double cell = grid.max_cell_diameter();
  for (std::size_t c = 0; c < cases; ++c) {
    const auto yf = random_pl_convex(rng, x, uniform_int(rng, 1, 4));
    const auto yg = random_pl_convex(rng, x, uniform_int(rng, 1, 4));
    const auto f = SampledFunction::from_raw(grid, yf);
    const auto g = SampledFunction::from_raw(grid, yg);
    double lip = 0;
    for (const auto* y : {&yf, &yg})
      for (std::size_t i = 1; i < y->size(); ++i) lip = std::max(lip, std::abs((*y)[i] - (*y)[i - 1]) / (x[i] - x[i - 1]));
    const double tol = 2 * std::max(lip, 1.0) * cell;
    const auto slices = geodesic_oracle(f, g, layers);
    const auto dual = ::toric::detail::geodesic_dual(f, g, 0);
    double worst = 0;
    for (const auto& s : slices)
      worst = std::max(worst, detail::max_abs_diff(geodesic_at(f, g, s.t, dual).values.raw(), s.values.raw()));
    r.max_error = std::max(r.max_error, worst);
    r.worst_ratio = std::max(r.worst_ratio, worst / tol);
    ++r.cases;
    if (!(worst <= tol)) ++r.failures;
  }

  // f = 0, g = x. The sampled endpoint ends at -L, which floors every slice
  // at -tL; the identity u_t = x is checked where x >= -tL.
  const auto f0 = sample(FunctionSpec::zero(1), grid);
  const auto g1 = sample(FunctionSpec::linear({1.0}), grid);
  const auto slices = geodesic_oracle(f0, g1, layers);
  bool ok = true;
  for (const auto& s : slices)
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] >= -s.t * dom.depth - 1e-12)
        r.linear_slice_error = std::max(r.linear_slice_error, std::abs(s.values[i].raw() - x[i]) / cell);
  if (!(r.linear_slice_error <= 1)) ok = false;
  for (double t : {0.25, 0.5, 0.75}) {
    const auto s = geodesic_at(f0, g1, t);
    std::vector<double> axis, vals;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] >= -t * dom.depth - 1e-12) {
        axis.push_back(x[i]);
        vals.push_back(s.values[i].raw());
      }
    const auto spec = FunctionSpec::samples(SampledFunction::from_raw(GridNd({axis}), vals));
    const double nu = directional_slope(spec, CurveSpec::along({1})).estimate;
    r.linear_slopes.push_back(nu);
    if (!(std::abs(nu - 1) <= kSlopeTolerance)) ok = false;
  }
  ++r.cases;
  if (!ok) {
    ++r.failures;
    r.notes.push_back("f = 0, g = x: slices or slopes deviate from x");
  }
  r.seconds = detail::elapsed(t0);
  return r;
}

}  // namespace toric::suites

#endif  // TORIC_SUITES_HPP
