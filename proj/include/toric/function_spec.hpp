#ifndef TORIC_FUNCTION_SPEC_HPP
#define TORIC_FUNCTION_SPEC_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "toric/errors.hpp"
#include "toric/sampled.hpp"

namespace toric {

class FunctionSpec;

/// f(x) = <lambda, x>
struct LinearSpec {
  std::vector<double> lambda;
};

/// f(x) = -(-max_i x_i)^alpha; in one variable this is u(z) = -(-log|z|)^alpha.
struct RadialPowerSpec {
  double alpha = 1.0;
};

/// f(x) = max_k (<pieces[k], x> + offsets[k])
struct MaxLinearSpec {
  std::vector<std::vector<double>> pieces;
  std::vector<double> offsets;
};

struct SumSpec {
  std::vector<FunctionSpec> terms;
};

/// Tabulated values, interpolated multilinearly between nodes.
struct SamplesSpec {
  std::shared_ptr<const SampledFunction> table;
};

/// Symbolic description of a toric model function in logarithmic coordinates.
class FunctionSpec {
 public:
  using Variant = std::variant<LinearSpec, RadialPowerSpec, MaxLinearSpec, SumSpec, SamplesSpec>;

  FunctionSpec() : v_(LinearSpec{{0.0}}) {}
  FunctionSpec(Variant v) : v_(std::move(v)) { check(); }

  static FunctionSpec zero(std::size_t n = 1) { return FunctionSpec(LinearSpec{std::vector<double>(n, 0.0)}); }
  static FunctionSpec linear(std::vector<double> lambda) { return FunctionSpec(LinearSpec{std::move(lambda)}); }
  static FunctionSpec radial(double alpha) { return FunctionSpec(RadialPowerSpec{alpha}); }
  static FunctionSpec max_linear(std::vector<std::vector<double>> pieces, std::vector<double> offsets = {}) {
    if (offsets.empty()) offsets.assign(pieces.size(), 0.0);
    return FunctionSpec(MaxLinearSpec{std::move(pieces), std::move(offsets)});
  }
  static FunctionSpec sum(std::vector<FunctionSpec> terms) { return FunctionSpec(SumSpec{std::move(terms)}); }
  static FunctionSpec samples(SampledFunction f) {
    return FunctionSpec(SamplesSpec{std::make_shared<const SampledFunction>(std::move(f))});
  }

  const Variant& variant() const noexcept { return v_; }

  std::string kind() const {
    return std::visit(
        [](const auto& s) -> std::string {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, LinearSpec>) return "linear";
          else if constexpr (std::is_same_v<T, RadialPowerSpec>) return "radial_power";
          else if constexpr (std::is_same_v<T, MaxLinearSpec>) return "max_linear";
          else if constexpr (std::is_same_v<T, SumSpec>) return "sum";
          else return "samples";
        },
        v_);
  }

  /// Number of variables the spec is tied to; nullopt if it adapts to any
  /// dimension (radial power).
  std::optional<std::size_t> dimension() const {
    return std::visit(
        [](const auto& s) -> std::optional<std::size_t> {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, LinearSpec>) return s.lambda.size();
          else if constexpr (std::is_same_v<T, RadialPowerSpec>) return std::nullopt;
          else if constexpr (std::is_same_v<T, MaxLinearSpec>) return s.pieces.front().size();
          else if constexpr (std::is_same_v<T, SumSpec>) {
            std::optional<std::size_t> d;
            for (const auto& t : s.terms)
              if (auto td = t.dimension()) d = td;
            return d;
          } else
            return s.table->grid().dimension();
        },
        v_);
  }

  bool is_tabulated() const { return std::holds_alternative<SamplesSpec>(v_); }

  /// Evaluates at log-coordinates x. Coordinates may be -inf (a vanishing
  /// modulus); the result is then -inf when the function has a pole there.
  double evaluate_log(std::span<const double> x) const {
    return std::visit([&](const auto& s) { return eval(s, x); }, v_);
  }

 private:
  void check() const {
    std::visit(
        [](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, LinearSpec>) {
            if (s.lambda.empty()) throw ParameterError("linear spec: empty lambda");
            for (double l : s.lambda)
              if (!std::isfinite(l)) throw ParameterError("linear spec: non-finite coefficient");
          } else if constexpr (std::is_same_v<T, RadialPowerSpec>) {
            if (!(s.alpha > 0 && s.alpha <= 1)) throw ParameterError("radial_power: alpha must lie in (0,1]");
          } else if constexpr (std::is_same_v<T, MaxLinearSpec>) {
            if (s.pieces.empty()) throw ParameterError("max_linear spec: no pieces");
            if (s.offsets.size() != s.pieces.size()) throw ParameterError("max_linear spec: offsets/pieces mismatch");
            for (const auto& p : s.pieces)
              if (p.size() != s.pieces.front().size() || p.empty())
                throw ParameterError("max_linear spec: pieces of different dimension");
          } else if constexpr (std::is_same_v<T, SumSpec>) {
            if (s.terms.empty()) throw ParameterError("sum spec: no terms");
            std::optional<std::size_t> d;
            for (const auto& t : s.terms) {
              auto td = t.dimension();
              if (td && d && *td != *d) throw ParameterError("sum spec: terms of different dimension");
              if (td) d = td;
            }
          } else {
            if (!s.table) throw ParameterError("samples spec: missing table");
          }
        },
        v_);
  }

  static double dot_skip_zero(std::span<const double> a, std::span<const double> x) {
    if (a.size() != x.size()) throw DimensionError("spec dimension does not match point dimension");
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != 0) s += a[i] * x[i];
    return s;
  }

  static double eval(const LinearSpec& s, std::span<const double> x) { return dot_skip_zero(s.lambda, x); }

  static double eval(const RadialPowerSpec& s, std::span<const double> x) {
    const double m = *std::max_element(x.begin(), x.end());
    if (m > 0) throw ParameterError("radial_power: point outside the unit polydisc");
    if (m == -std::numeric_limits<double>::infinity()) return m;
    if (s.alpha == 1.0) return m;
    return -std::pow(-m, s.alpha);
  }

  static double eval(const MaxLinearSpec& s, std::span<const double> x) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < s.pieces.size(); ++k) best = std::max(best, dot_skip_zero(s.pieces[k], x) + s.offsets[k]);
    return best;
  }

  static double eval(const SumSpec& s, std::span<const double> x) {
    double acc = 0;
    for (const auto& t : s.terms) acc += t.evaluate_log(x);
    return acc;
  }

  static double eval(const SamplesSpec& s, std::span<const double> x) {
    if (x.size() != s.table->grid().dimension()) throw DimensionError("samples spec: dimension mismatch");
    for (double xi : x)
      if (!std::isfinite(xi)) throw ParameterError("samples spec: cannot evaluate at a vanishing modulus");
    return s.table->interpolate(x);
  }

  Variant v_;
};

/// Value of u(z) = f(log|z_1|, ..., log|z_n|): finite, +INF, or the pole
/// marker (u = -inf, reported but never stored).
class ToricValue {
 public:
  static ToricValue pole() {
    ToricValue t;
    t.pole_ = true;
    return t;
  }
  explicit ToricValue(ExtendedValue v) : value_(v) {}

  bool is_pole() const noexcept { return pole_; }
  ExtendedValue value() const {
    if (pole_) throw PoleConditionError("ToricValue: value requested at a pole");
    return value_;
  }

 private:
  ToricValue() = default;
  bool pole_ = false;
  ExtendedValue value_;
};

/// u(z) evaluated from the moduli |z_i| in [0,1).
inline ToricValue evaluate_toric(const FunctionSpec& spec, std::span<const double> moduli) {
  std::vector<double> x(moduli.size());
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    if (!(moduli[i] >= 0 && moduli[i] < 1)) throw ParameterError("evaluate_toric: moduli must lie in [0,1)");
    x[i] = std::log(moduli[i]);
  }
  const double v = spec.evaluate_log(x);
  if (v == -std::numeric_limits<double>::infinity()) return ToricValue::pole();
  if (std::isnan(v)) throw PoleConditionError("evaluate_toric: undefined value");
  return ToricValue(v == kInf ? ExtendedValue::infinity() : ExtendedValue(v));
}

/// Samples a spec at every node. Nodes outside the log ball carry +INF when
/// the grid has the logball shape.
inline SampledFunction sample(const FunctionSpec& spec, const GridNd& grid) {
  if (auto d = spec.dimension(); d && *d != grid.dimension())
    throw DimensionError("sample: spec has dimension " + std::to_string(*d) + ", grid has " +
                         std::to_string(grid.dimension()));
  std::vector<ExtendedValue> vals(grid.size());
  std::vector<double> x(grid.dimension());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.point(i, x);
    if (grid.shape() == DomainShape::logball && !in_log_ball(x)) {
      vals[i] = ExtendedValue::infinity();
      continue;
    }
    const double v = spec.evaluate_log(x);
    if (std::isnan(v) || v == -std::numeric_limits<double>::infinity())
      throw PoleConditionError("sample: spec is -inf or undefined at a non-pole node");
    vals[i] = v == kInf ? ExtendedValue::infinity() : ExtendedValue(v);
  }
  return SampledFunction(grid, std::move(vals));
}

struct PoleReport {
  bool ok = true;
  std::vector<std::size_t> offending_nodes;
};

/// Discrete pole condition: every in-domain node reached by a ray that
/// freezes one coordinate and decreases the others together is finite.
///
/// Every node starts such a ray, so this amounts to finiteness over the
/// effective domain; the walk records each offending node once.
inline PoleReport validate_pole_condition(const SampledFunction& f) {
  const GridNd& g = f.grid();
  const std::size_t n = g.dimension();
  std::vector<unsigned char> seen(g.size(), 0);
  std::vector<std::size_t> idx(n), cur(n);
  PoleReport rep;
  for (std::size_t start = 0; start < g.size(); ++start) {
    if (!g.in_domain(start)) continue;
    g.unravel(start, idx);
    for (std::size_t frozen = 0; frozen < n; ++frozen) {
      // Walk only from ray origins: nodes whose up-shifted neighbour along
      // the ray leaves the grid or the domain.
      if (n > 1) {
        cur = idx;
        bool origin = false;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == frozen) continue;
          if (cur[k] + 1 >= g.extent(k)) origin = true;
          else ++cur[k];
        }
        if (!origin && g.in_domain(g.ravel(cur))) continue;
      }
      cur = idx;
      while (true) {
        const std::size_t flat = g.ravel(cur);
        if (f[flat].is_infinite() && !seen[flat]) {
          seen[flat] = 1;
          rep.offending_nodes.push_back(flat);
        }
        bool can = n > 1;
        for (std::size_t k = 0; k < n; ++k)
          if (k != frozen && cur[k] == 0) can = false;
        if (!can) break;
        for (std::size_t k = 0; k < n; ++k)
          if (k != frozen) --cur[k];
      }
    }
  }
  std::sort(rep.offending_nodes.begin(), rep.offending_nodes.end());
  rep.ok = rep.offending_nodes.empty();
  return rep;
}

}  // namespace toric

#endif  // TORIC_FUNCTION_SPEC_HPP
