#ifndef TORIC_EXTENDED_VALUE_HPP
#define TORIC_EXTENDED_VALUE_HPP

#include <cmath>
#include <compare>
#include <limits>
#include <ostream>

#include "toric/errors.hpp"

namespace toric {

/// A real number or +INF. NaN and -INF are rejected at construction.
///
/// The representation is a plain double holding +infinity for INF, so arrays
/// of ExtendedValue have the layout of arrays of double.
class ExtendedValue {
 public:
  constexpr ExtendedValue() noexcept = default;

  explicit ExtendedValue(double v) : v_(v) {
    if (std::isnan(v)) throw ParameterError("ExtendedValue: NaN is not representable");
    if (v == -std::numeric_limits<double>::infinity())
      throw PoleConditionError("ExtendedValue: -inf is not representable");
  }

  static constexpr ExtendedValue infinity() noexcept {
    ExtendedValue e;
    e.v_ = std::numeric_limits<double>::infinity();
    return e;
  }

  constexpr bool is_infinite() const noexcept { return v_ == std::numeric_limits<double>::infinity(); }
  constexpr bool is_finite() const noexcept { return !is_infinite(); }

  /// +inf for INF.
  constexpr double raw() const noexcept { return v_; }

  double value() const {
    if (is_infinite()) throw ParameterError("ExtendedValue: value() on +INF");
    return v_;
  }

  friend ExtendedValue operator+(ExtendedValue a, ExtendedValue b) noexcept {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    ExtendedValue r;
    r.v_ = a.v_ + b.v_;
    return r;
  }
  friend ExtendedValue operator+(ExtendedValue a, double c) { return a + ExtendedValue(c); }
  friend ExtendedValue operator-(ExtendedValue a, double c) { return a + ExtendedValue(-c); }

  /// Scaling by a nonnegative real; 0 * INF is INF (effective-domain semantics).
  friend ExtendedValue operator*(double s, ExtendedValue a) {
    if (s < 0) throw ParameterError("ExtendedValue: negative scaling");
    if (a.is_infinite()) return infinity();
    return ExtendedValue(s * a.v_);
  }

  friend constexpr bool operator==(ExtendedValue a, ExtendedValue b) noexcept { return a.v_ == b.v_; }
  friend constexpr std::partial_ordering operator<=>(ExtendedValue a, ExtendedValue b) noexcept {
    return a.v_ <=> b.v_;
  }

  friend std::ostream& operator<<(std::ostream& os, ExtendedValue e) {
    if (e.is_infinite()) return os << "inf";
    return os << e.v_;
  }

 private:
  double v_ = 0.0;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace toric

#endif  // TORIC_EXTENDED_VALUE_HPP
