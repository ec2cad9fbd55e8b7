#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <type_traits>

#include <gmpxx.h>
#include <Eigen/Core>

namespace snowdrift {

/// Exact rational scalar used for payoffs, matrix entries and regime thresholds.
using Rational = mpq_class;

/// Parses a decimal literal ("2.9", "-3", "1.25e-2") or a fraction ("7/3").
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers are written with denominator 1.
std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Converts an exact value into the requested scalar type.
template <class Scalar>
Scalar scalar_from(const Rational& q) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return q;
  } else {
    return static_cast<Scalar>(q.get_d());
  }
}

template <class Scalar>
double scalar_to_double(const Scalar& v) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return v.get_d();
  } else {
    return static_cast<double>(v);
  }
}

/// Absolute tolerance for sign and equality decisions: zero in exact mode.
template <class Scalar>
Scalar comparison_tolerance() {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return Rational(0);
  } else {
    return Scalar(1e-12);
  }
}

template <class Scalar>
Scalar abs_value(const Scalar& v) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return abs(v);
  } else {
    return std::abs(v);
  }
}

}  // namespace snowdrift

namespace Eigen {

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  using Real = mpq_class;
  using NonInteger = mpq_class;
  using Nested = mpq_class;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

namespace internal {
template <>
struct cast_impl<mpq_class, double> {
  static inline double run(const mpq_class& x) { return x.get_d(); }
};
}  // namespace internal

}  // namespace Eigen
