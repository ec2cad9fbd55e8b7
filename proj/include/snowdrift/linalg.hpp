#pragma once

#include <Eigen/Core>

#include "snowdrift/rational.hpp"

namespace snowdrift {

template <class Scalar>
using Vec4 = Eigen::Matrix<Scalar, 4, 1>;
template <class Scalar>
using Mat4 = Eigen::Matrix<Scalar, 4, 4>;

using Vec4d = Vec4<double>;
using Mat4d = Mat4<double>;
using Vec4q = Vec4<Rational>;
using Mat4q = Mat4<Rational>;

/// Strategy order is fixed everywhere: ALLC, TFT, STFT, ALLD.
enum class Strategy : int { AllC = 0, Tft = 1, Stft = 2, AllD = 3 };

inline constexpr int index(Strategy s) { return static_cast<int>(s); }
const char* strategy_name(Strategy s);

template <class Derived>
auto to_double(const Eigen::MatrixBase<Derived>& m) {
  return m.template cast<double>().eval();
}

/// Unit vector of a pure population.
template <class Scalar = Rational>
Vec4<Scalar> vertex(Strategy s) {
  Vec4<Scalar> v = Vec4<Scalar>::Zero();
  v(index(s)) = Scalar(1);
  return v;
}

/// Membership in the probability simplex; exact in rational mode, `tol` on the
/// coordinate sum in floating point.
template <class Scalar>
bool in_simplex(const Vec4<Scalar>& x, double tol = 1e-12) {
  for (int i = 0; i < 4; ++i) {
    if (x(i) < Scalar(0)) return false;
  }
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return x.sum() == Rational(1);
  } else {
    return std::abs(x.sum() - 1.0) <= tol;
  }
}

/// Throws std::invalid_argument when `x` is not a simplex point.
void require_simplex(const Vec4d& x, const char* what);
void require_simplex(const Vec4q& x, const char* what);

}  // namespace snowdrift
