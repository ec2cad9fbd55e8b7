#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "snowdrift/game.hpp"

namespace snowdrift {

/// u(x, y) = x^T A y.
template <class Scalar>
Scalar utility(const Vec4<Scalar>& x, const Vec4<Scalar>& y, const Mat4<Scalar>& a) {
  return x.dot(a * y);
}

/// Replicator field: x_i' = [(Ax)_i - x^T A x] x_i.
template <class Scalar>
Vec4<Scalar> replicator_rhs(const Vec4<Scalar>& x, const Mat4<Scalar>& a) {
  const Vec4<Scalar> fitness = a * x;
  const Scalar mean = x.dot(fitness);
  Vec4<Scalar> out;
  for (int i = 0; i < 4; ++i) out(i) = (fitness(i) - mean) * x(i);
  return out;
}

template <class Scalar>
Scalar max_norm(const Vec4<Scalar>& v) {
  Scalar best = abs_value(v(0));
  for (int i = 1; i < 4; ++i) {
    Scalar a = abs_value(v(i));
    if (a > best) best = a;
  }
  return best;
}

struct IntegratorConfig {
  double dt = 0.01;
  double t_max = 1e4;
  double eps_conv = 1e-10;
  double eps_rate = 1e-9;  // growth-rate slack, relative to the largest payoff entry
  bool renormalize = true;
};

enum class TerminalStatus { Converged, MaxTime, Failed };
const char* to_string(TerminalStatus s);

/// RHS max-norm sampled at log-spaced times over the last decade [t_max/10, t_max].
struct NormCheckpoint {
  double t;
  double rhs_norm;
};

struct IntegrationSummary {
  Vec4d terminal = Vec4d::Zero();
  double t = 0.0;
  long steps = 0;
  TerminalStatus status = TerminalStatus::MaxTime;
  double rhs_norm = 0.0;
  double min_before_clip = 0.0;    // most negative coordinate seen before clipping
  double max_sum_drift = 0.0;      // largest |sum - 1| seen before rescaling
  std::vector<NormCheckpoint> tail_norms;
  std::string failure;
};

/// Called with (t, x) at t = 0 and after every accepted step.
using StepObserver = std::function<void(double, const Vec4d&)>;

/// Fixed-step RK4 on the simplex. Coordinates that are exactly zero in `x0`
/// stay pinned at zero; round-off is clipped and rescaled when enabled.
/// Converged means the RHS max-norm is below eps_conv and no strategy still
/// present grows faster than the population mean.
IntegrationSummary integrate(const Vec4d& x0, const Mat4d& a, const IntegratorConfig& cfg,
                             const StepObserver& observer = {});

struct Trajectory {
  std::vector<double> t;
  std::vector<Vec4d> x;
  IntegrationSummary summary;
};

/// Records every `stride`-th step plus the terminal state.
Trajectory integrate_trajectory(const Vec4d& x0, const Mat4d& a, const IntegratorConfig& cfg,
                                long stride = 1);

/// Thresholds for x4/x3 (b1) and x1/x2 (b2).
struct RatioConstants {
  Rational b1;
  Rational b2;
};

RatioConstants ratio_constants(const Mat4q& reduced);

enum class Ratio { X1OverX2, X4OverX3 };

/// Time derivative of x1/x2 or x4/x3 under the reduced matrix.
template <class Scalar>
Scalar ratio_derivative(const Vec4<Scalar>& x, const Mat4<Scalar>& ar, Ratio which) {
  if (which == Ratio::X1OverX2) {
    if (x(1) == Scalar(0)) throw std::invalid_argument("ratio x1/x2 undefined at x2 = 0");
    const Scalar rate = (ar(0, 2) - ar(1, 2)) * x(2) + (ar(0, 3) - ar(1, 3)) * x(3);
    return rate * x(0) / x(1);
  }
  if (x(2) == Scalar(0)) throw std::invalid_argument("ratio x4/x3 undefined at x3 = 0");
  const Scalar rate = (ar(3, 0) - ar(2, 0)) * x(0) + (ar(3, 1) - ar(2, 1)) * x(1);
  return rate * x(3) / x(2);
}

enum class Zone { D14, D23, Y14, Y23, P11, P12, P21, P22, LInt, Boundary };
const char* to_string(Zone z);

/// Zone of `x` relative to the planes x1 = b2 x2 and x4 = b1 x3.
template <class Scalar>
Zone zone_of(const Vec4<Scalar>& x, const RatioConstants& b) {
  for (int i = 0; i < 4; ++i) {
    if (!(x(i) > Scalar(0))) return Zone::Boundary;
  }
  const Scalar b1 = scalar_from<Scalar>(b.b1);
  const Scalar b2 = scalar_from<Scalar>(b.b2);
  const Scalar r12 = x(0) / x(1);
  const Scalar r43 = x(3) / x(2);
  const Scalar tol = comparison_tolerance<Scalar>();
  auto cmp = [&](const Scalar& r, const Scalar& t) {
    const Scalar scale = abs_value(t) > Scalar(1) ? abs_value(t) : Scalar(1);
    if (abs_value(Scalar(r - t)) <= tol * scale) return 0;
    return r > t ? 1 : -1;
  };
  const int c12 = cmp(r12, b2);
  const int c43 = cmp(r43, b1);
  if (c12 == 0 && c43 == 0) return Zone::LInt;
  if (c43 == 0) return c12 > 0 ? Zone::P11 : Zone::P12;
  if (c12 == 0) return c43 > 0 ? Zone::P21 : Zone::P22;
  if (c12 > 0) return c43 > 0 ? Zone::D14 : Zone::Y14;
  return c43 > 0 ? Zone::Y23 : Zone::D23;
}

enum class EdgeKind { Neutral, FirstDominates, SecondDominates, StableInterior, UnstableInterior };
const char* to_string(EdgeKind k);

/// Restriction of the dynamics to the edge between strategies i and j.
struct EdgePortrait {
  Strategy i;
  Strategy j;
  Eigen::Matrix<Rational, 2, 2> game;   // [[a_ii, a_ij], [a_ji, a_jj]]
  EdgeKind kind;
  std::optional<Rational> share;        // share of i at the interior fixed point
  std::optional<Vec4q> fixed_point;
};

EdgePortrait edge_dynamics(const Mat4q& a, Strategy i, Strategy j);

/// Coefficients of x2' = k (f x2 - g)(r x2 - s) x2 on L_int.
struct LineRestriction {
  Rational k;
  Rational f;
  Rational g;
  Rational r;
  Rational s;
};

/// Throws std::domain_error unless the interior equilibrium exists (b1 > 0).
LineRestriction line_restriction(const Mat4q& reduced);

template <class Scalar>
Scalar line_restricted_rhs(const Scalar& x2, const LineRestriction& lr) {
  const Scalar k = scalar_from<Scalar>(lr.k);
  const Scalar f = scalar_from<Scalar>(lr.f);
  const Scalar g = scalar_from<Scalar>(lr.g);
  const Scalar r = scalar_from<Scalar>(lr.r);
  const Scalar s = scalar_from<Scalar>(lr.s);
  return k * (f * x2 - g) * (r * x2 - s) * x2;
}

/// Point of L_int with the given x2.
Vec4q line_point(const Rational& x2, const RatioConstants& b);

}  // namespace snowdrift
