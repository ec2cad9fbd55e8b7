#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Dense>

#include "snowdrift/equilibria.hpp"

namespace snowdrift {

struct NashReport {
  bool is_nash = false;
  Strategy best_response = Strategy::AllC;
  double gap = 0.0;  // max_i (Ax)_i - x^T A x
};

/// Nash test against the four vertices; exact for rational input, 1e-12 slack otherwise.
template <class Scalar>
NashReport is_nash(const Vec4<Scalar>& x, const Mat4<Scalar>& a) {
  const Vec4<Scalar> fitness = a * x;
  const Scalar mean = x.dot(fitness);
  int best = 0;
  for (int i = 1; i < 4; ++i) {
    if (fitness(i) > fitness(best)) best = i;
  }
  const Scalar gap = fitness(best) - mean;
  NashReport r;
  r.best_response = static_cast<Strategy>(best);
  r.gap = scalar_to_double(gap);
  r.is_nash = gap <= comparison_tolerance<Scalar>();
  return r;
}

/// Shares alpha of p1 for which alpha p1 + (1-alpha) p2 is a Nash state.
struct NashInterval {
  bool empty = true;
  Rational upper = 0;  // interval is [0, upper]; upper == 0 means {p2}
};

NashInterval nash_interval_x12(const RepeatedGame& game);

/// Parameters t (share of `hi`) on the neutral edge between `hi` and `lo` at which
/// the state is Nash against the listed strategies.
std::optional<std::pair<Rational, Rational>> neutral_edge_nash_range(
    const Mat4q& ar, int hi, int lo, const std::vector<int>& opponents);

struct SingletonNashFlags {
  bool x13 = false;
  bool x24 = false;
  bool x14 = true;
  bool x23 = false;
};

SingletonNashFlags singleton_nash_flags(const RepeatedGame& game);

struct EssReport {
  bool condition1 = false;  // Nash against every vertex
  bool condition2 = false;  // x^T A y > y^T A y on the best-response face
  int sample_count = 0;     // sampled y distinct from x
  int face_dimension = 0;   // number of best-response vertices minus one
  std::uint64_t seed = 0;
};

EssReport check_ess(const Vec4d& x, const Mat4d& a, int n_samples = 10000,
                    std::uint64_t seed = 1);

using Mat3d = Eigen::Matrix3d;

/// Jacobian of (x1, x2, x3) with x4 = 1 - x1 - x2 - x3 eliminated.
Mat3d reduced_jacobian(const Vec4d& x, const Mat4d& a);

/// Forward-difference version of reduced_jacobian.
Mat3d reduced_jacobian_fd(const Vec4d& x, const Mat4d& a, double h = 1e-7);

/// lambda^3 + a lambda^2 + b lambda + c at the interior equilibrium.
struct InteriorSpectrum {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  std::array<double, 3> eigenvalues{};  // real parts, ascending
  double max_imag = 0.0;
  int negative = 0;
  int positive = 0;
};

InteriorSpectrum spectrum_of(const Mat3d& j);

/// Throws std::domain_error when there is no interior equilibrium.
InteriorSpectrum interior_spectrum(const RepeatedGame& game);

}  // namespace snowdrift
