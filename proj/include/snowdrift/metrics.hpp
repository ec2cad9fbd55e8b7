#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "snowdrift/convergence.hpp"

namespace snowdrift {

/// x^T A x.
template <class Scalar>
Scalar average_payoff(const Vec4<Scalar>& x, const Mat4<Scalar>& a) {
  return x.dot(a * x);
}

/// sum_ij x_i x_j C_ij / (2m).
template <class Scalar>
Scalar cooperation_level(const Vec4<Scalar>& x, const CoopCounts& c, int rounds) {
  const Mat4<Scalar> cs = c.template cast<Scalar>();
  return x.dot(cs * x) / Scalar(2 * rounds);
}

struct PayoffGap {
  Rational payoff;
  Rational cooperation;
};

/// Payoff and cooperation advantage of x23 over x14, for
/// R <= (ceil(m/2)T+floor(m/2)S)/m. Throws std::domain_error above that.
PayoffGap gap_x23_x14(const RepeatedGame& game);

/// Payoff advantage of any Nash state of X12 over x14. Throws std::domain_error
/// when X12 holds no Nash state.
Rational gap_xalpha_x14(const RepeatedGame& game);

struct MetricsRow {
  Rational R;
  Label label;
  double avg_payoff = 0.0;
  double coop_level = 0.0;
  int simulated_hits = -1;  // runs matched to this label; -1 when not simulated
};

struct SweepOptions {
  bool simulate = false;
  int runs_per_point = 20;
  IntegratorConfig integrator;
  std::uint64_t seed = 1;
};

struct SweepResult {
  std::vector<MetricsRow> rows;
  std::vector<std::string> warnings;  // skipped grid values
  int simulated_runs = 0;
  int simulated_unmatched = 0;
};

/// Analytics at every non-vertex equilibrium of each grid value of R.
SweepResult sweep_R(const Rational& T, const Rational& S, const Rational& P, int rounds,
                    const std::vector<Rational>& grid, const SweepOptions& options = {});

/// lo, lo + step, ... up to hi (inclusive when hit exactly).
std::vector<Rational> rational_grid(const Rational& lo, const Rational& hi, const Rational& step);

}  // namespace snowdrift
