#include "snowdrift/metrics.hpp"

#include <map>
#include <stdexcept>

#include "snowdrift/sampling.hpp"

namespace snowdrift {

PayoffGap gap_x23_x14(const RepeatedGame& game) {
  // The x23 closed form stays in the simplex while a'32 >= 0; at equality it is p2.
  if (game.payoffs().R > regime_thresholds(game).a32_root) {
    throw std::domain_error("x23 is not an equilibrium for these payoffs");
  }
  const auto& [T, R, S, P] = game.payoffs();
  const int m = game.rounds();
  const Rational denom = T - R + S - P;
  const Rational d = S - T;
  PayoffGap g;
  if (game.even_rounds()) {
    g.payoff = m * d * d / (4 * denom);
    g.cooperation = (T - S) / (2 * denom);
  } else {
    g.payoff = (m * m - 1) * d * d / (4 * m * denom);
    g.cooperation = (m - 1) * (T - S) / (2 * m * denom);
  }
  return g;
}

Rational gap_xalpha_x14(const RepeatedGame& game) {
  if (nash_interval_x12(game).empty) {
    throw std::domain_error("X12 contains no Nash state for these payoffs");
  }
  const auto& [T, R, S, P] = game.payoffs();
  return game.rounds() * (T - R) * (R - S) / (T - R + S - P);
}

std::vector<Rational> rational_grid(const Rational& lo, const Rational& hi, const Rational& step) {
  if (step <= 0) throw std::invalid_argument("grid step must be positive");
  std::vector<Rational> grid;
  for (Rational r = lo; r <= hi; r += step) grid.push_back(r);
  return grid;
}

SweepResult sweep_R(const Rational& T, const Rational& S, const Rational& P, int rounds,
                    const std::vector<Rational>& grid, const SweepOptions& options) {
  SweepResult out;
  const CoopCounts c = cooperation_counts(rounds);
  Rng rng(options.seed);

  for (const Rational& R : grid) {
    const BasePayoffs base{T, R, S, P};
    if (auto v = validate_snowdrift(base)) {
      out.warnings.push_back("skipped R=" + to_string(R) + ": " + v->inequality + " fails");
      continue;
    }
    const RepeatedGame game(base, rounds);
    const Mat4q a = payoff_matrix(game);
    const EquilibriumCatalog cat = full_catalog(game);

    std::map<Label, int> hits;
    if (options.simulate) {
      const Mat4d ar = to_double(reduced_matrix(game));
      for (int k = 0; k < options.runs_per_point; ++k) {
        const LimitRun run = run_to_limit(sample_simplex(rng), ar, cat, options.integrator);
        ++out.simulated_runs;
        if (run.match.matched) {
          ++hits[run.match.label];
        } else {
          ++out.simulated_unmatched;
        }
      }
    }
    auto hit_count = [&](Label l) {
      if (!options.simulate) return -1;
      auto it = hits.find(l);
      return it == hits.end() ? 0 : it->second;
    };

    for (const auto& e : cat.points) {
      if (e.label <= Label::P4) continue;
      MetricsRow row{R, e.label, average_payoff(e.point, a).get_d(),
                     cooperation_level(e.point, c, rounds).get_d(), hit_count(e.label)};
      out.rows.push_back(row);
    }
    if (!nash_interval_x12(game).empty) {
      // Every state of X12 pays mR and cooperates fully.
      const Vec4q p2 = vertex(Strategy::Tft);
      int x12_hits = hit_count(Label::X12);
      if (options.simulate) x12_hits += hit_count(Label::P1) + hit_count(Label::P2);
      out.rows.push_back({R, Label::X12, average_payoff(p2, a).get_d(),
                          cooperation_level(p2, c, rounds).get_d(), x12_hits});
    }
  }
  return out;
}

}  // namespace snowdrift
