#include "snowdrift/game.hpp"

#include <algorithm>

namespace snowdrift {

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::AllC: return "ALLC";
    case Strategy::Tft: return "TFT";
    case Strategy::Stft: return "STFT";
    case Strategy::AllD: return "ALLD";
  }
  return "?";
}

void require_simplex(const Vec4d& x, const char* what) {
  if (!x.allFinite() || !in_simplex(x)) {
    throw std::invalid_argument(std::string(what) + " is not a point of the simplex");
  }
}

void require_simplex(const Vec4q& x, const char* what) {
  if (!in_simplex(x)) {
    throw std::invalid_argument(std::string(what) + " is not a point of the simplex");
  }
}

std::optional<OrderingViolation> validate_snowdrift(const BasePayoffs& p) {
  if (!(p.T > p.R)) return OrderingViolation{"T>R"};
  if (!(p.R > p.S)) return OrderingViolation{"R>S"};
  if (!(p.S > p.P)) return OrderingViolation{"S>P"};
  return std::nullopt;
}

RepeatedGame::RepeatedGame(BasePayoffs payoffs, int rounds)
    : payoffs_(std::move(payoffs)), rounds_(rounds) {
  if (auto v = validate_snowdrift(payoffs_)) {
    throw InvalidGame("payoffs violate the snowdrift ordering: " + v->inequality + " fails");
  }
  if (rounds_ < 2) {
    throw InvalidGame("number of rounds must be at least 2, got " + std::to_string(rounds_));
  }
}

Mat4q payoff_matrix(const RepeatedGame& game) {
  const auto& [T, R, S, P] = game.payoffs();
  const int m = game.rounds();
  const int up = game.half_up();
  const int down = game.half_down();

  Mat4q a;
  a << m * R, m * R, S + (m - 1) * R, m * S,
       m * R, m * R, up * S + down * T, S + (m - 1) * P,
       T + (m - 1) * R, up * T + down * S, m * P, m * P,
       m * T, T + (m - 1) * P, m * P, m * P;
  return a;
}

Mat4q reduced_matrix(const RepeatedGame& game) {
  const auto& p = game.payoffs();
  const int m = game.rounds();
  const Rational mr = m * p.R;
  const Rational mp = m * p.P;
  Mat4q a = payoff_matrix(game);
  a = shift_column(a, Strategy::AllC, Rational(-mr));
  a = shift_column(a, Strategy::Tft, Rational(-mr));
  a = shift_column(a, Strategy::Stft, Rational(-mp));
  a = shift_column(a, Strategy::AllD, Rational(-mp));
  return a;
}

RegimeThresholds regime_thresholds(const RepeatedGame& game) {
  const auto& [T, R, S, P] = game.payoffs();
  const int m = game.rounds();
  const int up = game.half_up();
  const int down = game.half_down();
  const int up_minus_one = (m - 1) / 2;  // ceil((m-2)/2)

  RegimeThresholds th;
  th.a42_root = (T + (m - 1) * P) / m;
  th.a32_root = (up * T + down * S) / m;
  th.a13_a23_tie = (up_minus_one * S + down * T) / (m - 1);
  th.midpoint = (T + S) / 2;
  th.large_reward = std::max(th.a32_root, th.a13_a23_tie);
  return th;
}

const char* to_string(SignTag tag) {
  switch (tag) {
    case SignTag::Zero: return "0";
    case SignTag::Plus: return "+";
    case SignTag::PlusPlus: return "++";
    case SignTag::Minus: return "-";
    case SignTag::MinusMinus: return "--";
  }
  return "?";
}

const char* to_string(Threshold t) {
  switch (t) {
    case Threshold::A42Root: return "R=(T+(m-1)P)/m";
    case Threshold::A32Root: return "R=(ceil(m/2)T+floor(m/2)S)/m";
    case Threshold::A13A23Tie: return "R=(ceil((m-2)/2)S+floor(m/2)T)/(m-1)";
    case Threshold::Midpoint: return "R=(T+S)/2";
  }
  return "?";
}

namespace {

using Tags = std::array<std::array<SignTag, 4>, 4>;

int sign_case_of(const RepeatedGame& game, const RegimeThresholds& th) {
  const Rational& R = game.payoffs().R;
  if (R < th.a42_root) return 1;
  if (R < th.midpoint) return 2;
  if (game.even_rounds()) {
    if (R < th.a13_a23_tie) return 5;
    if (R == th.a13_a23_tie) return 6;
    return 7;
  }
  if (R == th.midpoint) return 3;
  if (R <= th.a32_root) return 4;
  return 7;
}

Tags table_for(int case_id, bool a42_zero, bool a32_zero) {
  constexpr auto O = SignTag::Zero;
  constexpr auto p = SignTag::Plus;
  constexpr auto pp = SignTag::PlusPlus;
  constexpr auto n = SignTag::Minus;
  constexpr auto nn = SignTag::MinusMinus;
  switch (case_id) {
    case 1:
      return {{{O, O, p, pp}, {O, O, pp, p}, {p, pp, O, O}, {pp, p, O, O}}};
    case 2:
      return {{{O, O, p, pp}, {O, O, pp, p}, {p, pp, O, O}, {pp, a42_zero ? O : n, O, O}}};
    case 3:
      return {{{O, O, pp, pp}, {O, O, pp, p}, {p, pp, O, O}, {pp, n, O, O}}};
    case 4:
      return {{{O, O, pp, pp}, {O, O, p, p}, {p, a32_zero ? O : pp, O, O}, {pp, n, O, O}}};
    case 5:
      return {{{O, O, p, pp}, {O, O, pp, p}, {p, a32_zero ? O : n, O, O}, {pp, nn, O, O}}};
    case 6:
      return {{{O, O, pp, pp}, {O, O, pp, p}, {p, n, O, O}, {pp, nn, O, O}}};
    default:
      return {{{O, O, pp, pp}, {O, O, p, p}, {p, n, O, O}, {pp, nn, O, O}}};
  }
}

}  // namespace

SignStructure sign_structure(const RepeatedGame& game) {
  const auto th = regime_thresholds(game);
  const Rational& R = game.payoffs().R;
  SignStructure out;
  out.case_id = sign_case_of(game, th);
  out.tags = table_for(out.case_id, R == th.a42_root, R == th.a32_root);
  return out;
}

bool RegimeClass::has_equality(Threshold t) const {
  return std::find(boundary_equalities.begin(), boundary_equalities.end(), t) !=
         boundary_equalities.end();
}

RegimeClass classify_regime(const RepeatedGame& game) {
  const auto th = regime_thresholds(game);
  const Rational& R = game.payoffs().R;
  const bool even = game.even_rounds();

  RegimeClass rc;
  rc.even_rounds = even;
  rc.sign_case = sign_case_of(game, th);

  if (R == th.a42_root) rc.boundary_equalities.push_back(Threshold::A42Root);
  if (R == th.a32_root) rc.boundary_equalities.push_back(Threshold::A32Root);
  if (R == th.a13_a23_tie) rc.boundary_equalities.push_back(Threshold::A13A23Tie);
  if (R == th.midpoint) rc.boundary_equalities.push_back(Threshold::Midpoint);

  // Boundary equilibria. For odd m at R = a32_root, x23 coincides with p2 and
  // the set equals the large-reward one.
  if (R < th.a42_root) {
    rc.equilibrium_case = 1;
  } else if (R < th.midpoint || (!even && R > th.midpoint && R < th.a32_root)) {
    rc.equilibrium_case = 2;
  } else if (!even && R == th.midpoint) {
    rc.equilibrium_case = 3;
  } else if (even && R == th.a13_a23_tie) {
    rc.equilibrium_case = 4;
  } else {
    rc.equilibrium_case = 5;
  }

  if (R < th.midpoint) {
    rc.theorem = Theorem::SmallReward;
    rc.theorem_case = 0;
  } else if (even && R <= th.a13_a23_tie) {
    rc.theorem = Theorem::EvenRounds;
    rc.theorem_case = R == th.midpoint ? 1 : (R < th.a13_a23_tie ? 2 : 3);
  } else if (!even && R <= th.a32_root) {
    rc.theorem = Theorem::OddRounds;
    rc.theorem_case = R == th.midpoint ? 1 : 2;
  } else {
    rc.theorem = Theorem::LargeReward;
    rc.theorem_case = 0;
  }
  return rc;
}

ReactiveStrategy reactive(Strategy s) {
  switch (s) {
    case Strategy::AllC: return {true, true, true};
    case Strategy::Tft: return {true, true, false};
    case Strategy::Stft: return {false, true, false};
    case Strategy::AllD: return {false, false, false};
  }
  return {false, false, false};
}

CoopCounts cooperation_counts(int rounds) {
  if (rounds < 2) throw std::invalid_argument("cooperation_counts needs m >= 2");
  CoopCounts c = CoopCounts::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const ReactiveStrategy a = reactive(static_cast<Strategy>(i));
      const ReactiveStrategy b = reactive(static_cast<Strategy>(j));
      bool move_a = a.first;
      bool move_b = b.first;
      int count = 0;
      for (int round = 0; round < rounds; ++round) {
        count += static_cast<int>(move_a) + static_cast<int>(move_b);
        const bool next_a = move_b ? a.after_coop : a.after_defect;
        const bool next_b = move_a ? b.after_coop : b.after_defect;
        move_a = next_a;
        move_b = next_b;
      }
      c(i, j) = count;
    }
  }
  return c;
}

}  // namespace snowdrift
