#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "snowdrift/linalg.hpp"

namespace snowdrift {

/// Base-game payoffs: reward R, sucker S, temptation T, punishment P.
struct BasePayoffs {
  Rational T;
  Rational R;
  Rational S;
  Rational P;
};

struct OrderingViolation {
  std::string inequality;  // "T>R", "R>S" or "S>P"
};

/// Checks the strict snowdrift ordering T > R > S > P.
std::optional<OrderingViolation> validate_snowdrift(const BasePayoffs& p);

class InvalidGame : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A validated snowdrift base game repeated for m >= 2 rounds.
class RepeatedGame {
 public:
  RepeatedGame(BasePayoffs payoffs, int rounds);

  const BasePayoffs& payoffs() const { return payoffs_; }
  int rounds() const { return rounds_; }
  bool even_rounds() const { return rounds_ % 2 == 0; }
  int half_up() const { return (rounds_ + 1) / 2; }  // ceil(m/2)
  int half_down() const { return rounds_ / 2; }      // floor(m/2)

 private:
  BasePayoffs payoffs_;
  int rounds_;
};

/// Accumulated m-round payoffs A for (ALLC, TFT, STFT, ALLD).
Mat4q payoff_matrix(const RepeatedGame& game);

/// A with mR removed from columns 1-2 and mP from columns 3-4: both diagonal
/// 2x2 blocks vanish and the replicator field is unchanged.
Mat4q reduced_matrix(const RepeatedGame& game);

/// Adds `c` to every entry of one column.
template <class Derived>
auto shift_column(const Eigen::MatrixBase<Derived>& a, Strategy column,
                  const typename Derived::Scalar& c) {
  auto shifted = a.eval();
  shifted.col(index(column)).array() += c;
  return shifted;
}

/// The R values at which entries of the reduced matrix change sign.
struct RegimeThresholds {
  Rational a42_root;       // (T+(m-1)P)/m: a'42 > 0 iff R below it
  Rational a32_root;       // (ceil(m/2)T+floor(m/2)S)/m: a'32 > 0 iff R below it
  Rational a13_a23_tie;    // (ceil((m-2)/2)S+floor(m/2)T)/(m-1): a'23 > a'13 iff R below it
  Rational midpoint;       // (T+S)/2, the smaller of the previous two
  Rational large_reward;   // max(a32_root, a13_a23_tie)
};

RegimeThresholds regime_thresholds(const RepeatedGame& game);

enum class SignTag { Zero, Plus, PlusPlus, Minus, MinusMinus };
const char* to_string(SignTag tag);

/// Column-wise sign pattern of the reduced matrix, one of seven cases.
struct SignStructure {
  int case_id = 0;
  std::array<std::array<SignTag, 4>, 4> tags{};  // [row][column]
};

SignStructure sign_structure(const RepeatedGame& game);

enum class Theorem { SmallReward = 1, EvenRounds = 2, OddRounds = 3, LargeReward = 4 };

enum class Threshold { A42Root, A32Root, A13A23Tie, Midpoint };
const char* to_string(Threshold t);

struct RegimeClass {
  int sign_case = 0;
  int equilibrium_case = 0;    // boundary-equilibrium case 1..5
  Theorem theorem = Theorem::SmallReward;
  int theorem_case = 0;        // sub-case for the even/odd theorems, 0 otherwise
  bool even_rounds = false;
  std::vector<Threshold> boundary_equalities;

  bool has_equality(Threshold t) const;
};

RegimeClass classify_regime(const RepeatedGame& game);

/// Total cooperative moves (both players) over m rounds for each strategy pair.
using CoopCounts = Eigen::Matrix<int, 4, 4>;

/// A reactive strategy (p, q, r) with deterministic entries.
struct ReactiveStrategy {
  bool first;           // p: cooperate in round one
  bool after_coop;      // q: cooperate after the opponent cooperated
  bool after_defect;    // r: cooperate after the opponent defected
};

ReactiveStrategy reactive(Strategy s);

CoopCounts cooperation_counts(int rounds);

}  // namespace snowdrift
