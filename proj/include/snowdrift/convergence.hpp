#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "snowdrift/equilibria.hpp"
#include "snowdrift/stability.hpp"

namespace snowdrift {

/// One admissible limit. For X12 and X34 `range` bounds the continuum
/// parameter (share of p1, resp. p3); a missing range means the whole set.
struct LimitCandidate {
  Label label;
  std::optional<std::pair<Rational, Rational>> range;
};

struct LimitPrediction {
  std::vector<LimitCandidate> candidates;
  bool deterministic = false;
};

LimitPrediction predict_limit(const Vec4d& x0, const RepeatedGame& game);

struct CatalogMatch {
  bool matched = false;
  Label label = Label::P1;
  std::optional<double> parameter;  // position along a continuum
  double distance = 0.0;
};

/// Nearest catalog entry within `tol` (Euclidean). Vertices win over other
/// points, points win over continua.
CatalogMatch match_catalog(const Vec4d& point, const EquilibriumCatalog& catalog,
                           double tol = 1e-5);

/// Whether a matched limit belongs to the predicted set.
bool prediction_contains(const LimitPrediction& prediction, const CatalogMatch& match,
                         double tol = 1e-5);

struct LimitRun {
  IntegrationSummary summary;
  CatalogMatch match;
};

LimitRun run_to_limit(const Vec4d& x0, const RepeatedGame& game, const IntegratorConfig& cfg);

/// Same as run_to_limit with a prebuilt catalog and reduced matrix.
LimitRun run_to_limit(const Vec4d& x0, const Mat4d& reduced, const EquilibriumCatalog& catalog,
                      const IntegratorConfig& cfg);

class SeparatrixError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SeparatrixSample {
  Vec4d point = Vec4d::Zero();
  double gap = 0.0;                  // bracket width along the segment
  double parameter = 0.0;            // position on [seed_a, seed_b]
  Label label_a = Label::P1;
  Label label_b = Label::P1;
  int iterations = 0;
  double closest_to_interior = 0.0;  // minimum distance to x_int along the trajectory
};

/// Bisects [seed_a, seed_b] between two attractor labels. Throws SeparatrixError
/// when the seeds share a label or a third label shows up on the segment.
SeparatrixSample separatrix_bisect(const Vec4d& seed_a, const Vec4d& seed_b,
                                   const RepeatedGame& game, const IntegratorConfig& cfg,
                                   int iters = 60);

struct BasinRecord {
  Vec4d x0;
  LimitPrediction prediction;
  LimitRun run;
  bool consistent = false;
};

struct BasinStats {
  std::map<std::string, int> counts;
  int n_samples = 0;
  std::uint64_t seed = 0;
  int converged = 0;
  int unresolved = 0;
  int failed = 0;
  int unmatched = 0;
  int violations = 0;  // converged runs whose match is outside the prediction
};

/// Dirichlet-uniform interior starts, each integrated and matched.
BasinStats basin_sample(const RepeatedGame& game, int n_samples, const IntegratorConfig& cfg,
                        std::uint64_t seed,
                        const std::function<void(const BasinRecord&)>& on_sample = {});

}  // namespace snowdrift
