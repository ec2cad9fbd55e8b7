#include "snowdrift/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "snowdrift/sampling.hpp"

namespace snowdrift {

namespace {

Label vertex_label(int i) { return static_cast<Label>(i); }

std::optional<Label> edge_point_label(int i, int j) {
  if (i > j) std::swap(i, j);
  if (i == 0 && j == 2) return Label::X13;
  if (i == 0 && j == 3) return Label::X14;
  if (i == 1 && j == 2) return Label::X23;
  if (i == 1 && j == 3) return Label::X24;
  return std::nullopt;
}

bool restricted_nash(const Vec4q& p, const Mat4q& ar, const std::vector<int>& face) {
  const Vec4q fitness = ar * p;
  const Rational mean = p.dot(fitness);
  return std::all_of(face.begin(), face.end(), [&](int k) { return fitness(k) <= mean; });
}

void add_x12(LimitPrediction& pred, const RepeatedGame& game) {
  const NashInterval ne = nash_interval_x12(game);
  if (!ne.empty) pred.candidates.push_back({Label::X12, std::make_pair(Rational(0), ne.upper)});
}

LimitPrediction interior_prediction(const Vec4d& x0, const RepeatedGame& game,
                                    const RegimeClass& rc) {
  LimitPrediction pred;
  auto add = [&](Label l) { pred.candidates.push_back({l, std::nullopt}); };
  switch (rc.theorem) {
    case Theorem::SmallReward: {
      const Zone z = zone_of(x0, ratio_constants(reduced_matrix(game)));
      if (z == Zone::D14) {
        add(Label::X14);
      } else if (z == Zone::D23) {
        add(Label::X23);
      } else {
        add(Label::X14);
        add(Label::X23);
        add(Label::XInt);
      }
      break;
    }
    case Theorem::EvenRounds:
      add(Label::X14);
      if (rc.theorem_case == 3) {
        add(Label::X123);
      } else {
        add(Label::XInt);
      }
      add_x12(pred, game);
      break;
    case Theorem::OddRounds:
      add(Label::X14);
      if (rc.theorem_case == 1) {
        add(Label::X23);
        add(Label::X123);
      }
      break;
    case Theorem::LargeReward:
      add(Label::X14);
      add_x12(pred, game);
      break;
  }
  return pred;
}

LimitPrediction edge_prediction(const Vec4d& x0, const Mat4q& a, int i, int j) {
  LimitPrediction pred;
  const EdgePortrait e = edge_dynamics(a, static_cast<Strategy>(i), static_cast<Strategy>(j));
  const double share = x0(i) / (x0(i) + x0(j));
  switch (e.kind) {
    case EdgeKind::Neutral: {
      // Neutral edges are X12 (i=0, j=1) and X34 (i=2, j=3); every point is fixed.
      const Label l = i == 0 ? Label::X12 : Label::X34;
      const Rational t(share);
      pred.candidates.push_back({l, std::make_pair(t, t)});
      break;
    }
    case EdgeKind::StableInterior:
      pred.candidates.push_back({*edge_point_label(i, j), std::nullopt});
      break;
    case EdgeKind::UnstableInterior: {
      const double fixed = e.share->get_d();
      if (share == fixed) {
        pred.candidates.push_back({*edge_point_label(i, j), std::nullopt});
      } else {
        pred.candidates.push_back({vertex_label(share > fixed ? i : j), std::nullopt});
      }
      break;
    }
    case EdgeKind::FirstDominates:
      pred.candidates.push_back({vertex_label(i), std::nullopt});
      break;
    case EdgeKind::SecondDominates:
      pred.candidates.push_back({vertex_label(j), std::nullopt});
      break;
  }
  return pred;
}

LimitPrediction face_prediction(const Mat4q& ar, const EquilibriumCatalog& cat,
                                const std::vector<int>& face) {
  LimitPrediction pred;
  auto inside = [&](const Vec4q& p) {
    for (int k = 0; k < 4; ++k) {
      if (p(k) != 0 && std::find(face.begin(), face.end(), k) == face.end()) return false;
    }
    return true;
  };
  auto has = [&](int k) { return std::find(face.begin(), face.end(), k) != face.end(); };
  for (const auto& e : cat.points) {
    if (e.label == Label::XInt) continue;
    if (inside(e.point) && restricted_nash(e.point, ar, face)) {
      pred.candidates.push_back({e.label, std::nullopt});
    }
  }
  if (has(0) && has(1)) {
    if (auto r = neutral_edge_nash_range(ar, 0, 1, face)) pred.candidates.push_back({Label::X12, r});
  }
  if (has(2) && has(3)) {
    if (auto r = neutral_edge_nash_range(ar, 2, 3, face)) pred.candidates.push_back({Label::X34, r});
  }
  if (const Continuum* c = cat.find_continuum(Label::X123); c && has(0) && has(1) && has(2)) {
    pred.candidates.push_back({Label::X123, std::nullopt});
  }
  return pred;
}

bool single_point(const LimitCandidate& c) {
  if (!is_continuum(c.label)) return true;
  return c.range && c.range->first == c.range->second;
}

}  // namespace

LimitPrediction predict_limit(const Vec4d& x0, const RepeatedGame& game) {
  require_simplex(x0, "initial state");
  std::vector<int> face;
  for (int i = 0; i < 4; ++i) {
    if (x0(i) > 0.0) face.push_back(i);
  }

  LimitPrediction pred;
  if (face.size() == 1) {
    pred.candidates.push_back({vertex_label(face[0]), std::nullopt});
  } else if (face.size() == 2) {
    pred = edge_prediction(x0, payoff_matrix(game), face[0], face[1]);
  } else if (face.size() == 3) {
    pred = face_prediction(reduced_matrix(game), boundary_catalog(game), face);
  } else {
    pred = interior_prediction(x0, game, classify_regime(game));
  }
  pred.deterministic = pred.candidates.size() == 1 && single_point(pred.candidates.front());
  return pred;
}

CatalogMatch match_catalog(const Vec4d& point, const EquilibriumCatalog& catalog, double tol) {
  CatalogMatch best;
  best.distance = std::numeric_limits<double>::infinity();

  auto try_points = [&](bool vertices) {
    for (const auto& e : catalog.points) {
      const bool is_vertex = e.label <= Label::P4;
      if (is_vertex != vertices) continue;
      const double d = (point - to_double(e.point)).norm();
      if (d <= tol && d < best.distance) {
        best = CatalogMatch{true, e.label, std::nullopt, d};
      }
    }
    return best.matched;
  };
  if (try_points(true) || try_points(false)) return best;

  for (const auto& c : catalog.continua) {
    const Vec4d s = to_double(c.start);
    const Vec4d dir = to_double(c.end) - s;
    const double t = std::clamp((point - s).dot(dir) / dir.squaredNorm(), 0.0, 1.0);
    const double d = (point - (s + t * dir)).norm();
    if (d <= tol && d < best.distance) best = CatalogMatch{true, c.label, t, d};
  }
  if (!best.matched) best.distance = std::numeric_limits<double>::infinity();
  return best;
}

bool prediction_contains(const LimitPrediction& prediction, const CatalogMatch& match, double tol) {
  if (!match.matched) return false;
  auto in_range = [&](const LimitCandidate& c, double t) {
    if (!c.range) return true;
    return t >= c.range->first.get_d() - tol && t <= c.range->second.get_d() + tol;
  };
  for (const auto& c : prediction.candidates) {
    if (c.label == match.label) {
      if (match.parameter && !in_range(c, *match.parameter)) continue;
      return true;
    }
    // Vertices are endpoints of the neutral edges.
    if (c.label == Label::X12 && (match.label == Label::P1 || match.label == Label::P2)) {
      if (in_range(c, match.label == Label::P1 ? 1.0 : 0.0)) return true;
    }
    if (c.label == Label::X34 && (match.label == Label::P3 || match.label == Label::P4)) {
      if (in_range(c, match.label == Label::P3 ? 1.0 : 0.0)) return true;
    }
  }
  return false;
}

LimitRun run_to_limit(const Vec4d& x0, const Mat4d& reduced, const EquilibriumCatalog& catalog,
                      const IntegratorConfig& cfg) {
  LimitRun run;
  run.summary = integrate(x0, reduced, cfg);
  run.match = match_catalog(run.summary.terminal, catalog);
  return run;
}

LimitRun run_to_limit(const Vec4d& x0, const RepeatedGame& game, const IntegratorConfig& cfg) {
  return run_to_limit(x0, to_double(reduced_matrix(game)), full_catalog(game), cfg);
}

SeparatrixSample separatrix_bisect(const Vec4d& seed_a, const Vec4d& seed_b,
                                   const RepeatedGame& game, const IntegratorConfig& cfg,
                                   int iters) {
  require_simplex(seed_a, "separatrix seed a");
  require_simplex(seed_b, "separatrix seed b");
  if (iters < 1) throw std::invalid_argument("bisection needs at least one iteration");
  const Mat4d ar = to_double(reduced_matrix(game));
  const EquilibriumCatalog cat = full_catalog(game);

  // Label of the limit; a run that stalls at x_int is pushed off it by round-off.
  auto label_of = [&](const Vec4d& x0) -> std::optional<Label> {
    LimitRun run = run_to_limit(x0, ar, cat, cfg);
    if (run.match.matched && run.match.label == Label::XInt) {
      IntegratorConfig escape = cfg;
      escape.eps_conv = std::numeric_limits<double>::min();
      run = run_to_limit(run.summary.terminal, ar, cat, escape);
    }
    if (!run.match.matched) return std::nullopt;
    return run.match.label;
  };

  const auto la = label_of(seed_a);
  const auto lb = label_of(seed_b);
  if (!la || !lb) throw SeparatrixError("a seed did not reach a catalogued equilibrium");
  if (*la == *lb) {
    throw SeparatrixError(std::string("both seeds converge to ") + to_string(*la));
  }

  SeparatrixSample out;
  out.label_a = *la;
  out.label_b = *lb;
  double lo = 0.0;
  double hi = 1.0;
  for (int k = 0; k < iters; ++k) {
    const double mid = 0.5 * (lo + hi);
    const Vec4d x = seed_a + mid * (seed_b - seed_a);
    const auto l = label_of(x);
    ++out.iterations;
    if (l && *l == *la) {
      lo = mid;
    } else if (l && *l == *lb) {
      hi = mid;
    } else if (l && *l == Label::XInt) {
      lo = hi = mid;  // numerically on the stable manifold
      break;
    } else {
      throw SeparatrixError(std::string("segment reaches a third limit: ") +
                            (l ? to_string(*l) : "unmatched"));
    }
  }
  out.parameter = 0.5 * (lo + hi);
  out.point = seed_a + out.parameter * (seed_b - seed_a);
  out.gap = (hi - lo) * (seed_b - seed_a).norm();

  out.closest_to_interior = std::numeric_limits<double>::infinity();
  if (cat.interior) {
    const Vec4d xi = to_double(cat.interior->point);
    integrate(out.point, ar, cfg, [&](double, const Vec4d& x) {
      out.closest_to_interior = std::min(out.closest_to_interior, (x - xi).norm());
    });
  }
  return out;
}

BasinStats basin_sample(const RepeatedGame& game, int n_samples, const IntegratorConfig& cfg,
                        std::uint64_t seed, const std::function<void(const BasinRecord&)>& on_sample) {
  if (n_samples < 0) throw std::invalid_argument("sample count must be nonnegative");
  const Mat4d ar = to_double(reduced_matrix(game));
  const EquilibriumCatalog cat = full_catalog(game);
  Rng rng(seed);

  BasinStats stats;
  stats.n_samples = n_samples;
  stats.seed = seed;
  for (int k = 0; k < n_samples; ++k) {
    BasinRecord rec;
    rec.x0 = sample_simplex(rng);
    rec.prediction = predict_limit(rec.x0, game);
    rec.run = run_to_limit(rec.x0, ar, cat, cfg);
    rec.consistent = prediction_contains(rec.prediction, rec.run.match);

    switch (rec.run.summary.status) {
      case TerminalStatus::Converged: ++stats.converged; break;
      case TerminalStatus::MaxTime: ++stats.unresolved; break;
      case TerminalStatus::Failed: ++stats.failed; break;
    }
    if (rec.run.match.matched) {
      ++stats.counts[to_string(rec.run.match.label)];
      if (!rec.consistent && rec.run.summary.status == TerminalStatus::Converged) ++stats.violations;
    } else {
      ++stats.unmatched;
    }
    if (on_sample) on_sample(rec);
  }
  return stats;
}

}  // namespace snowdrift
