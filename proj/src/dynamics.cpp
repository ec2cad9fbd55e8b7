#include "snowdrift/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace snowdrift {

const char* to_string(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::Converged: return "converged";
    case TerminalStatus::MaxTime: return "max_time";
    case TerminalStatus::Failed: return "failed";
  }
  return "?";
}

const char* to_string(Zone z) {
  switch (z) {
    case Zone::D14: return "D14";
    case Zone::D23: return "D23";
    case Zone::Y14: return "Y14";
    case Zone::Y23: return "Y23";
    case Zone::P11: return "P11";
    case Zone::P12: return "P12";
    case Zone::P21: return "P21";
    case Zone::P22: return "P22";
    case Zone::LInt: return "L_int";
    case Zone::Boundary: return "boundary";
  }
  return "?";
}

const char* to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Neutral: return "neutral";
    case EdgeKind::FirstDominates: return "first_dominates";
    case EdgeKind::SecondDominates: return "second_dominates";
    case EdgeKind::StableInterior: return "stable_interior";
    case EdgeKind::UnstableInterior: return "unstable_interior";
  }
  return "?";
}

namespace {

constexpr double kLeaveTolerance = 1e-6;
constexpr int kTailCheckpoints = 21;

// A stop is genuine only if no present strategy has a positive growth rate;
// otherwise a tiny share of an invader would still take over later.
bool settled(const Vec4d& x, const Mat4d& a, double rhs_norm, double eps, double rate_tol) {
  if (!(rhs_norm < eps)) return false;
  const Vec4d fitness = a * x;
  const double mean = x.dot(fitness);
  for (int i = 0; i < 4; ++i) {
    if (x(i) > 0.0 && fitness(i) - mean > rate_tol) return false;
  }
  return true;
}

Vec4d rk4_step(const Vec4d& x, const Mat4d& a, double dt) {
  const Vec4d k1 = replicator_rhs(x, a);
  const Vec4d k2 = replicator_rhs<double>(x + 0.5 * dt * k1, a);
  const Vec4d k3 = replicator_rhs<double>(x + 0.5 * dt * k2, a);
  const Vec4d k4 = replicator_rhs<double>(x + dt * k3, a);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

IntegrationSummary integrate(const Vec4d& x0, const Mat4d& a, const IntegratorConfig& cfg,
                             const StepObserver& observer) {
  require_simplex(x0, "initial state");
  if (!(cfg.dt > 0.0) || !(cfg.t_max >= 0.0) || !(cfg.eps_conv > 0.0)) {
    throw std::invalid_argument("integrator needs dt > 0, t_max >= 0 and eps_conv > 0");
  }

  std::array<bool, 4> pinned{};
  for (int i = 0; i < 4; ++i) pinned[i] = x0(i) == 0.0;

  std::vector<double> checkpoints;
  if (cfg.t_max > 0.0) {
    for (int k = 0; k < kTailCheckpoints; ++k) {
      checkpoints.push_back(cfg.t_max * std::pow(10.0, -1.0 + k / double(kTailCheckpoints - 1)));
    }
  }
  std::size_t next_checkpoint = 0;

  const double rate_tol = cfg.eps_rate * std::max(1.0, a.cwiseAbs().maxCoeff());

  IntegrationSummary out;
  Vec4d x = x0;
  out.rhs_norm = max_norm<double>(replicator_rhs(x, a));
  if (observer) observer(0.0, x);
  if (settled(x, a, out.rhs_norm, cfg.eps_conv, rate_tol)) {
    out.status = TerminalStatus::Converged;
    out.terminal = x;
    return out;
  }

  const long max_steps = static_cast<long>(std::ceil(cfg.t_max / cfg.dt - 1e-9));
  for (long step = 1; step <= max_steps; ++step) {
    Vec4d next = rk4_step(x, a, cfg.dt);
    for (int i = 0; i < 4; ++i) {
      if (pinned[i]) next(i) = 0.0;
    }
    if (!next.allFinite()) {
      out.status = TerminalStatus::Failed;
      out.failure = "state became non-finite";
      out.terminal = x;
      return out;
    }
    const double lowest = next.minCoeff();
    const double drift = std::abs(next.sum() - 1.0);
    out.min_before_clip = std::min(out.min_before_clip, lowest);
    out.max_sum_drift = std::max(out.max_sum_drift, drift);
    if (lowest < -kLeaveTolerance || drift > kLeaveTolerance) {
      out.status = TerminalStatus::Failed;
      out.failure = "state left the simplex; reduce dt";
      out.terminal = x;
      out.steps = step - 1;
      out.t = (step - 1) * cfg.dt;
      return out;
    }
    if (cfg.renormalize) {
      next = next.cwiseMax(0.0);
      next /= next.sum();
    }
    x = next;
    const double t = step * cfg.dt;
    out.steps = step;
    out.t = t;
    out.rhs_norm = max_norm<double>(replicator_rhs(x, a));
    while (next_checkpoint < checkpoints.size() && t >= checkpoints[next_checkpoint]) {
      out.tail_norms.push_back({t, out.rhs_norm});
      ++next_checkpoint;
    }
    if (observer) observer(t, x);
    if (settled(x, a, out.rhs_norm, cfg.eps_conv, rate_tol)) {
      out.status = TerminalStatus::Converged;
      out.terminal = x;
      return out;
    }
  }
  out.status = TerminalStatus::MaxTime;
  out.terminal = x;
  return out;
}

Trajectory integrate_trajectory(const Vec4d& x0, const Mat4d& a, const IntegratorConfig& cfg,
                                long stride) {
  if (stride < 1) throw std::invalid_argument("record stride must be positive");
  Trajectory traj;
  long counter = 0;
  traj.summary = integrate(x0, a, cfg, [&](double t, const Vec4d& x) {
    if (counter++ % stride == 0) {
      traj.t.push_back(t);
      traj.x.push_back(x);
    }
  });
  if (traj.t.empty() || traj.t.back() != traj.summary.t) {
    traj.t.push_back(traj.summary.t);
    traj.x.push_back(traj.summary.terminal);
  }
  return traj;
}

RatioConstants ratio_constants(const Mat4q& ar) {
  RatioConstants b;
  b.b1 = -(ar(0, 2) - ar(1, 2)) / (ar(0, 3) - ar(1, 3));
  b.b2 = -(ar(3, 1) - ar(2, 1)) / (ar(3, 0) - ar(2, 0));
  return b;
}

EdgePortrait edge_dynamics(const Mat4q& a, Strategy i, Strategy j) {
  if (i == j) throw std::invalid_argument("edge needs two distinct strategies");
  const int ii = index(i);
  const int jj = index(j);
  EdgePortrait e{i, j, {}, EdgeKind::Neutral, std::nullopt, std::nullopt};
  e.game << a(ii, ii), a(ii, jj), a(jj, ii), a(jj, jj);

  const Rational u = a(ii, jj) - a(jj, jj);  // advantage of i where j is common
  const Rational v = a(jj, ii) - a(ii, ii);  // advantage of j where i is common
  if (u == 0 && v == 0) {
    e.kind = EdgeKind::Neutral;
  } else if (u > 0 && v > 0) {
    e.kind = EdgeKind::StableInterior;
  } else if (u < 0 && v < 0) {
    e.kind = EdgeKind::UnstableInterior;
  } else if (u >= 0 && v <= 0) {
    e.kind = EdgeKind::FirstDominates;
  } else {
    e.kind = EdgeKind::SecondDominates;
  }
  if (e.kind == EdgeKind::StableInterior || e.kind == EdgeKind::UnstableInterior) {
    const Rational share = u / (u + v);
    Vec4q p = Vec4q::Zero();
    p(ii) = share;
    p(jj) = 1 - share;
    e.share = share;
    e.fixed_point = p;
  }
  return e;
}

LineRestriction line_restriction(const Mat4q& ar) {
  const RatioConstants b = ratio_constants(ar);
  if (b.b1 <= 0) {
    throw std::domain_error("no interior equilibrium: L_int lies outside the simplex");
  }
  const Rational d1 = ar(0, 2) * ar(1, 3) - ar(0, 3) * ar(1, 2);
  const Rational d2 = ar(2, 0) * ar(3, 1) - ar(2, 1) * ar(3, 0);

  LineRestriction lr;
  const Rational c = ar(3, 0) - ar(2, 0);
  lr.k = 1 / (c * c * (ar(1, 2) - ar(0, 2) + ar(0, 3) - ar(1, 3)));
  lr.f = ar(2, 1) - ar(3, 1) + ar(3, 0) - ar(2, 0);
  lr.g = c;
  lr.r = d1 * (ar(2, 0) - ar(3, 0) + ar(3, 1) - ar(2, 1)) +
         d2 * (ar(0, 2) - ar(1, 2) + ar(1, 3) - ar(0, 3));
  lr.s = d1 * (ar(2, 0) - ar(3, 0));
  return lr;
}

Vec4q line_point(const Rational& x2, const RatioConstants& b) {
  Vec4q p;
  const Rational x3 = (1 - (1 + b.b2) * x2) / (1 + b.b1);
  p << b.b2 * x2, x2, x3, b.b1 * x3;
  return p;
}

}  // namespace snowdrift
