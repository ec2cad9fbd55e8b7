#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "snowdrift/dynamics.hpp"
#include "snowdrift/equilibria.hpp"
#include "snowdrift/sampling.hpp"

using namespace snowdrift;

namespace {

RepeatedGame make(const char* T, const char* R, const char* S, const char* P, int m) {
  return RepeatedGame({parse_rational(T), parse_rational(R), parse_rational(S), parse_rational(P)},
                      m);
}

// Point with prescribed ratios x1/x2 and x4/x3, scaled onto the simplex.
Vec4d with_ratios(double r12, double r43, double x2, double x3) {
  Vec4d x(r12 * x2, x2, x3, r43 * x3);
  return x / x.sum();
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("replicator field basics") {
    const RepeatedGame g = make("6", "4", "3", "2", 2);
    const Mat4q a = payoff_matrix(g);
    CHECK(replicator_rhs<Rational>(vertex(Strategy::AllC), a).isZero());
    Vec4q face;
    face << oracle::frac(1, 2), oracle::frac(1, 4), 0, oracle::frac(1, 4);
    CHECK(replicator_rhs(face, a)(2) == 0);
    const auto xi = interior_equilibrium(g);
    REQUIRE(xi.has_value());
    CHECK(replicator_rhs(xi->point, a).isZero());
    CHECK(max_norm<double>(replicator_rhs<double>(to_double(xi->point), to_double(a))) < 1e-12);
  }

  TEST_CASE("field matches the oracle and sums to zero") {
    std::mt19937_64 rng(21);
    Rng srng(22);
    for (int k = 0; k < 100; ++k) {
      const RepeatedGame g(oracle::random_payoffs(rng), oracle::random_rounds(rng));
      const Mat4q a = payoff_matrix(g);
      const Vec4q x = oracle::random_rational_simplex(rng);
      CHECK(replicator_rhs(x, a) == oracle::rhs<Rational>(x, a));
      const Vec4d xd = sample_simplex(srng);
      const Vec4d v = replicator_rhs<double>(xd, to_double(a));
      CHECK(std::abs(v.sum()) <= 1e-12 * std::max(1.0, to_double(a).cwiseAbs().maxCoeff()));
      CHECK((v - oracle::rhs<double>(xd, to_double(a))).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("integration from an equilibrium stops at t = 0") {
    const Mat4d a = to_double(payoff_matrix(make("6", "4", "3", "2", 8)));
    const IntegrationSummary s = integrate(vertex<double>(Strategy::Tft), a, {});
    CHECK(s.status == TerminalStatus::Converged);
    CHECK(s.t == 0.0);
    CHECK(s.steps == 0);
    CHECK(s.terminal == vertex<double>(Strategy::Tft));
  }

  TEST_CASE("integration rejects bad input") {
    const Mat4d a = to_double(payoff_matrix(make("6", "4", "3", "2", 8)));
    CHECK_THROWS_AS(integrate(Vec4d(0.5, 0.5, 0.5, 0.0), a, {}), std::invalid_argument);
    IntegratorConfig bad;
    bad.dt = 0.0;
    CHECK_THROWS_AS(integrate(Vec4d(0.25, 0.25, 0.25, 0.25), a, bad), std::invalid_argument);
  }

  TEST_CASE("simplex preservation and face invariance") {
    const RepeatedGame g = make("6", "4", "3", "2", 8);
    const Mat4d a = to_double(payoff_matrix(g));
    Rng rng(23);
    for (int k = 0; k < 30; ++k) {
      Vec4d x0 = sample_simplex(rng);
      const int zero = k % 5;
      if (zero < 4) {
        x0(zero) = 0.0;
        x0 /= x0.sum();
      }
      bool ok = true;
      integrate(x0, a, {}, [&](double, const Vec4d& x) {
        if (x.minCoeff() < 0.0 || std::abs(x.sum() - 1.0) > 1e-9) ok = false;
        if (zero < 4 && x(zero) != 0.0) ok = false;
      });
      CHECK(ok);
      const IntegrationSummary s = integrate(x0, a, {});
      CHECK(s.min_before_clip >= -1e-12);
      CHECK(s.max_sum_drift <= 1e-9);
    }
  }

  TEST_CASE("too large a step fails") {
    const Mat4d a = to_double(payoff_matrix(make("6", "4", "3", "2", 8)));
    IntegratorConfig cfg;
    cfg.dt = 5.0;
    const IntegrationSummary s = integrate(Vec4d(0.1, 0.2, 0.3, 0.4), a, cfg);
    CHECK(s.status == TerminalStatus::Failed);
    CHECK_FALSE(s.failure.empty());
  }

  TEST_CASE("edge (1,4) converges to x14") {
    const RepeatedGame g = make("6", "4", "3", "2", 8);
    const Mat4d a = to_double(payoff_matrix(g));
    const auto roots = oracle::edge_roots(a, 0, 3);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].stable);
    CHECK(roots[0].share == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    for (double s : {0.05, 0.5, 0.95}) {
      const IntegrationSummary r = integrate(Vec4d(s, 0, 0, 1 - s), a, {});
      CHECK(r.status == TerminalStatus::Converged);
      CHECK(r.terminal(1) == 0.0);
      CHECK(r.terminal(2) == 0.0);
      CHECK(r.terminal(0) == doctest::Approx(roots[0].share).epsilon(1e-6));
    }
  }

  TEST_CASE("edge portraits agree with a brute-force scan") {
    std::mt19937_64 rng(24);
    for (int k = 0; k < 60; ++k) {
      const RepeatedGame g(oracle::random_payoffs(rng), oracle::random_rounds(rng));
      const Mat4q a = payoff_matrix(g);
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
          const EdgePortrait e = edge_dynamics(a, Strategy(i), Strategy(j));
          const auto roots = oracle::edge_roots(to_double(a), i, j);
          if (e.kind == EdgeKind::StableInterior || e.kind == EdgeKind::UnstableInterior) {
            REQUIRE(e.share.has_value());
            if (*e.share > oracle::frac(1, 1000) && *e.share < oracle::frac(999, 1000)) {
              REQUIRE(roots.size() == 1);
              CHECK(roots[0].share == doctest::Approx(e.share->get_d()).epsilon(1e-7));
              CHECK(roots[0].stable == (e.kind == EdgeKind::StableInterior));
            }
            CHECK(replicator_rhs(*e.fixed_point, a).isZero());
          } else if (e.kind != EdgeKind::Neutral) {
            CHECK(roots.empty());
          }
        }
    }
  }

  TEST_CASE("edge examples") {
    const RepeatedGame g = make("6", "4", "3", "2", 5);
    const Mat4q a = payoff_matrix(g);
    const EdgePortrait e14 = edge_dynamics(a, Strategy::AllC, Strategy::AllD);
    CHECK(e14.kind == EdgeKind::StableInterior);
    CHECK(*e14.share == oracle::frac(1, 3));
    CHECK(edge_dynamics(a, Strategy::AllC, Strategy::Tft).kind == EdgeKind::Neutral);
    CHECK(edge_dynamics(a, Strategy::Stft, Strategy::AllD).kind == EdgeKind::Neutral);
    CHECK_THROWS_AS(edge_dynamics(a, Strategy::Tft, Strategy::Tft), std::invalid_argument);
  }

  TEST_CASE("ratio constants") {
    const RatioConstants b2 = ratio_constants(reduced_matrix(make("6", "4", "3", "2", 2)));
    CHECK(b2.b1 == 2);
    CHECK(b2.b2 == oracle::frac(1, 2));
    const RatioConstants b8 = ratio_constants(reduced_matrix(make("6", "4", "3", "2", 8)));
    CHECK(b8.b1 == oracle::frac(5, 7));
    CHECK(b8.b2 == oracle::frac(8, 7));
    std::mt19937_64 rng(25);
    for (int k = 0; k < 300; ++k) {
      const RepeatedGame g(oracle::random_payoffs(rng), oracle::random_rounds(rng));
      const Mat4q ar = reduced_matrix(g);
      const RatioConstants b = ratio_constants(ar);
      CHECK(b.b2 > 0);
      CHECK(sgn(b.b1) == sgn(Rational(ar(1, 2) - ar(0, 2))));
    }
  }

  TEST_CASE("ratio derivatives") {
    const RepeatedGame g = make("6", "4", "3", "2", 8);
    const Mat4q arq = reduced_matrix(g);
    const Mat4d ar = to_double(arq);
    const RatioConstants b = ratio_constants(arq);

    Vec4q on_plane;
    on_plane << 2, 3, 7, 7 * b.b1;
    on_plane /= on_plane.sum();
    CHECK(ratio_derivative(on_plane, arq, Ratio::X1OverX2) == 0);

    const Vec4d d14 = with_ratios(2 * b.b2.get_d(), 2 * b.b1.get_d(), 0.2, 0.2);
    CHECK(ratio_derivative(d14, ar, Ratio::X1OverX2) > 0);
    CHECK(ratio_derivative(d14, ar, Ratio::X4OverX3) > 0);
    CHECK_THROWS_AS(ratio_derivative(Vec4d(0.5, 0, 0.5, 0), ar, Ratio::X1OverX2),
                    std::invalid_argument);

    Rng rng(26);
    for (int k = 0; k < 200; ++k) {
      const Vec4d x = sample_simplex(rng);
      CHECK(ratio_derivative(x, ar, Ratio::X1OverX2) ==
            doctest::Approx(oracle::ratio_rate(x, ar, 0, 1)).epsilon(1e-9));
      CHECK(ratio_derivative(x, ar, Ratio::X4OverX3) ==
            doctest::Approx(oracle::ratio_rate(x, ar, 3, 2)).epsilon(1e-9));
    }
  }

  TEST_CASE("ratio derivative matches a trajectory finite difference") {
    const Mat4d ar = to_double(reduced_matrix(make("6", "4", "3", "2", 8)));
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_max = 0.5;
    const Trajectory tr = integrate_trajectory(Vec4d(0.1, 0.3, 0.2, 0.4), ar, cfg);
    REQUIRE(tr.x.size() > 300);
    for (std::size_t i = 100; i < 300; i += 50) {
      const double fd = (tr.x[i + 1](0) / tr.x[i + 1](1) - tr.x[i - 1](0) / tr.x[i - 1](1)) /
                        (tr.t[i + 1] - tr.t[i - 1]);
      CHECK(fd == doctest::Approx(ratio_derivative(tr.x[i], ar, Ratio::X1OverX2)).epsilon(1e-5));
    }
  }

  TEST_CASE("zones") {
    const RepeatedGame g = make("6", "4", "3", "2", 2);
    const RatioConstants b = ratio_constants(reduced_matrix(g));
    CHECK(zone_of(Vec4d(0.4, 0.2, 0.1, 0.3), b) == Zone::D14);
    CHECK(zone_of(interior_equilibrium(g)->point, b) == Zone::LInt);
    CHECK(zone_of(Vec4d(0.5, 0.5, 0, 0), b) == Zone::Boundary);
    CHECK(zone_of(with_ratios(0.25, 1.0, 0.3, 0.3), b) == Zone::D23);
    CHECK(zone_of(with_ratios(1.0, 1.0, 0.3, 0.3), b) == Zone::Y14);
    CHECK(zone_of(with_ratios(0.25, 3.0, 0.3, 0.3), b) == Zone::Y23);
    Vec4q p11;
    p11 << 2, 1, 1, b.b1;
    p11 /= p11.sum();
    CHECK(zone_of(p11, b) == Zone::P11);

    const RatioConstants neg = ratio_constants(reduced_matrix(make("3", "2.5", "1", "0", 3)));
    CHECK(neg.b1 <= 0);
    Rng rng(27);
    for (int k = 0; k < 1000; ++k) {
      const Zone z = zone_of(sample_simplex(rng), neg);
      CHECK(z != Zone::D23);
      CHECK(z != Zone::Y14);
    }
  }

  TEST_CASE("zone invariance and monotone ratios in the small-reward regime") {
    const RepeatedGame g = make("6", "4", "3", "2", 8);
    const Mat4q arq = reduced_matrix(g);
    const Mat4d ar = to_double(arq);
    const RatioConstants b = ratio_constants(arq);
    Rng rng(28);
    int d14 = 0, d23 = 0;
    while (d14 < 100 || d23 < 100) {
      const Vec4d x0 = sample_simplex(rng);
      const Zone z0 = zone_of(x0, b);
      if (z0 == Zone::D14 && d14 < 100) {
        ++d14;
      } else if (z0 == Zone::D23 && d23 < 100) {
        ++d23;
      } else {
        continue;
      }
      bool stays = true, monotone = true;
      Vec4d prev = x0;
      integrate(x0, ar, {}, [&](double t, const Vec4d& x) {
        if (t == 0.0) return;
        const Zone z = zone_of(x, b);
        if (z != z0 && z != Zone::Boundary) stays = false;
        if (z == Zone::Boundary) return;
        const double sign = z0 == Zone::D14 ? 1.0 : -1.0;
        const double r12 = x(0) / x(1), p12 = prev(0) / prev(1);
        const double r43 = x(3) / x(2), p43 = prev(3) / prev(2);
        if (sign * (r12 - p12) < -1e-9 * std::max(1.0, p12)) monotone = false;
        if (sign * (r43 - p43) < -1e-9 * std::max(1.0, p43)) monotone = false;
        prev = x;
      });
      CHECK(stays);
      CHECK(monotone);
    }
  }

  TEST_CASE("line restriction") {
    const RepeatedGame g = make("6", "4", "3", "2", 2);
    const Mat4q ar = reduced_matrix(g);
    const LineRestriction lr = line_restriction(ar);
    CHECK(lr.k > 0);
    CHECK(lr.s / lr.r == oracle::frac(14, 33));
    CHECK(line_restricted_rhs(Rational(lr.s / lr.r), lr) == 0);
    CHECK(line_restricted_rhs(Rational(lr.g / lr.f), lr) == 0);
    CHECK_THROWS_AS(line_restriction(reduced_matrix(make("3", "2.9", "1", "0", 6))),
                    std::domain_error);

    std::mt19937_64 rng(29);
    int checked = 0;
    while (checked < 40) {
      const RepeatedGame h(oracle::random_payoffs(rng), oracle::random_rounds(rng));
      const Mat4q a = reduced_matrix(h);
      const RatioConstants b = ratio_constants(a);
      if (b.b1 <= 0) continue;
      const LineRestriction l = line_restriction(a);
      CHECK(l.k > 0);
      const Rational top = 1 / (1 + b.b2);
      for (int i = 1; i < 10; ++i) {
        const Rational x2 = top * oracle::frac(i, 10);
        const Vec4q p = line_point(x2, b);
        CHECK(p.sum() == 1);
        CHECK(line_restricted_rhs(x2, l) == oracle::rhs<Rational>(p, a)(1));
      }
      ++checked;
    }
  }

  TEST_CASE("flow along the interior line points at x_int") {
    const RepeatedGame g = make("6", "4", "3", "2", 8);
    const Mat4q ar = reduced_matrix(g);
    const RatioConstants b = ratio_constants(ar);
    const LineRestriction l = line_restriction(ar);
    const Vec4q xq = interior_equilibrium(g)->point;
    const Vec4d xi = to_double(xq);
    const Rational top = 1 / (1 + b.b2);
    for (int i = 1; i < 10; ++i) {
      const Rational x2 = top * oracle::frac(i, 10);
      const Rational v = line_restricted_rhs(x2, l);
      if (x2 < xq(1)) CHECK(v > 0);
      if (x2 > xq(1)) CHECK(v < 0);
    }
    for (int i : {2, 5, 8}) {
      const Vec4d x0 = to_double(line_point(top * oracle::frac(i, 10), b));
      IntegratorConfig cfg;
      cfg.t_max = 1.0;
      const IntegrationSummary s = integrate(x0, to_double(ar), cfg);
      CHECK((s.terminal - xi).norm() < (x0 - xi).norm());
    }
  }

  TEST_CASE("trajectory recording") {
    const Mat4d a = to_double(payoff_matrix(make("6", "4", "3", "2", 8)));
    IntegratorConfig cfg;
    cfg.t_max = 5.0;
    const Trajectory tr = integrate_trajectory(Vec4d(0.1, 0.2, 0.3, 0.4), a, cfg, 7);
    REQUIRE(tr.t.size() == tr.x.size());
    for (std::size_t i = 1; i < tr.t.size(); ++i) CHECK(tr.t[i] > tr.t[i - 1]);
    CHECK(tr.t.back() == tr.summary.t);
    CHECK(tr.summary.status == TerminalStatus::MaxTime);
    CHECK_THROWS_AS(integrate_trajectory(Vec4d(0.1, 0.2, 0.3, 0.4), a, cfg, 0),
                    std::invalid_argument);
  }

  TEST_CASE("tail checkpoints cover the last decade") {
    const Mat4d a = to_double(payoff_matrix(make("3", "2.1", "1", "0", 6)));
    IntegratorConfig cfg;
    cfg.t_max = 100.0;
    const IntegrationSummary s = integrate(Vec4d(0.1, 0.2, 0.3, 0.4), a, cfg);
    if (s.status == TerminalStatus::MaxTime) {
      REQUIRE(s.tail_norms.size() == 21);
      CHECK(s.tail_norms.front().t == doctest::Approx(10.0));
      CHECK(s.tail_norms.back().t == doctest::Approx(100.0));
    }
  }
}
