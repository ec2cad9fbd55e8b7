#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "snowdrift/convergence.hpp"
#include "snowdrift/sampling.hpp"

using namespace snowdrift;

namespace {

RepeatedGame make(const char* T, const char* R, const char* S, const char* P, int m) {
  return RepeatedGame({parse_rational(T), parse_rational(R), parse_rational(S), parse_rational(P)},
                      m);
}

bool has_label(const LimitPrediction& p, Label l) {
  for (const auto& c : p.candidates)
    if (c.label == l) return true;
  return false;
}

// Draws a start in the requested zone by rejection.
Vec4d start_in(Zone zone, const RatioConstants& b, Rng& rng) {
  for (;;) {
    const Vec4d x = sample_simplex(rng);
    if (zone_of(x, b) == zone) return x;
  }
}

}  // namespace

TEST_SUITE("convergence") {
  TEST_CASE("prediction examples") {
    const RepeatedGame g8 = make("6", "4", "3", "2", 8);
    const LimitPrediction d14 = predict_limit(Vec4d(0.4, 0.2, 0.1, 0.3), g8);
    REQUIRE(d14.candidates.size() == 1);
    CHECK(d14.candidates[0].label == Label::X14);
    CHECK(d14.deterministic);

    const LimitPrediction mixed = predict_limit(Vec4d(0.25, 0.25, 0.25, 0.25), g8);
    CHECK_FALSE(mixed.deterministic);

    const RepeatedGame g3 = make("3", "2.5", "1", "0", 3);
    const LimitPrediction t4 = predict_limit(Vec4d(0.25, 0.25, 0.25, 0.25), g3);
    CHECK(has_label(t4, Label::X14));
    CHECK(has_label(t4, Label::X12));
    CHECK(t4.candidates.size() == 2);

    const LimitPrediction vertex = predict_limit(Vec4d(1, 0, 0, 0), g8);
    REQUIRE(vertex.candidates.size() == 1);
    CHECK(vertex.candidates[0].label == Label::P1);
    CHECK(vertex.deterministic);

    const LimitPrediction edge = predict_limit(Vec4d(0.5, 0, 0, 0.5), g8);
    REQUIRE(edge.candidates.size() == 1);
    CHECK(edge.candidates[0].label == Label::X14);

    const LimitPrediction neutral = predict_limit(Vec4d(0, 0, 0.25, 0.75), g8);
    REQUIRE(neutral.candidates.size() == 1);
    CHECK(neutral.candidates[0].label == Label::X34);
    CHECK(neutral.deterministic);
  }

  TEST_CASE("prediction by theorem") {
    const LimitPrediction t2 = predict_limit(Vec4d(0.25, 0.25, 0.25, 0.25), make("3", "2.1", "1", "0", 6));
    CHECK(has_label(t2, Label::X14));
    CHECK(has_label(t2, Label::XInt));
    CHECK(has_label(t2, Label::X12));
    const LimitPrediction t23 = predict_limit(Vec4d(0.25, 0.25, 0.25, 0.25), make("3", "7/3", "1", "0", 4));
    CHECK(has_label(t23, Label::X123));
    CHECK_FALSE(has_label(t23, Label::XInt));
    const LimitPrediction t31 = predict_limit(Vec4d(0.25, 0.25, 0.25, 0.25), make("3", "2", "1", "0", 3));
    CHECK(has_label(t31, Label::X23));
    CHECK(has_label(t31, Label::X123));
    const LimitPrediction t32 = predict_limit(Vec4d(0.25, 0.25, 0.25, 0.25), make("3", "2.2", "1", "0", 3));
    REQUIRE(t32.candidates.size() == 1);
    CHECK(t32.candidates[0].label == Label::X14);
  }

  TEST_CASE("catalog matching") {
    const RepeatedGame g = make("6", "4", "3", "2", 8);
    const EquilibriumCatalog cat = full_catalog(g);
    const Vec4d x14 = to_double(cat.find(Label::X14)->point);
    const CatalogMatch near = match_catalog(x14 + Vec4d(1e-7, 0, 0, -1e-7), cat);
    CHECK(near.matched);
    CHECK(near.label == Label::X14);

    const CatalogMatch on_x12 = match_catalog(Vec4d(0.3, 0.7, 0, 0), cat);
    REQUIRE(on_x12.matched);
    CHECK(on_x12.label == Label::X12);
    REQUIRE(on_x12.parameter.has_value());
    CHECK(*on_x12.parameter == doctest::Approx(0.3));

    CHECK_FALSE(match_catalog(Vec4d(0.25, 0.25, 0.25, 0.25), cat).matched);
    const CatalogMatch p1 = match_catalog(Vec4d(1, 0, 0, 0), cat);
    CHECK(p1.label == Label::P1);
  }

  TEST_CASE("prediction containment") {
    LimitPrediction pred;
    pred.candidates.push_back({Label::X12, std::make_pair(Rational(0), oracle::frac(2, 5))});
    CatalogMatch inside{true, Label::X12, 0.3, 0.0};
    CatalogMatch outside{true, Label::X12, 0.6, 0.0};
    CatalogMatch p2{true, Label::P2, std::nullopt, 0.0};
    CatalogMatch p1{true, Label::P1, std::nullopt, 0.0};
    CHECK(prediction_contains(pred, inside));
    CHECK_FALSE(prediction_contains(pred, outside));
    CHECK(prediction_contains(pred, p2));
    CHECK_FALSE(prediction_contains(pred, p1));
    CHECK_FALSE(prediction_contains(pred, CatalogMatch{}));
  }

  TEST_CASE("runs to a limit") {
    const RepeatedGame g = make("6", "4", "3", "2", 8);
    const LimitRun edge = run_to_limit(Vec4d(0, 0, 0.4, 0.6), g, {});
    CHECK(edge.summary.status == TerminalStatus::Converged);
    CHECK(edge.summary.terminal == Vec4d(0, 0, 0.4, 0.6));
    CHECK(edge.match.label == Label::X34);
    CHECK(*edge.match.parameter == doctest::Approx(0.4));

    Rng rng(41);
    const RatioConstants b = ratio_constants(reduced_matrix(g));
    for (int k = 0; k < 20; ++k) {
      const LimitRun a = run_to_limit(start_in(Zone::D14, b, rng), g, {});
      CHECK(a.match.label == Label::X14);
      const LimitRun c = run_to_limit(start_in(Zone::D23, b, rng), g, {});
      CHECK(c.match.label == Label::X23);
    }
  }

  TEST_CASE("boundary predictions hold on every face") {
    Rng rng(42);
    for (const char* R : {"4", "4.6", "5.5"}) {
      const RepeatedGame g = make("6", R, "3", "2", 5);
      const Mat4d ar = to_double(reduced_matrix(g));
      const EquilibriumCatalog cat = full_catalog(g);
      for (int drop = 0; drop < 4; ++drop) {
        std::vector<int> face;
        for (int i = 0; i < 4; ++i)
          if (i != drop) face.push_back(i);
        for (int k = 0; k < 15; ++k) {
          const Vec4d x0 = sample_face(rng, face);
          IntegratorConfig cfg;
          cfg.t_max = 1e5;
          const LimitRun run = run_to_limit(x0, ar, cat, cfg);
          CHECK(run.summary.status == TerminalStatus::Converged);
          CHECK(prediction_contains(predict_limit(x0, g), run.match));
        }
      }
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
          const Vec4d x0 = sample_face(rng, {i, j});
          const LimitRun run = run_to_limit(x0, ar, cat, {});
          CHECK(prediction_contains(predict_limit(x0, g), run.match));
        }
    }
  }

  TEST_CASE("separatrix bisection") {
    const RepeatedGame g = make("6", "4", "3", "2", 8);
    const RatioConstants b = ratio_constants(reduced_matrix(g));
    Rng rng(43);
    const Vec4d a = start_in(Zone::D14, b, rng);
    const Vec4d c = start_in(Zone::D23, b, rng);
    const SeparatrixSample s = separatrix_bisect(a, c, g, {}, 50);
    CHECK(s.label_a == Label::X14);
    CHECK(s.label_b == Label::X23);
    CHECK(s.gap <= std::ldexp((a - c).norm(), -s.iterations) * (1 + 1e-12));
    CHECK(s.closest_to_interior < 1e-3);
    const Zone z = zone_of(s.point, b);
    CHECK(z != Zone::D14);
    CHECK(z != Zone::D23);
    CHECK_THROWS_AS(separatrix_bisect(a, a, g, {}), SeparatrixError);
  }

  TEST_CASE("basin sampling") {
    const RepeatedGame g = make("6", "4", "3", "2", 8);
    const BasinStats none = basin_sample(g, 0, {}, 1);
    CHECK(none.n_samples == 0);
    CHECK(none.counts.empty());

    int records = 0;
    const BasinStats s = basin_sample(g, 200, {}, 7, [&](const BasinRecord&) { ++records; });
    CHECK(records == 200);
    CHECK(s.converged == 200);
    CHECK(s.violations == 0);
    CHECK(s.unmatched == 0);
    for (const auto& [label, n] : s.counts) CHECK((label == "x14" || label == "x23"));

    const BasinStats again = basin_sample(g, 200, {}, 7);
    CHECK(again.counts == s.counts);

    int off_target = 0;
    const BasinStats t4 = basin_sample(make("3", "2.5", "1", "0", 3), 200, {}, 8, [&](const BasinRecord& r) {
      if (r.run.summary.status != TerminalStatus::Converged) return;
      const Label l = r.run.match.label;
      if (l != Label::X14 && l != Label::X12 && l != Label::P2) ++off_target;
    });
    CHECK(t4.violations == 0);
    CHECK(off_target == 0);
    CHECK(t4.converged >= 198);
  }
}
