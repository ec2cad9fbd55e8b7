#include "snowdrift/equilibria.hpp"

#include <array>
#include <stdexcept>

namespace snowdrift {

namespace {

constexpr std::array<std::pair<Label, const char*>, 13> kLabelNames{{
    {Label::P1, "p1"},
    {Label::P2, "p2"},
    {Label::P3, "p3"},
    {Label::P4, "p4"},
    {Label::X13, "x13"},
    {Label::X14, "x14"},
    {Label::X23, "x23"},
    {Label::X24, "x24"},
    {Label::XInt, "x_int"},
    {Label::X12, "X12"},
    {Label::X34, "X34"},
    {Label::X123, "X123"},
    {Label::LInt, "L_int"},
}};

Vec4q normalized(Vec4q v) {
  const Rational total = v.sum();
  if (total == 0) throw std::logic_error("cannot normalize a zero vector");
  return v / total;
}

Vec4q pair_point(int i, const Rational& wi, int j, const Rational& wj) {
  Vec4q v = Vec4q::Zero();
  v(i) = wi;
  v(j) = wj;
  return normalized(v);
}

// Points where a'31 x1 + a'32 x2 - a'13 x3 = 0 meets the edges of the face x4 = 0.
Continuum x123_segment(const Mat4q& ar) {
  const Rational c1 = ar(2, 0);
  const Rational c2 = ar(2, 1);
  const Rational c3 = -ar(0, 2);
  std::vector<Vec4q> ends;
  auto add_if_inside = [&](int i, const Rational& ci, int j, const Rational& cj) {
    // c_i x_i + c_j x_j = 0 with x_i + x_j = 1 and both shares strictly positive.
    if ((ci > 0 && cj < 0) || (ci < 0 && cj > 0)) ends.push_back(pair_point(i, -cj, j, ci));
  };
  add_if_inside(0, c1, 2, c3);
  add_if_inside(1, c2, 2, c3);
  add_if_inside(0, c1, 1, c2);
  if (ends.size() != 2) throw std::logic_error("X123 plane does not cut the face in a segment");
  Continuum seg{Label::X123, ends[0], ends[1], false, std::nullopt};
  Vec4q plane;
  plane << c1, c2, c3, 0;
  seg.plane = plane;
  return seg;
}

}  // namespace

const char* to_string(Label l) {
  for (const auto& [label, name] : kLabelNames) {
    if (label == l) return name;
  }
  return "?";
}

std::optional<Label> label_from_string(const std::string& s) {
  for (const auto& [label, name] : kLabelNames) {
    if (s == name) return label;
  }
  return std::nullopt;
}

bool is_continuum(Label l) {
  return l == Label::X12 || l == Label::X34 || l == Label::X123 || l == Label::LInt;
}

const Equilibrium* EquilibriumCatalog::find(Label l) const {
  for (const auto& e : points) {
    if (e.label == l) return &e;
  }
  return nullptr;
}

const Continuum* EquilibriumCatalog::find_continuum(Label l) const {
  for (const auto& c : continua) {
    if (c.label == l) return &c;
  }
  return nullptr;
}

EquilibriumCatalog boundary_catalog(const RepeatedGame& game) {
  const Mat4q ar = reduced_matrix(game);
  const auto& [T, R, S, P] = game.payoffs();

  EquilibriumCatalog cat;
  cat.regime = classify_regime(game);
  const int eq_case = cat.regime.equilibrium_case;

  cat.points.push_back({Label::P1, vertex(Strategy::AllC)});
  cat.points.push_back({Label::P2, vertex(Strategy::Tft)});
  cat.points.push_back({Label::P3, vertex(Strategy::Stft)});
  cat.points.push_back({Label::P4, vertex(Strategy::AllD)});

  cat.points.push_back({Label::X13, pair_point(0, ar(0, 2), 2, ar(2, 0))});
  cat.points.push_back({Label::X14, pair_point(0, S - P, 3, T - R)});
  if (eq_case <= 3) cat.points.push_back({Label::X23, pair_point(1, ar(1, 2), 2, ar(2, 1))});
  if (eq_case == 1) cat.points.push_back({Label::X24, pair_point(1, ar(1, 3), 3, ar(3, 1))});

  cat.continua.push_back({Label::X12, vertex(Strategy::Tft), vertex(Strategy::AllC), true, std::nullopt});
  cat.continua.push_back({Label::X34, vertex(Strategy::AllD), vertex(Strategy::Stft), true, std::nullopt});
  if (eq_case == 3 || eq_case == 4) cat.continua.push_back(x123_segment(ar));
  return cat;
}

std::optional<InteriorEquilibrium> interior_equilibrium(const RepeatedGame& game) {
  const Mat4q ar = reduced_matrix(game);
  const RatioConstants b = ratio_constants(ar);
  if (b.b1 <= 0) return std::nullopt;

  const Rational d1 = ar(0, 2) * ar(1, 3) - ar(0, 3) * ar(1, 2);
  const Rational d2 = ar(2, 0) * ar(3, 1) - ar(2, 1) * ar(3, 0);
  const Rational r = d1 * (ar(2, 0) - ar(3, 0) + ar(3, 1) - ar(2, 1)) +
                     d2 * (ar(0, 2) - ar(1, 2) + ar(1, 3) - ar(0, 3));
  if (d2 >= 0) return std::nullopt;
  if (r <= 0) throw std::logic_error("interior normalizer r must be positive");

  InteriorEquilibrium out;
  out.normalizer = r;
  out.point << (ar(3, 1) - ar(2, 1)) * d1, (ar(2, 0) - ar(3, 0)) * d1,
               (ar(1, 3) - ar(0, 3)) * d2, (ar(0, 2) - ar(1, 2)) * d2;
  out.point /= r;
  for (int i = 0; i < 4; ++i)
    if (out.point(i) <= 0) return std::nullopt;

  Vec4q top;
  top << b.b2, 1, 0, 0;
  Vec4q bottom;
  bottom << 0, 0, 1, b.b1;
  out.line = Continuum{Label::LInt, top / (1 + b.b2), bottom / (1 + b.b1), false, std::nullopt};
  return out;
}

EquilibriumCatalog full_catalog(const RepeatedGame& game) {
  EquilibriumCatalog cat = boundary_catalog(game);
  cat.interior = interior_equilibrium(game);
  if (cat.interior) cat.points.push_back({Label::XInt, cat.interior->point});
  return cat;
}

}  // namespace snowdrift
