#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snowdrift/dynamics.hpp"
#include "snowdrift/game.hpp"

namespace snowdrift {

enum class Label { P1, P2, P3, P4, X13, X14, X23, X24, XInt, X12, X34, X123, LInt };
const char* to_string(Label l);
std::optional<Label> label_from_string(const std::string& s);
bool is_continuum(Label l);

struct Equilibrium {
  Label label;
  Vec4q point;
};

/// A segment start + t (end - start), t in [0, 1] (or (0, 1) when open).
/// For X12 and X34 the parameter is the share of p1 (resp. p3).
struct Continuum {
  Label label;
  Vec4q start;
  Vec4q end;
  bool closed = true;
  /// X123 only: coefficients c with c . x = 0 on the face x4 = 0.
  std::optional<Vec4q> plane;

  Vec4q at(const Rational& t) const { return start + t * (end - start); }
};

struct InteriorEquilibrium {
  Vec4q point;
  Continuum line;       // L_int: x1 = b2 x2, x4 = b1 x3
  Rational normalizer;  // r
};

struct EquilibriumCatalog {
  RegimeClass regime;
  std::vector<Equilibrium> points;    // vertices first, then boundary points, then x_int
  std::vector<Continuum> continua;    // X12, X34 and X123 when present
  std::optional<InteriorEquilibrium> interior;

  const Equilibrium* find(Label l) const;
  const Continuum* find_continuum(Label l) const;
};

/// Equilibria on the boundary of the simplex for the game's regime.
EquilibriumCatalog boundary_catalog(const RepeatedGame& game);

/// The unique interior equilibrium. Requires R < (ceil((m-2)/2)S+floor(m/2)T)/(m-1) and
/// a'31 a'42 < a'32 a'41; absent when the closed form leaves the open simplex.
std::optional<InteriorEquilibrium> interior_equilibrium(const RepeatedGame& game);

/// Boundary catalog plus the interior equilibrium.
EquilibriumCatalog full_catalog(const RepeatedGame& game);

/// Interior of the face x4 = 0 intersected with the plane a'31 x1 + a'32 x2 = a'13 x3.
template <class Scalar>
bool x123_membership(const Vec4<Scalar>& x, const Mat4<Scalar>& ar) {
  if (x(3) != Scalar(0)) return false;
  for (int i = 0; i < 3; ++i) {
    if (!(x(i) > Scalar(0))) return false;
  }
  const Scalar lhs = ar(2, 0) * x(0) + ar(2, 1) * x(1) - ar(0, 2) * x(2);
  const Scalar tol = std::is_same_v<Scalar, Rational> ? Scalar(0) : Scalar(1e-12);
  return abs_value(lhs) <= tol;
}

/// Max-norm of the replicator field at x.
template <class Scalar>
Scalar residual(const Vec4<Scalar>& x, const Mat4<Scalar>& a) {
  return max_norm<Scalar>(replicator_rhs(x, a));
}

}  // namespace snowdrift
