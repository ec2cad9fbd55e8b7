#include "snowdrift/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "snowdrift/sampling.hpp"

namespace snowdrift {

std::optional<std::pair<Rational, Rational>> neutral_edge_nash_range(
    const Mat4q& ar, int hi, int lo, const std::vector<int>& opponents) {
  Rational lower = 0;
  Rational upper = 1;
  for (int k : opponents) {
    if (k == hi || k == lo) continue;
    // on_lo + t (on_hi - on_lo) <= 0
    const Rational on_lo = ar(k, lo);
    const Rational slope = ar(k, hi) - on_lo;
    if (slope > 0) {
      upper = std::min(upper, Rational(-on_lo / slope));
    } else if (slope < 0) {
      lower = std::max(lower, Rational(-on_lo / slope));
    } else if (on_lo > 0) {
      return std::nullopt;
    }
  }
  if (upper < lower) return std::nullopt;
  return std::make_pair(lower, upper);
}

NashInterval nash_interval_x12(const RepeatedGame& game) {
  NashInterval out;
  const auto range = neutral_edge_nash_range(reduced_matrix(game), 0, 1, {0, 1, 2, 3});
  if (!range) return out;
  if (range->first != 0) throw std::logic_error("X12 Nash set does not contain its p2 end");
  out.empty = false;
  out.upper = range->second;
  return out;
}

SingletonNashFlags singleton_nash_flags(const RepeatedGame& game) {
  const auto th = regime_thresholds(game);
  const Rational& R = game.payoffs().R;
  SingletonNashFlags f;
  f.x23 = R < th.midpoint || (!game.even_rounds() && R == th.midpoint);
  return f;
}

namespace {

// Minimum of -(y - x)^T A (y - x) over the simplex spanned by the given vertices.
double min_over_simplex(const Vec4d& x, const Mat4d& a, const std::vector<int>& verts) {
  auto phi = [&](const Vec4d& y) { return -(y - x).dot(a * (y - x)); };
  double best = INFINITY;
  std::vector<Vec4d> v;
  for (int i : verts) v.push_back(vertex<double>(Strategy(i)));
  for (const Vec4d& y : v) best = std::min(best, phi(y));
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const Vec4d d = v[i] - x;
      const Vec4d e = v[j] - v[i];
      const double c2 = -e.dot(a * e);
      const double c1 = -(d.dot(a * e) + e.dot(a * d));
      if (c2 > 0) {
        const double t = -c1 / (2 * c2);
        if (t > 0 && t < 1) best = std::min(best, phi(v[i] + t * e));
      }
    }
  if (v.size() == 3) {
    const Vec4d d = v[0] - x;
    const Vec4d e1 = v[1] - v[0];
    const Vec4d e2 = v[2] - v[0];
    const Mat4d s = a + a.transpose();
    Eigen::Matrix2d h;
    h << -e1.dot(s * e1), -e1.dot(s * e2), -e2.dot(s * e1), -e2.dot(s * e2);
    const Eigen::Vector2d g(-d.dot(s * e1), -d.dot(s * e2));
    const double det = h.determinant();
    if (det > 0 && h(0, 0) > 0) {
      const Eigen::Vector2d st((h(0, 1) * g(1) - h(1, 1) * g(0)) / det,
                               (h(1, 0) * g(0) - h(0, 0) * g(1)) / det);
      if (st(0) > 0 && st(1) > 0 && st.sum() < 1) best = std::min(best, phi(v[0] + st(0) * e1 + st(1) * e2));
    }
  }
  return best;
}

}  // namespace

EssReport check_ess(const Vec4d& x, const Mat4d& a, int n_samples, std::uint64_t seed) {
  require_simplex(x, "ESS candidate");
  EssReport rep;
  rep.seed = seed;
  const NashReport nash = is_nash<double>(x, a);
  rep.condition1 = nash.is_nash;
  if (!rep.condition1) return rep;

  const Vec4d fitness = a * x;
  const double best = fitness.maxCoeff();
  const double slack = 1e-9 * std::max(1.0, std::abs(best));
  std::vector<int> support;
  for (int i = 0; i < 4; ++i) {
    if (fitness(i) >= best - slack) support.push_back(i);
  }
  rep.face_dimension = static_cast<int>(support.size()) - 1;

  Rng rng(seed);
  rep.condition2 = true;
  for (int k = 0; k < n_samples; ++k) {
    const Vec4d y = sample_face(rng, support);
    const Vec4d d = y - x;
    if (d.lpNorm<Eigen::Infinity>() < 1e-9) continue;
    ++rep.sample_count;
    // On the face, x^T A y - y^T A y = -(y - x)^T A (y - x).
    if (!(-d.dot(a * d) > 0.0)) {
      rep.condition2 = false;
      break;
    }
  }

  // The sign is constant along rays from x, so the facets of the face that miss x decide it.
  const double tol = 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff());
  for (int k : support) {
    if (!rep.condition2 || x(k) <= 1e-12) continue;
    std::vector<int> facet;
    for (int i : support)
      if (i != k) facet.push_back(i);
    if (!facet.empty() && min_over_simplex(x, a, facet) <= tol) rep.condition2 = false;
  }
  return rep;
}

Mat3d reduced_jacobian(const Vec4d& x, const Mat4d& a) {
  const Vec4d fitness = a * x;
  const double mean = x.dot(fitness);
  const Vec4d mean_grad = (a + a.transpose()) * x;
  Mat4d full;
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) {
      full(i, k) = x(i) * (a(i, k) - mean_grad(k));
      if (i == k) full(i, k) += fitness(i) - mean;
    }
  }
  Mat3d j;
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) j(i, k) = full(i, k) - full(i, 3);
  }
  return j;
}

Mat3d reduced_jacobian_fd(const Vec4d& x, const Mat4d& a, double h) {
  auto field = [&](const Eigen::Vector3d& z) {
    Vec4d full;
    full << z(0), z(1), z(2), 1.0 - z.sum();
    return Eigen::Vector3d(replicator_rhs(full, a).head<3>());
  };
  const Eigen::Vector3d z0 = x.head<3>();
  const Eigen::Vector3d g0 = field(z0);
  Mat3d j;
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector3d z = z0;
    z(k) += h;
    j.col(k) = (field(z) - g0) / h;
  }
  return j;
}

InteriorSpectrum spectrum_of(const Mat3d& j) {
  InteriorSpectrum s;
  s.a = -j.trace();
  s.b = j(0, 0) * j(1, 1) - j(0, 1) * j(1, 0) + j(0, 0) * j(2, 2) - j(0, 2) * j(2, 0) +
        j(1, 1) * j(2, 2) - j(1, 2) * j(2, 1);
  s.c = -j.determinant();

  Eigen::EigenSolver<Mat3d> solver(j, false);
  const auto values = solver.eigenvalues();
  for (int i = 0; i < 3; ++i) {
    s.eigenvalues[i] = values(i).real();
    s.max_imag = std::max(s.max_imag, std::abs(values(i).imag()));
    if (values(i).real() < 0) ++s.negative;
    if (values(i).real() > 0) ++s.positive;
  }
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
  return s;
}

InteriorSpectrum interior_spectrum(const RepeatedGame& game) {
  const auto interior = interior_equilibrium(game);
  if (!interior) throw std::domain_error("no interior equilibrium for these payoffs");
  return spectrum_of(reduced_jacobian(to_double(interior->point), to_double(reduced_matrix(game))));
}

}  // namespace snowdrift
