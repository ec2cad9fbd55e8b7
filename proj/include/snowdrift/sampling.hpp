#pragma once

#include <random>
#include <vector>

#include "snowdrift/linalg.hpp"

namespace snowdrift {

using Rng = std::mt19937_64;

/// Uniform point on the face spanned by the listed vertices (Dirichlet(1,...,1)).
inline Vec4d sample_face(Rng& rng, const std::vector<int>& support) {
  std::exponential_distribution<double> expo(1.0);
  Vec4d y = Vec4d::Zero();
  double total = 0.0;
  for (int i : support) {
    y(i) = expo(rng);
    total += y(i);
  }
  return y / total;
}

/// Uniform point in the simplex.
inline Vec4d sample_simplex(Rng& rng) { return sample_face(rng, {0, 1, 2, 3}); }

}  // namespace snowdrift
