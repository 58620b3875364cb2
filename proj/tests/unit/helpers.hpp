#pragma once
// Small builders and statistical checks shared by the unit tests.

#include <cmath>
#include <vector>

#include "halfplane/map.hpp"

namespace test {

// Path with k edges rooted at one end, root half-edge 0 -> 1.
inline hpq::PlanarMap path_map(int k) {
  if (k == 0) return {};
  std::vector<hpq::HalfEdge> he(static_cast<std::size_t>(2 * k));
  for (int i = 0; i < k; ++i) {
    he[2 * i] = {2 * i + 1, i + 1 < k ? 2 * (i + 1) : 2 * i + 1, i};
    he[2 * i + 1] = {2 * i, i > 0 ? 2 * (i - 1) + 1 : 0, i + 1};
  }
  return hpq::PlanarMap(k + 1, std::move(he), 0);
}

// Frequency within `sigmas` binomial standard errors of p.
inline bool near_probability(long hits, long trials, double p, double sigmas = 4.0) {
  const double f = static_cast<double>(hits) / static_cast<double>(trials);
  const double se = std::sqrt(p * (1 - p) / static_cast<double>(trials));
  return std::abs(f - p) <= sigmas * se + 1e-12;
}

}  // namespace test
