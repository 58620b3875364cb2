#pragma once
// Closed forms and elementary samplers: the boundary walk kernel, the tree
// weights w_k, the perimeter generating function, the bridge kernel S^(p),
// and samplers for rho_k, rho_k^+, walks and conditioned bridges.

#include <cstdint>
#include <optional>
#include <vector>

#include "halfplane/rational.hpp"
#include "halfplane/rng.hpp"
#include "halfplane/tree.hpp"

namespace hpq {

enum class Step { down, up };

// ---- exact quantities -------------------------------------------------------

Rational step_prob(int level, Step dir);
Rational w(int k);
Rational c_poly(int j);
// [z^p] of ((1-8z)^{3/2} - 1 + 12z) / (24 z^2), from the binomial series.
Rational wc_coefficient(int p);
// S^(steps)(i, j) in exact arithmetic (dynamic programming over levels).
Rational bridge_kernel_exact(int steps, int i, int j);
// Probability that the walk from n ever reaches a level <= m (m < n).
Rational hit_below_prob_exact(long n, long m);
// Probability that a rho^+_x tree has a label <= m (m < x).
Rational dip_prob_exact(long x, long m);

// ---- floating counterparts ---------------------------------------------------

inline double p_down(long n) { return static_cast<double>(n) / (2.0 * static_cast<double>(n + 2)); }
inline double p_up(long n) { return static_cast<double>(n + 4) / (2.0 * static_cast<double>(n + 2)); }
inline double w_of(double k) { return 2.0 - 4.0 / ((k + 1.0) * (k + 2.0)); }
// w_a - w_b for a >= b without cancellation.
long double w_gap(long double a, long double b);
double hit_below_prob(long n, long m);
double dip_prob(long x, long m);

// Probability that the bridge continuation from level y > t never produces a
// real corner with label <= t: the walk stays above t and no grafted tree dips
// to t.  Right side: the tree at the current vertex is included.  Left side
// (walking away from the root): trees sit at vertices entered by an up-step.
double future_clean_right(long double y, long double t);
double future_clean_left(long double y, long double t);

// S^(steps)(i, j) for all j at once, double precision.
std::vector<double> bridge_kernel_row(long steps, int i);
double bridge_kernel(long steps, int i, int j);
// E[X_n^2] under P_0, exact up to rounding.
double walk_second_moment(long steps);

// ---- samplers ---------------------------------------------------------------

struct TreeSampleOptions {
  std::size_t max_vertices = 0;  // 0: no cap
};

// Returns nullopt only when a cap is set and exceeded.
std::optional<LabelledTree> sample_tree_rho(int root_label, Rng& rng, TreeSampleOptions opt = {});
std::optional<LabelledTree> sample_tree_rho_plus(int root_label, Rng& rng, TreeSampleOptions opt = {});

// Offspring rule of rho^+ at label l: cumulative thresholds for
// child l-1, child l, child l+1; the remainder is "stop".
struct PlusOffspring {
  double to_minus, to_same, to_plus;
};
PlusOffspring plus_offspring(long label);

// Size-only rho^+ growth: number of edges, or nullopt once it exceeds `cap`.
std::optional<std::size_t> sample_rho_plus_size(int root_label, Rng& rng, std::size_t cap);

// Min label of a rho^+_root tree given that it is <= at_most (1 <= at_most <=
// root; at_most = root is no condition).  Closed-form inversion of
// P(min <= l) = (w_root - w_{root-l}) / w_root, valid for huge roots.
long sample_plus_min(long root, long at_most, Rng& rng);

std::vector<int> sample_walk(int x0, long steps, Rng& rng);

// Bridge of length 2p under the walk conditioned on X_{2p} = 0, by h-transform
// on a precomputed table of S^(m)(x, 0).  Levels above `level_cap` are treated
// as unreachable; the default cap leaves a neglected mass far below 1e-15.
class ConditionedBridgeSampler {
 public:
  explicit ConditionedBridgeSampler(int max_half_length, int level_cap = -1);
  std::vector<int> sample(int half_length, Rng& rng) const;
  int max_half_length() const { return max_p_; }
  double s_to_zero(int steps, int level) const;

 private:
  int max_p_;
  int cap_;
  std::vector<double> table_;  // [steps][level], steps in [0, 2 max_p]
};

// Half-perimeter of the free Boltzmann quadrangulation:
// P(p) = (3/4) c_p with c_p = 8^{-p} [z^p] W_c, tail sum (p+2) c_p / 2.
class PerimeterLaw {
 public:
  static double pmf(long p);
  static double tail(long p);  // P(P >= p)
  static long sample(Rng& rng);
};

}  // namespace hpq
