#pragma once
// Exact sampler for the corners of B_inf with label <= t, hence for the
// radius-t ball of the half-plane quadrangulation rooted at the added vertex.
//
// Each side of the bridge is walked exactly while its level is <= t.  Above t
// the walk is only followed through "bad" events (a grafted tree reaching a
// label <= t, or the walk returning to t): the escape law of the side gives
// the highest level M reached before the next bad event, and the level of that
// event below M has an explicit survival function.  Clean stretches carry no
// corner with label <= t and are never materialised.  Trees reaching down
// from high levels are cut at level 4t, where the number of entrances that
// still dip has an explicit generating function.

#include <cstdint>
#include <vector>

#include "halfplane/map.hpp"
#include "halfplane/rng.hpp"
#include "halfplane/schaeffer.hpp"

namespace hpq {

// Escape functions of one side above threshold t, written in u = level - t so
// that large levels keep full relative precision.
struct SideEscape {
  long double t;
  bool left;
  long double clean(long double u) const;      // h: no corner <= t ever again
  long double bad(long double u) const;        // 1 - h
  long double increment(long double u) const;  // h(u+1) - h(u)
  // Walking down from the top level t+u of an excursion, the probability of
  // passing level t+j without a bad event is descent(j) / descent(u).
  long double descent(long double u) const;
};

// One skip-mode step from level t+u.  clean: no bad event ever; reach: the
// walk hits t first; dip: the first bad event is a tree reaching a label <= t,
// grafted at level t+level (right side) or t+level+1 (left side, entered by an
// up-step).  capped: the excursion exceeds `cap` and is not followed.
struct Excursion {
  enum class Kind { clean, reach, dip, capped } kind;
  long level;
};
Excursion run_excursion(const SideEscape& e, long u, Rng& rng, long double cap);

struct BallCorners {
  int threshold = 0;
  std::vector<PhiCorner> corners;  // contour order, all labels <= threshold
  std::vector<char> is_tree_root;  // per vertex id: root of a grafted tree
  std::size_t right_begin = 0;     // first corner at a positive position
  int vertex_count = 1;            // including the added vertex 0
  std::uint64_t volume = 1;        // vertices with label <= threshold, root included
  double residual_risk = 0.0;      // bound on the probability of a capped excursion
  bool capped = false;             // an excursion exceeded the level cap
  std::uint64_t bad_events = 0;
};

struct BallSamplerOptions {
  bool keep_corners = true;         // false: only count the volume
  long double level_cap = 1.0e15L;  // excursions beyond this are reported, not followed
};

BallCorners sample_ball_corners(int threshold, Rng& rng, BallSamplerOptions opt = {});

// Phi applied to the sampled corners: the radius-t ball, with its labels.
struct LabelledBall {
  BallMap ball;
  std::vector<int> vertex_label;
  std::vector<int> vertex_index;     // corner vertex id -> map vertex
  std::vector<int> half_edge_index;  // chord 2k / 2k+1 -> map half-edge
};
LabelledBall ball_from_corners(const BallCorners& bc);

// The corners of a smaller ball: labels <= radius, same order.  `index`
// receives the new position of every kept corner (-1 when dropped).
BallCorners restrict_corners(const BallCorners& bc, int radius, std::vector<int>* index = nullptr);

// Level cap that keeps the expected residual risk of one ball below epsilon.
long double level_cap_for(int threshold, double epsilon);

LabelledBall sample_uihpq_ball(int radius, double epsilon, Rng& rng);

// Law of the number of dipping entrances at level `entry` of a rho^+_y tree
// conditioned to reach a label <= t (y > entry > t): probabilities of 1, 2, ...
std::vector<double> entrance_count_law(long double y, int entry, int t, int terms = 48);

}  // namespace hpq
