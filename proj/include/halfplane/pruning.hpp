#pragma once
// Simple-boundary machinery: pruning a quadrangulation with a general
// boundary down to its simple-boundary core and the pieces hanging from it,
// the free Boltzmann quadrangulation Q_f, and the exact boundary process of
// the half-plane model read along its simple core.
//
// Boundary positions run in the direction of the root: position 0 is the
// origin of the root half-edge, b_k is the boundary half-edge from position
// k to k+1 (inner face on its left).  A vertex occupying positions S erases
// [min S, max S); the survivors n_0 < n_1 < ... are the simple core, and the
// edges b_{n_{i-1}+1} .. b_{n_i - 1} (n_{-1} = -1) bound the piece q_i
// hanging at v_i = vertex of n_i.

#include <cstdint>
#include <optional>
#include <vector>

#include "halfplane/laws.hpp"
#include "halfplane/map.hpp"
#include "halfplane/rng.hpp"

namespace hpq {

struct PrunedDecomposition {
  PlanarMap core;                    // rooted at v_0 -> v_1
  std::vector<PlanarMap> hanging;    // q_i, rooted at b_{n_{i-1}+1}; single vertex when empty
  std::vector<int> survivors;        // n_i
  std::vector<int> boundary_vertex;  // original vertex at each position
  std::vector<int> core_vertex;      // original vertex -> core vertex (-1 off the core)
};

// Boundary half-edges b_0 .. b_{P-1} in root direction.
std::vector<int> root_direction_boundary(const PlanarMap& map);

PrunedDecomposition prune(const PlanarMap& map);

// Glue every q_i back at v_i, the boundary of q_i inserted before the core
// edge leaving v_i.  Uses the decomposition only.
PlanarMap reattach(const PrunedDecomposition& d);

// Distinct vertices along the outer face.
bool has_simple_boundary(const PlanarMap& map);

// ---- free Boltzmann quadrangulation -----------------------------------------

class FreeBoltzmannSampler {
 public:
  // Bridges up to this half-length come from a shared table; longer ones
  // build their own (exact, slower).
  explicit FreeBoltzmannSampler(int table_half_length = 256);

  // Half-perimeter from the exact law, then Phi of a positive treed bridge.
  PlanarMap sample(Rng& rng) const;

  struct AreaDraw {
    long half_perimeter = 0;
    std::size_t area = 0;   // exact unless censored
    bool censored = false;  // area > cap, or perimeter beyond the table: area unknown
    bool over_cap = false;  // censored because area > cap (so area >= cap holds)
  };
  // Area only: trees are grown size-only and abandoned past `area_cap`.
  AreaDraw sample_area(Rng& rng, std::size_t area_cap) const;

  int table_half_length() const { return bridges_.max_half_length(); }

 private:
  ConditionedBridgeSampler bridges_;
};

// ---- the half-plane boundary read along its simple core ---------------------

struct SimpleBoundarySample {
  std::vector<long> survivors;  // n_0 < n_1 < ... <= window
  std::vector<int> labels;      // X~_k = x_{n_k}: distance from the root vertex
  bool capped = false;          // an excursion beyond the level cap was not followed
  double residual_risk = 0.0;   // summed probability of such an excursion
  long future_steps = 0;        // walk steps taken after the window, both sides
};

// Exact survivor set of positions 0..window for the positive infinite treed
// bridge: the boundary walk x and the minima of its trees are drawn on
// [0, window]; the classes still open at the window edge are settled by the
// escape laws of the right side, and classes that never close by walking the
// left side until its relevant levels are final.
SimpleBoundarySample sample_simple_boundary(long window, Rng& rng, long double level_cap = 1.0e15L);

// Hanging perimeters n_i - n_{i-1} - 1, i >= 1.
std::vector<long> hanging_perimeters(const SimpleBoundarySample& s);

}  // namespace hpq
