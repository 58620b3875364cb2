#pragma once
// Geodesic rays read off corner sequences, cutting maps along them, cut-point
// indicators of the staircase bridge, proper rays of unconstrained windows and
// the labels-as-limit probe.
//
// Corner sequences are in left-to-right contour order with the added vertex
// at label 0 and the cyclic successor rule, as produced by real_corners on a
// positive window or by the ball sampler.

#include <span>
#include <vector>

#include "halfplane/map.hpp"
#include "halfplane/rng.hpp"
#include "halfplane/schaeffer.hpp"
#include "halfplane/treed_bridge.hpp"

namespace hpq {

struct GeodesicRay {
  std::vector<int> corners;  // corners[i-1] = c_i, label i
  int depth = 0;
  bool certified = true;
  int start_label = 0;        // leftmost ray: n of the certifying gamma^n
  double residual_risk = 0.0;
};

// Per-vertex lookups shared by the ray constructions.
class CornerIndex {
 public:
  CornerIndex(std::span<const PhiCorner> corners, int vertex_count);
  std::span<const PhiCorner> corners() const { return corners_; }
  const std::vector<int>& successor() const { return successor_; }
  int first_corner(int vertex) const { return first_[vertex]; }
  int last_corner(int vertex) const { return last_[vertex]; }
  int vertex_of_successor(int corner) const;  // 0 for the added vertex

 private:
  std::span<const PhiCorner> corners_;
  std::vector<int> successor_, first_, last_;
};

// c_i = leftmost real corner labelled i, i = 1..depth.
GeodesicRay rightmost_ray(const CornerIndex& idx, int depth);

// gamma^n from the rightmost corner of the root of the leftmost tree with
// root label n, rightmost corners all the way down.  `tree_root[v]` flags the
// roots of grafted trees.
std::vector<int> gamma_n(const CornerIndex& idx, std::span<const char> tree_root, int n);

// Leftmost ray to `depth`: gamma^n for n = depth..max_start until some gamma^n
// meets the rightmost ray at a level >= depth, which pins every later gamma^n
// and the limit below that level.  certified = false when no n qualifies.
GeodesicRay leftmost_ray(const CornerIndex& idx, std::span<const char> tree_root, int depth, int max_start);

// Chain conditions: l(c_i) = i and the successor of c_{i+1} sits on v(c_i).
bool ray_well_formed(const CornerIndex& idx, const GeodesicRay& ray);

// Window versions.  Throws "uncertified leftmost corner" when the left end of
// the window is at a level <= depth; the residual risk is the escape bound.
GeodesicRay rightmost_ray(const TreedBridge& window, int depth);
GeodesicRay leftmost_ray(const TreedBridge& window, int depth);
std::vector<char> tree_root_flags(const CornerTable& table);

// Map half-edges e_1..e_d of a ray: e_i runs from v(c_{i-1}) to v(c_i).
std::vector<int> ray_half_edges(const GeodesicRay& ray, std::span<const int> half_edge_index);

// ---- cutting --------------------------------------------------------------

// Slit a map along a simple path e_1..e_D from the vertex of `root` (where the
// outer face follows `root` clockwise).  Path vertices v_0..v_{D-1} are
// doubled; v_D is kept whole.  The right copy of v_0 keeps `root`.
struct CutMap {
  PlanarMap map;
  std::vector<int> vertex_source;  // cut-map vertex -> original vertex
  std::vector<int> left_copy;      // original half-edge -> its left-side id
  int right_root = -1;
  int left_root = -1;  // left copy of e_1
};
CutMap cut_along_path(const PlanarMap& map, std::span<const int> path, int root);

// Component of `root` inside the kept vertices.
PlanarMap component_submap(const PlanarMap& map, const std::vector<char>& keep, int root);

struct PencilTriple {
  PlanarMap left, middle, right;
};
// Pieces of the map on either side of the two rays, restricted to labels
// <= max_label.  `labels` is indexed by map vertex.
PencilTriple pencil_split(const PlanarMap& map, std::span<const int> labels, std::span<const int> left_path,
                          std::span<const int> right_path, int max_label);

// Right of a single ray and everything else, both restricted.
struct RaySides {
  PlanarMap left, right;
};
RaySides split_along_ray(const PlanarMap& map, std::span<const int> labels, std::span<const int> path,
                         int max_label);

// ---- cut points -----------------------------------------------------------

// Staircase bridge x_i = |i| with a rho^+ tree at every -i: indicator (index
// k-1) that the leftmost label-k corner is the bridge vertex -k, i.e. no tree
// T(-i), i > k, reaches label k.  Tree minima are drawn by exact inversion;
// beyond level k_max only trees reaching k_max are visited.
std::vector<char> cut_points(int k_max, Rng& rng);
double cut_point_probability(int k);

// ---- unconstrained windows --------------------------------------------------

// Successor chain from the leftmost corner of `vertex`; labels drop by one.
// Stops at the first unresolved successor.
std::vector<int> proper_ray(const CornerTable& table, std::span<const int> forward_successor, int vertex);

struct LabelsLimitReport {
  long probes = 0;
  long holding = 0;
  int max_violation = 0;
  int trusted_radius = 0;
  double fraction() const { return probes ? static_cast<double>(holding) / static_cast<double>(probes) : 0.0; }
};
// Probes (x, z): x among trusted vertices within core_radius of the root, z
// on the trusted frontier, `sources` x's with `targets` z's each drawn
// uniformly.  Does d(x,z) - d(rho,z) equal l(x) - l(rho)?
LabelsLimitReport labels_as_limit_check(const WindowedMap& w, Rng& rng, int core_radius = 2, int sources = 8,
                                        int targets = 16);

}  // namespace hpq
