#pragma once
// Schaeffer-type constructions.
//
// Everything funnels into phi_from_corners: given the real corners of a treed
// bridge in contour order, link each corner to its successor and read the
// rotation system off the contour.  Around a vertex the counterclockwise order
// is: corners in reverse contour order, and inside one corner its out-chord
// followed by its in-chords, longest arc first.  The added vertex (id 0)
// receives its chords in contour order.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "halfplane/map.hpp"
#include "halfplane/treed_bridge.hpp"

namespace hpq {

constexpr int delta_vertex = 0;
constexpr int to_delta = -1;    // successor value: the added vertex
constexpr int unresolved = -2;  // successor value: outside the window

struct PhiCorner {
  int vertex;  // >= 1; 0 is reserved for the added vertex
  int label;
};

enum class SuccessorRule {
  cyclic,   // finite bridges and the positive infinite wrap rule
  forward,  // unconstrained infinite windows: no wrap, may be unresolved
};

struct PhiOutput {
  PlanarMap map;
  std::vector<int> successor;     // per corner: corner index, to_delta or unresolved
  std::vector<int> vertex_label;  // per vertex; entry 0 is the added vertex
  // Ids before compaction to the root component: -1 when dropped.
  std::vector<int> vertex_index;     // original vertex -> map vertex
  std::vector<int> half_edge_index;  // 2k / 2k+1 -> map half-edge
};

// Corners whose label equals delta_label + 1 link to the added vertex (cyclic
// rule only).  `root` is a half-edge id: 2k is corner k's chord oriented away
// from corner k, 2k+1 the reverse.  Unresolved corners draw no chord; the
// resulting map keeps the component of the root.
PhiOutput phi_from_corners(std::span<const PhiCorner> corners, int vertex_count, int delta_label,
                           SuccessorRule rule, int root);

std::vector<int> successors(std::span<const PhiCorner> corners, int delta_label, SuccessorRule rule);

// Real corners of a treed bridge with vertex ids, and where position 0 sits.
struct CornerTable {
  std::vector<PhiCorner> corners;
  std::vector<TbCorner> origin;     // same indexing: host data per corner
  std::vector<int> first_at_or_after;  // per bridge offset, first corner index at or after it
  int vertex_count = 1;             // including the added vertex
  long bridge_first = 0;            // position of first_at_or_after[0]
};
CornerTable real_corners(const TreedBridge& b);

struct PointedMap {
  PlanarMap map;
  int delta_label = 0;
  std::vector<int> vertex_label;  // real vertex labels; entry 0 = delta label
};

PointedMap phi_pointed(const TreedBridge& b);
PointedMap phi_positive(const TreedBridge& b);

// Radius-r ball of the image of a positive window, built from the corners
// with label <= r.  Residual risk: probability that some corner with label
// <= r lies outside the window, from the exact escape laws at both ends.
BallMap phi_infinite_positive_window(const TreedBridge& b, int radius);

// Map of an unconstrained window: chords whose successor lies inside the
// window.  Trusted vertices have every incident chord present.
struct WindowedMap {
  PlanarMap map;
  std::vector<int> vertex_label;
  std::vector<char> trusted;
  int trusted_radius = 0;  // largest r with the whole r-ball trusted
};
WindowedMap phi_unconstrained_window(const TreedBridge& b);

}  // namespace hpq
