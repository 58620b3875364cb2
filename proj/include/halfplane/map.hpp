#pragma once
// Rooted planar maps as half-edge tables.
//
// Conventions: next walks the face lying to the left of a half-edge, so
// sigma = next o twin turns clockwise around the origin.  The outer face is
// the face on the right of the root half-edge, i.e. the face of twin(root).
// A single-vertex map has no half-edges and root = -1.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "halfplane/rational.hpp"

namespace hpq {

struct HalfEdge {
  int twin = -1;
  int next = -1;
  int origin = -1;
  friend bool operator==(const HalfEdge&, const HalfEdge&) = default;
};

class PlanarMap {
 public:
  PlanarMap() : vertex_count_(1) {}  // single vertex
  PlanarMap(int vertex_count, std::vector<HalfEdge> half_edges, int root);

  int vertex_count() const { return vertex_count_; }
  int half_edge_count() const { return static_cast<int>(half_edges_.size()); }
  int edge_count() const { return half_edge_count() / 2; }
  int root() const { return root_; }
  const std::vector<HalfEdge>& half_edges() const { return half_edges_; }
  const HalfEdge& operator[](int h) const { return half_edges_[h]; }

  int twin(int h) const { return half_edges_[h].twin; }
  int next(int h) const { return half_edges_[h].next; }
  int origin(int h) const { return half_edges_[h].origin; }
  int target(int h) const { return origin(twin(h)); }
  int sigma(int h) const { return next(twin(h)); }
  int root_vertex() const { return root_ < 0 ? 0 : origin(root_); }

  // Face index of every half-edge, faces numbered by first appearance.
  std::vector<int> face_of() const;
  int face_count() const;
  int outer_face() const;  // -1 for the single-vertex map
  std::vector<int> face_degrees() const;
  int perimeter() const;  // degree of the outer face
  int area() const;       // number of inner faces

  // Structural checks: twin involution, origin consistency, connectivity.
  bool well_formed(std::string* why = nullptr) const;
  bool is_quadrangulation_with_boundary(std::string* why = nullptr) const;

  std::vector<int> distances_from(int vertex) const;  // BFS, -1 if unreachable
  std::vector<int> distances_from_root() const { return distances_from(root_vertex()); }

  // Half-edges of the outer face, starting with twin(root) and following next.
  std::vector<int> outer_contour() const;

  friend bool operator==(const PlanarMap&, const PlanarMap&) = default;

 private:
  int vertex_count_ = 1;
  std::vector<HalfEdge> half_edges_;
  int root_ = -1;
};

// Root-preserving canonical code: BFS relabelling from the root half-edge.
// Two rooted maps are isomorphic iff their codes are equal.
std::vector<int> canonical_code(const PlanarMap& map);
PlanarMap canonical_form(const PlanarMap& map);

// Submap induced by vertices at distance <= r from the root vertex.  The root
// is kept whenever r >= 1; rotations are the restriction of sigma.
PlanarMap ball(const PlanarMap& map, int radius);
// Same, for a caller-supplied vertex subset (keep[v] != 0).
PlanarMap induced_submap(const PlanarMap& map, const std::vector<char>& keep, int root);

// (1 + max(0, sup{r >= 1 : balls agree}))^{-1}; 0 for isomorphic maps.
Rational local_distance(const PlanarMap& a, const PlanarMap& b);

// Mirror image rerooted at sigma(root); an involution.
PlanarMap flip(const PlanarMap& map);

nlohmann::json map_to_json(const PlanarMap& map);
PlanarMap map_from_json(const nlohmann::json& j);

// Ball together with its certification data.
struct BallMap {
  PlanarMap map;
  int radius = 0;
  double residual_risk = 0.0;
};

}  // namespace hpq
