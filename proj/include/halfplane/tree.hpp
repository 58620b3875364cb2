#pragma once
// Labelled plane trees stored in preorder: vertex 0 is the root and every
// subtree occupies a contiguous index range.

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"

#include "halfplane/rational.hpp"

namespace hpq {

class LabelledTree {
 public:
  LabelledTree() = default;
  // Single vertex.
  explicit LabelledTree(int root_label) : labels_{root_label}, degrees_{0} {}
  // Preorder arrays; throws std::invalid_argument when they do not describe a tree.
  LabelledTree(std::vector<int> labels, std::vector<int> degrees);

  std::size_t vertex_count() const { return labels_.size(); }
  // Number of edges |tau|.
  std::size_t size() const { return labels_.empty() ? 0 : labels_.size() - 1; }
  bool empty() const { return labels_.empty(); }

  int root_label() const { return labels_.front(); }
  int label(std::size_t v) const { return labels_[v]; }
  int degree(std::size_t v) const { return degrees_[v]; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<int>& degrees() const { return degrees_; }

  // One past the last preorder index of the subtree rooted at v.
  std::vector<std::size_t> subtree_ends() const;
  std::vector<std::size_t> parents() const;  // root gets SIZE_MAX
  std::vector<int> depths() const;
  int height() const;
  int min_label() const;
  bool labels_valid() const;  // |l(u) - l(v)| <= 1 on every edge
  bool positive() const { return !empty() && min_label() >= 1; }

  // Vertex index of each corner in counterclockwise contour order.  A vertex
  // with k children owns k+1 corners; the root's are the ones facing the
  // bounded face when grafted on a bridge.
  std::vector<std::size_t> contour() const;

  friend bool operator==(const LabelledTree&, const LabelledTree&) = default;

  // Builder interface used by the samplers (preorder, depth-first).
  std::size_t push_vertex(int label) {
    labels_.push_back(label);
    degrees_.push_back(0);
    return labels_.size() - 1;
  }
  void add_child_count(std::size_t v) { ++degrees_[v]; }

 private:
  std::vector<int> labels_;
  std::vector<int> degrees_;
};

// [tau]_h: keep the first h generations.
LabelledTree truncate_tree(const LabelledTree& tree, int generations);

// (1 + sup{h : [t]_h = [t']_h})^{-1}, and 0 for identical trees.
Rational tree_local_distance(const LabelledTree& a, const LabelledTree& b);

// Nested [label, [children...]] form.
nlohmann::json tree_to_json(const LabelledTree& tree);
LabelledTree tree_from_json(const nlohmann::json& j);

}  // namespace hpq
