#include "halfplane/tree.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace hpq {

LabelledTree::LabelledTree(std::vector<int> labels, std::vector<int> degrees)
    : labels_(std::move(labels)), degrees_(std::move(degrees)) {
  if (labels_.size() != degrees_.size() || labels_.empty())
    throw std::invalid_argument("tree: label and degree arrays must be non-empty and equal length");
  // A preorder degree sequence is valid iff the pending-children counter
  // stays positive until the last vertex and ends at zero.
  long pending = 1;
  for (std::size_t v = 0; v < degrees_.size(); ++v) {
    if (pending <= 0 || degrees_[v] < 0) throw std::invalid_argument("tree: bad degree sequence");
    pending += degrees_[v] - 1;
  }
  if (pending != 0) throw std::invalid_argument("tree: bad degree sequence");
}

std::vector<std::size_t> LabelledTree::subtree_ends() const {
  const std::size_t n = labels_.size();
  std::vector<std::size_t> end(n);
  // Walk backwards: a subtree ends where its last child's subtree ends.
  std::vector<std::size_t> stack;
  for (std::size_t v = n; v-- > 0;) {
    std::size_t e = v + 1;
    for (int c = 0; c < degrees_[v]; ++c) {
      e = end[stack.back()];
      stack.pop_back();
    }
    end[v] = e;
    stack.push_back(v);
  }
  return end;
}

std::vector<std::size_t> LabelledTree::parents() const {
  const std::size_t n = labels_.size();
  std::vector<std::size_t> parent(n, std::numeric_limits<std::size_t>::max());
  std::vector<std::pair<std::size_t, int>> open;  // (vertex, children still to come)
  for (std::size_t v = 0; v < n; ++v) {
    if (!open.empty()) {
      parent[v] = open.back().first;
      if (--open.back().second == 0) open.pop_back();
    }
    if (degrees_[v] > 0) open.emplace_back(v, degrees_[v]);
  }
  return parent;
}

std::vector<int> LabelledTree::depths() const {
  const auto parent = parents();
  std::vector<int> depth(labels_.size(), 0);
  for (std::size_t v = 1; v < labels_.size(); ++v) depth[v] = depth[parent[v]] + 1;
  return depth;
}

int LabelledTree::height() const {
  if (labels_.empty()) return 0;
  const auto d = depths();
  return *std::max_element(d.begin(), d.end());
}

int LabelledTree::min_label() const { return *std::min_element(labels_.begin(), labels_.end()); }

bool LabelledTree::labels_valid() const {
  const auto parent = parents();
  for (std::size_t v = 1; v < labels_.size(); ++v)
    if (std::abs(labels_[v] - labels_[parent[v]]) > 1) return false;
  return true;
}

std::vector<std::size_t> LabelledTree::contour() const {
  std::vector<std::size_t> corners;
  if (labels_.empty()) return corners;
  corners.reserve(2 * labels_.size() - 1);
  std::vector<std::pair<std::size_t, int>> open;  // (vertex, children remaining)
  std::size_t next = 0;
  corners.push_back(next);
  open.emplace_back(next, degrees_[next]);
  ++next;
  while (!open.empty()) {
    auto& [v, remaining] = open.back();
    if (remaining == 0) {
      open.pop_back();
      if (!open.empty()) corners.push_back(open.back().first);
      continue;
    }
    --remaining;
    corners.push_back(next);
    open.emplace_back(next, degrees_[next]);
    ++next;
  }
  return corners;
}

LabelledTree truncate_tree(const LabelledTree& tree, int generations) {
  if (tree.empty()) return tree;
  const auto depth = tree.depths();
  std::vector<int> labels, degrees;
  for (std::size_t v = 0; v < tree.vertex_count(); ++v) {
    if (depth[v] > generations) continue;
    labels.push_back(tree.label(v));
    degrees.push_back(depth[v] < generations ? tree.degree(v) : 0);
  }
  return LabelledTree(std::move(labels), std::move(degrees));
}

Rational tree_local_distance(const LabelledTree& a, const LabelledTree& b) {
  if (a == b) return Rational(0);
  // Beyond the smaller height both truncations are the full trees, which differ.
  const int limit = std::max(a.height(), b.height());
  int agree = 0;
  for (int h = 0; h <= limit; ++h) {
    if (truncate_tree(a, h) != truncate_tree(b, h)) break;
    agree = h;
  }
  return Rational(1, 1 + agree);
}

nlohmann::json tree_to_json(const LabelledTree& tree) {
  using nlohmann::json;
  if (tree.empty()) return json::array();
  // Build bottom-up: children of v are consumed from a stack in reverse preorder.
  std::vector<json> stack;
  for (std::size_t v = tree.vertex_count(); v-- > 0;) {
    json children = json::array();
    for (int c = 0; c < tree.degree(v); ++c) {
      children.push_back(std::move(stack.back()));
      stack.pop_back();
    }
    stack.push_back(json::array({tree.label(v), std::move(children)}));
  }
  return std::move(stack.back());
}

LabelledTree tree_from_json(const nlohmann::json& j) {
  std::vector<int> labels, degrees;
  std::vector<const nlohmann::json*> stack{&j};
  while (!stack.empty()) {
    const nlohmann::json& node = *stack.back();
    stack.pop_back();
    if (!node.is_array() || node.size() != 2 || !node[1].is_array())
      throw std::invalid_argument("tree json: expected [label, [children]]");
    labels.push_back(node[0].get<int>());
    degrees.push_back(static_cast<int>(node[1].size()));
    for (std::size_t c = node[1].size(); c-- > 0;) stack.push_back(&node[1][c]);
  }
  return LabelledTree(std::move(labels), std::move(degrees));
}

}  // namespace hpq
