#pragma once
// Bridges, treed bridges and their samplers.
//
// Positions are signed bridge indices i with x_0 = 0.  A finite bridge of
// length 2p covers positions 0..2p-1 cyclically; a window covers
// [-left, right] of an infinite bridge.  The tree at a down-step i (x_{i+1} =
// x_i - 1) is grafted at the bridge vertex i and has root label x_i.

#include <map>
#include <optional>
#include <vector>

#include "json.hpp"

#include "halfplane/laws.hpp"
#include "halfplane/rational.hpp"
#include "halfplane/rng.hpp"
#include "halfplane/tree.hpp"

namespace hpq {

class Bridge {
 public:
  Bridge() = default;
  // Finite cyclic bridge x_0..x_{2p-1}.
  static Bridge finite(std::vector<int> labels);
  // Window x_{-left}..x_{right} of an infinite bridge.
  static Bridge window(std::vector<int> labels, long left);

  bool cyclic() const { return cyclic_; }
  long first() const { return -left_; }  // smallest stored position
  long last() const { return first() + static_cast<long>(labels_.size()) - 1; }
  long length() const { return static_cast<long>(labels_.size()); }
  bool contains(long i) const { return cyclic_ || (i >= first() && i <= last()); }
  int at(long i) const;  // x_i (cyclic wrap for finite bridges)
  const std::vector<int>& labels() const { return labels_; }
  long origin_index() const { return left_; }

  // Down-step test; windows can only decide it when i+1 is stored.
  bool down_step(long i) const { return contains(i) && contains(i + 1) && at(i + 1) == at(i) - 1; }
  std::vector<long> down_steps() const;

  friend bool operator==(const Bridge&, const Bridge&) = default;

 private:
  std::vector<int> labels_;
  long left_ = 0;
  bool cyclic_ = false;
};

// (0,1,2,1) -> {2,3}; a finite bridge of length 2p has exactly p of them.
std::vector<long> down_steps(const Bridge& b);

enum class TreedKind { unconstrained, positive };

struct TreedBridge {
  Bridge bridge;
  std::map<long, LabelledTree> trees;  // keyed by position
  TreedKind kind = TreedKind::positive;

  std::size_t size() const;  // sum of tree sizes
  // Structural invariants: trees exactly at decided down-steps, root labels,
  // positivity for the positive kind.
  bool valid(std::string* why = nullptr) const;

  friend bool operator==(const TreedBridge&, const TreedBridge&) = default;
};

// Corner of the treed-bridge embedding in contour order.
struct TbCorner {
  long position;     // bridge position hosting the corner
  int tree_vertex;   // preorder index in T(position), -1 for phantom corners
  int label;
  int depth;         // tree depth, 0 on the bridge
  bool real() const { return tree_vertex >= 0; }
};

// Counterclockwise contour of the bounded face (finite) or left-to-right
// contour of the upper face (window).  Finite bridges start at position 0.
std::vector<TbCorner> corner_walk(const TreedBridge& b);

struct ContourPair {
  std::vector<int> C;  // distance to the bridge root vertex in the embedding
  std::vector<int> V;  // label
  std::size_t origin = 0;  // index of the corner at position 0
};
ContourPair contour_processes(const TreedBridge& b);

// ---- samplers ---------------------------------------------------------------

TreedBridge sample_B_p(int p, const ConditionedBridgeSampler& bridges, Rng& rng);
TreedBridge sample_B_inf_window(long left, long right, Rng& rng);
TreedBridge sample_B_pm_window(long length, Rng& rng, TreeSampleOptions opt = {});
TreedBridge sample_B_c_window(long length, Rng& rng);
// B^+-_inf window grown outward from the root, one step on each side in turn,
// until the trees hold `vertex_budget` edges.  A side stops at the first tree
// that would not fit.  Step and tree at position i use their own sub-streams
// of `base`, so a larger budget extends the window of a smaller one.
TreedBridge sample_B_pm_budget_window(long vertex_budget, const Rng& base);

// Staircase on one side of the root, per the two sides of the rightmost ray.
TreedBridge derive_B_r(const TreedBridge& b);
TreedBridge derive_B_l(const TreedBridge& b);

// Local distance between windows or finite treed bridges (0 when equal).
Rational tb_local_distance(const TreedBridge& a, const TreedBridge& b);

nlohmann::json treed_bridge_to_json(const TreedBridge& b);
TreedBridge treed_bridge_from_json(const nlohmann::json& j);

}  // namespace hpq
