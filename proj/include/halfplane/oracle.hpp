#pragma once
// Exhaustive small cases: labelled trees, treed bridges, quadrangulations
// with a boundary of length 2 glued face by face, and the checks built on
// them (Phi is a bijection onto its image, partition sums of the tree
// measures).  Everything here is exact.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "halfplane/rational.hpp"
#include "halfplane/tree.hpp"
#include "halfplane/treed_bridge.hpp"

namespace hpq {

enum class LabelKind { any, positive };  // LT_k, LT^+_k

constexpr int default_tree_bound = 8;
constexpr int default_bridge_bound = 6;

// All labelled trees with `edges` edges and the given root label, built
// recursively from the first subtree of the root.  Throws "bound exceeded".
std::vector<LabelledTree> enumerate_labelled_trees(LabelKind kind, int root_label, int edges,
                                                   int bound = default_tree_bound);
// Same set from ballot sequences (contour words) and label increments.
std::vector<LabelledTree> enumerate_labelled_trees_ballot(LabelKind kind, int root_label, int edges,
                                                          int bound = default_tree_bound);
// Count via the ballot decoder, without materialising the trees.
std::uint64_t count_labelled_trees(LabelKind kind, int root_label, int edges, int bound = default_tree_bound);

// TB_{n,p} (unconstrained) or TB^+_{n,p} (positive): cyclic bridges of length
// 2p from 0 and trees at the p down-steps with n edges in total.
std::vector<TreedBridge> enumerate_treed_bridges(TreedKind kind, int n, int p, int bound = default_bridge_bound);
std::uint64_t count_treed_bridges(TreedKind kind, int n, int p, int bound = default_bridge_bound);

// Rooted quadrangulations with n inner faces and a boundary of length 2, by
// matching the sides of n labelled squares and one digon.  Two independent
// counts: labelled gluings / (n! 4^n), and distinct canonical codes.
struct GluingCount {
  std::uint64_t by_symmetry = 0;
  std::uint64_t by_canonical_form = 0;
};
GluingCount count_quadrangulations_by_gluing(int faces);

struct BijectionReport {
  int n = 0, p = 0;
  std::uint64_t positive_count = 0;       // |TB^+_{n,p}|
  std::uint64_t unconstrained_count = 0;  // |TB_{n,p}|
  std::uint64_t distinct_images = 0;
  bool injective = false;
  bool sizes_ok = false;             // area n, perimeter 2p
  bool labels_are_distances = false;
  bool count_identity = false;       // |TB| = (n+p+1) |TB^+|
  int brute_force = -1;              // p = 1, n <= 3 only
  bool brute_force_ok = true;
  std::string witness;               // JSON of the first failing instance
  bool ok() const { return injective && sizes_ok && labels_are_distances && count_identity && brute_force_ok; }
};
BijectionReport verify_bijection(int n, int p);

struct PartitionSumRow {
  LabelKind kind;
  int root_label;
  int max_edges;
  Rational partial;  // sum over trees with <= max_edges edges of 12^{-|tau|}
  Rational upper;    // partial + tail bound from all labelled trees
  Rational target;   // 2 for LT_k, w(k) for LT^+_k
  bool ok() const { return partial <= target && target <= upper; }
};
std::vector<PartitionSumRow> verify_partition_sums(int max_edges = default_tree_bound);

}  // namespace hpq
