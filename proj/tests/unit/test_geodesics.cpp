#include <cstdlib>
#include <limits>

#include "doctest.h"
#include "helpers.hpp"

#include "halfplane/ball_sampler.hpp"
#include "halfplane/geodesics.hpp"

using namespace hpq;

namespace {

TreedBridge pure_staircase(int half_width) {
  TreedBridge b;
  std::vector<int> labels;
  for (int i = -half_width; i <= half_width; ++i) labels.push_back(std::abs(i));
  b.bridge = Bridge::window(labels, half_width);
  for (long i = -half_width; i < 0; ++i) b.trees.emplace(i, LabelledTree(static_cast<int>(-i)));
  return b;
}

}  // namespace

TEST_CASE("cut points") {
  CHECK(cut_point_probability(1) == doctest::Approx(2.0 / 3.0));
  for (int k = 1; k <= 10; ++k) CHECK(cut_point_probability(k) == doctest::Approx((k + 3.0) / (3.0 * (k + 1))));
  const long n = 20000;
  std::vector<long> hits(6, 0);
  for (long r = 0; r < n; ++r) {
    Rng rng(8, static_cast<std::uint64_t>(r), "geo/cut");
    const auto ind = cut_points(6, rng);
    REQUIRE(ind.size() == 6);
    for (int k = 0; k < 6; ++k) hits[k] += ind[k];
  }
  for (int k = 1; k <= 6; ++k) CHECK(test::near_probability(hits[k - 1], n, cut_point_probability(k)));
}

TEST_CASE("rays of the pure staircase follow the bridge") {
  const auto b = pure_staircase(12);
  const auto t = real_corners(b);
  for (const auto& ray : {rightmost_ray(b, 5), leftmost_ray(b, 5)}) {
    REQUIRE(ray.corners.size() == 5);
    CHECK(ray.certified);
    for (int i = 1; i <= 5; ++i) {
      const int c = ray.corners[i - 1];
      CHECK(t.corners[c].label == i);
      CHECK(t.origin[c].position == -i);
      CHECK(t.origin[c].depth == 0);
    }
  }
}

TEST_CASE("rays in sampled balls are geodesics") {
  for (int r = 0; r < 30; ++r) {
    Rng rng(8, static_cast<std::uint64_t>(r), "geo/balls");
    const int depth = 6;
    const auto bc = sample_ball_corners(depth + 4, rng);
    const CornerIndex idx(bc.corners, bc.vertex_count);
    const auto right = rightmost_ray(idx, depth);
    CHECK(ray_well_formed(idx, right));
    const auto left = leftmost_ray(idx, bc.is_tree_root, depth, depth + 4);
    if (left.certified) CHECK(ray_well_formed(idx, left));

    const auto lb = ball_from_corners(bc);
    const auto d = lb.ball.map.distances_from_root();
    for (int i = 1; i <= depth; ++i) {
      const int v = lb.vertex_index[bc.corners[right.corners[i - 1]].vertex];
      CHECK(d[v] == i);
    }
    // The ray's half-edges form a path leaving the root vertex.
    const auto path = ray_half_edges(right, lb.half_edge_index);
    REQUIRE(path.size() == static_cast<std::size_t>(depth));
    CHECK(lb.ball.map.origin(path.front()) == lb.ball.map.root_vertex());
    for (std::size_t k = 1; k < path.size(); ++k) CHECK(lb.ball.map.origin(path[k]) == lb.ball.map.target(path[k - 1]));

    // Pieces either side of the ray are maps in their own right.
    const auto sides = split_along_ray(lb.ball.map, lb.vertex_label, path, depth);
    CHECK(sides.left.well_formed());
    CHECK(sides.right.well_formed());
  }
}

TEST_CASE("gamma^n are monotone and meet the rightmost ray") {
  Rng rng(8, 100, "geo/gamma");
  const auto bc = sample_ball_corners(12, rng);
  const CornerIndex idx(bc.corners, bc.vertex_count);
  for (int n = 1; n <= 8; ++n) {
    const auto g = gamma_n(idx, bc.is_tree_root, n);
    if (g.empty()) continue;
    CHECK(g.size() == static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) CHECK(bc.corners[g[i - 1]].label == i);
  }
}

TEST_CASE("proper rays of unconstrained windows") {
  const Rng base(8, 200, "geo/proper");
  const auto b = sample_B_pm_budget_window(3000, base);
  const auto t = real_corners(b);
  const auto s = successors(t.corners, std::numeric_limits<int>::min() / 2, SuccessorRule::forward);
  for (int v = 1; v < std::min(t.vertex_count, 40); ++v) {
    const auto ray = proper_ray(t, s, v);
    for (std::size_t k = 1; k < ray.size(); ++k) CHECK(t.corners[ray[k]].label == t.corners[ray[k - 1]].label - 1);
  }
}

TEST_CASE("labels as limit probe") {
  const Rng base(8, 300, "geo/labels");
  const auto w = phi_unconstrained_window(sample_B_pm_budget_window(20000, base));
  Rng rng(8, 301, "geo/labels-probe");
  const auto report = labels_as_limit_check(w, rng);
  CHECK(report.holding <= report.probes);
  CHECK(report.fraction() >= 0.0);
  CHECK(report.fraction() <= 1.0);
}
