#include <algorithm>
#include <limits>

#include "doctest.h"

#include "halfplane/oracle.hpp"
#include "halfplane/schaeffer.hpp"

using namespace hpq;

namespace {

int degree(const PlanarMap& m, int v) {
  int d = 0;
  for (const auto& e : m.half_edges()) d += e.origin == v;
  return d;
}

}  // namespace

TEST_CASE("smallest positive treed bridge") {
  TreedBridge b;
  b.bridge = Bridge::finite({0, 1});
  b.trees.emplace(1, LabelledTree(1));
  const auto out = phi_positive(b);
  CHECK(out.map.vertex_count() == 2);
  CHECK(out.map.edge_count() == 1);
  CHECK(out.map.perimeter() == 2);
  CHECK(out.map.distances_from_root()[out.map.root_vertex()] == 0);
  CHECK(canonical_code(out.map) == canonical_code(PlanarMap(2, {{1, 1, 0}, {0, 0, 1}}, 0)));
}

TEST_CASE("positive construction on every small treed bridge") {
  for (int p = 1; p <= 5; ++p)
    for (int n = 0; n + p <= 5; ++n)
      for (const auto& b : enumerate_treed_bridges(TreedKind::positive, n, p)) {
        const auto out = phi_positive(b);
        const auto& m = out.map;
        REQUIRE(m.is_quadrangulation_with_boundary());
        CHECK(m.area() == n);
        CHECK(m.perimeter() == 2 * p);
        CHECK(static_cast<std::size_t>(m.edge_count()) == real_corners(b).corners.size());
        CHECK(m.vertex_count() == n + p + 1);
        const auto d = m.distances_from_root();
        for (int v = 0; v < m.vertex_count(); ++v) CHECK(d[v] == out.vertex_label[v]);
      }
}

TEST_CASE("pointed construction") {
  for (int p = 1; p <= 4; ++p)
    for (int n = 0; n + p <= 4; ++n)
      for (const auto& b : enumerate_treed_bridges(TreedKind::unconstrained, n, p)) {
        const auto out = phi_pointed(b);
        CHECK(out.map.is_quadrangulation_with_boundary());
        CHECK(out.map.vertex_count() == static_cast<int>(b.size()) + p + 1);
        // Labels minus the pointed label are distances to the pointed vertex.
        const auto delta = std::find(out.vertex_label.begin(), out.vertex_label.end(), out.delta_label);
        REQUIRE(std::count(out.vertex_label.begin(), out.vertex_label.end(), out.delta_label) == 1);
        const auto d = out.map.distances_from(static_cast<int>(delta - out.vertex_label.begin()));
        for (int v = 0; v < out.map.vertex_count(); ++v) CHECK(d[v] == out.vertex_label[v] - out.delta_label);
      }
}

TEST_CASE("successors of a descending staircase") {
  TreedBridge b;
  b.kind = TreedKind::unconstrained;
  b.bridge = Bridge::window({0, -1, -2, -3, -4, -5}, 0);
  for (long i = 0; i < 5; ++i) b.trees.emplace(i, LabelledTree(static_cast<int>(-i)));
  const auto t = real_corners(b);
  const auto s = successors(t.corners, std::numeric_limits<int>::min() / 2, SuccessorRule::forward);
  REQUIRE(s.size() == 5);
  for (int k = 0; k + 1 < 5; ++k) CHECK(s[k] == k + 1);
  CHECK(s[4] == unresolved);
}

TEST_CASE("forward successors draw non-crossing chords") {
  const Rng base(6, 0, "phi/chords");
  const auto b = sample_B_pm_budget_window(400, base);
  const auto t = real_corners(b);
  const auto s = successors(t.corners, std::numeric_limits<int>::min() / 2, SuccessorRule::forward);
  const int n = static_cast<int>(s.size());
  for (int k = 0; k < n; ++k) {
    if (s[k] < 0) continue;
    CHECK(s[k] > k);
    CHECK(t.corners[s[k]].label == t.corners[k].label - 1);
    for (int j = k + 1; j < s[k]; ++j) {
      CHECK(t.corners[j].label >= t.corners[k].label);
      if (s[j] >= 0) CHECK(s[j] <= s[k]);
    }
  }
}

TEST_CASE("unconstrained windows") {
  const Rng base(6, 1, "phi/window");
  int previous = -1;
  for (long budget : {300L, 3000L, 30000L}) {
    const auto w = phi_unconstrained_window(sample_B_pm_budget_window(budget, base));
    CHECK(w.map.well_formed());
    CHECK(w.trusted_radius >= previous);
    previous = w.trusted_radius;
  }
}

TEST_CASE("positive windows") {
  Rng rng(6, 2, "phi/positive");
  for (int r = 0; r < 40; ++r) {
    const auto b = sample_B_inf_window(60, 60, rng);
    if (b.bridge.at(-60) <= 1 || b.bridge.at(60) <= 1) continue;
    CHECK(phi_infinite_positive_window(b, 0).map.vertex_count() == 1);
    const auto one = phi_infinite_positive_window(b, 1);
    const auto t = real_corners(b);
    const auto ones = std::count_if(t.corners.begin(), t.corners.end(), [](const PhiCorner& c) { return c.label == 1; });
    CHECK(degree(one.map, one.map.root_vertex()) == ones);
    CHECK(one.residual_risk >= 0.0);
  }
}
