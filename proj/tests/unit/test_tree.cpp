#include <stdexcept>

#include "doctest.h"

#include "halfplane/laws.hpp"
#include "halfplane/tree.hpp"

using namespace hpq;

namespace {

// root(0) -> a(1) -> b(2), plus a second root child c(-1).
LabelledTree sample_tree() { return LabelledTree({0, 1, 2, -1}, {2, 1, 0, 0}); }

}  // namespace

TEST_CASE("construction") {
  const auto t = sample_tree();
  CHECK(t.size() == 3);
  CHECK(t.height() == 2);
  CHECK(t.min_label() == -1);
  CHECK(t.labels_valid());
  CHECK_FALSE(t.positive());
  CHECK(t.subtree_ends() == std::vector<std::size_t>{4, 3, 3, 4});
  CHECK(t.depths() == std::vector<int>{0, 1, 2, 1});
  CHECK_THROWS_AS(LabelledTree({0, 1}, {2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(LabelledTree({0, 1}, {0, 0}), std::invalid_argument);
  CHECK_FALSE(LabelledTree({0, 2}, {1, 0}).labels_valid());
}

TEST_CASE("contour visits every vertex once per child plus one") {
  const auto t = sample_tree();
  const auto c = t.contour();
  CHECK(c.size() == 2 * t.size() + 1);
  std::vector<int> count(t.vertex_count(), 0);
  for (auto v : c) ++count[v];
  for (std::size_t v = 0; v < t.vertex_count(); ++v) CHECK(count[v] == t.degree(v) + 1);
}

TEST_CASE("truncation") {
  const LabelledTree single(3);
  CHECK(truncate_tree(single, 5) == single);
  const LabelledTree path({0, 1, 2}, {1, 1, 0});
  CHECK(truncate_tree(path, 1) == LabelledTree({0, 1}, {1, 0}));
  const auto t = sample_tree();
  CHECK(truncate_tree(t, t.height()) == t);
  CHECK(truncate_tree(t, 0) == LabelledTree(0));
}

TEST_CASE("local distance") {
  const auto t = sample_tree();
  CHECK(tree_local_distance(t, t) == 0);
  CHECK(tree_local_distance(LabelledTree(0), LabelledTree(1)) == 1);
  // Generations 0..2 agree; generation 3 differs.
  const LabelledTree a({0, 1, 2, 3}, {1, 1, 1, 0});
  const LabelledTree b({0, 1, 2, 2}, {1, 1, 1, 0});
  CHECK(truncate_tree(a, 2) == truncate_tree(b, 2));
  CHECK(tree_local_distance(a, b) == Rational(1, 3));
  // Generation 1 differs.
  CHECK(tree_local_distance(a, LabelledTree({0, 0}, {1, 0})) == Rational(1, 1));
  // Triangle inequality in its ultrametric form.
  const LabelledTree c({0, 1, 2}, {1, 1, 0});
  const auto ab = tree_local_distance(a, b), bc = tree_local_distance(b, c), ac = tree_local_distance(a, c);
  CHECK(ac <= std::max(ab, bc));
}

TEST_CASE("json round trip") {
  const auto t = sample_tree();
  const auto j = tree_to_json(t);
  CHECK(j == nlohmann::json::parse(R"([0, [[1, [[2, []]]], [-1, []]]])"));
  CHECK(tree_from_json(j) == t);
  Rng rng(3, 0, "tree/json");
  TreeSampleOptions opt;
  opt.max_vertices = 500;
  for (int r = 0; r < 200; ++r)
    if (const auto s = sample_tree_rho(2, rng, opt)) CHECK(tree_from_json(tree_to_json(*s)) == *s);
}
