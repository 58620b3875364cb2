#include <algorithm>
#include <string>

#include "doctest.h"
#include "helpers.hpp"

#include "halfplane/map.hpp"
#include "halfplane/pruning.hpp"
#include "halfplane/schaeffer.hpp"

using namespace hpq;

namespace {

// Square A B C D (inner face on the left of A -> B) with a pendant edge at
// `pendant_at` (1 = B, 3 = D) sticking into the outer face.  Root A -> B.
PlanarMap square_with_pendant(int pendant_at) {
  std::vector<HalfEdge> he(10);
  auto edge = [&](int h, int from, int to) {
    he[h] = {h + 1, -1, from};
    he[h + 1] = {h, -1, to};
  };
  edge(0, 0, 1);
  edge(2, 1, 2);
  edge(4, 2, 3);
  edge(6, 3, 0);
  edge(8, pendant_at, 4);
  auto link = [&](std::vector<int> cycle) {
    for (std::size_t i = 0; i < cycle.size(); ++i) he[cycle[i]].next = cycle[(i + 1) % cycle.size()];
  };
  link({0, 2, 4, 6});
  if (pendant_at == 1)
    link({7, 5, 3, 8, 9, 1});
  else
    link({1, 7, 8, 9, 5, 3});
  return PlanarMap(5, std::move(he), 0);
}

PlanarMap positive_one_face() {
  TreedBridge b;
  b.bridge = Bridge::finite({0, 1});
  b.trees.emplace(1, LabelledTree({1, 2}, {1, 0}));
  return phi_positive(b).map;
}

}  // namespace

TEST_CASE("one-edge map") {
  const auto m = test::path_map(1);
  std::string why;
  CHECK(m.well_formed(&why));
  CHECK(m.is_quadrangulation_with_boundary(&why));
  CHECK(m.area() == 0);
  CHECK(m.perimeter() == 2);
  CHECK(m.distances_from_root() == std::vector<int>{0, 1});
  CHECK(canonical_code(ball(m, 1)) == canonical_code(m));
  CHECK(canonical_code(flip(m)) == canonical_code(m));
}

TEST_CASE("distances along a boundary-only map") {
  const auto m = test::path_map(2);
  CHECK(m.perimeter() == 4);
  const auto d = m.distances_from_root();
  std::vector<int> along;
  for (int h = m.root(), k = 0; k < m.perimeter(); h = m.next(h), ++k) along.push_back(d[m.origin(h)]);
  CHECK(along == std::vector<int>{0, 1, 2, 1});
}

TEST_CASE("balls") {
  const auto q = positive_one_face();
  CHECK(q.area() == 1);
  CHECK(q.perimeter() == 2);
  CHECK(ball(q, 0).vertex_count() == 1);
  CHECK(ball(q, 0).root() == -1);
  // Labels are distances; the radius-1 ball drops the label-2 vertex only.
  const auto d = q.distances_from_root();
  CHECK(std::count(d.begin(), d.end(), 2) == 1);
  CHECK(ball(q, 1).vertex_count() == q.vertex_count() - 1);
  CHECK(canonical_code(ball(q, 2)) == canonical_code(q));

  Rng rng(4, 0, "map/balls");
  const FreeBoltzmannSampler free_sampler(64);
  for (int r = 0; r < 50; ++r) {
    const auto m = free_sampler.sample(rng);
    const auto dm = m.distances_from_root();
    for (int radius = 1; radius <= 3; ++radius) {
      const auto b = ball(m, radius);
      CHECK(b.vertex_count() == std::count_if(dm.begin(), dm.end(), [&](int x) { return x >= 0 && x <= radius; }));
      CHECK(b.well_formed());
      CHECK(canonical_code(ball(b, radius - 1)) == canonical_code(ball(m, radius - 1)));
    }
  }
}

TEST_CASE("local distance between maps") {
  const auto a = test::path_map(4), b = test::path_map(3);
  CHECK(local_distance(a, a) == 0);
  CHECK(local_distance(a, b) == Rational(1, 4));
  // Star with two edges at the root against a path: radius-1 balls differ.
  std::vector<HalfEdge> he{{1, 1, 0}, {0, 2, 1}, {3, 3, 0}, {2, 0, 2}};
  const PlanarMap star(3, he, 0);
  REQUIRE(star.well_formed());
  CHECK(local_distance(star, test::path_map(2)) == 1);
}

TEST_CASE("canonical form ignores numbering") {
  const auto m = square_with_pendant(1);
  CHECK(m.well_formed());
  CHECK(m.area() == 1);
  CHECK(m.perimeter() == 6);
  CHECK(canonical_code(canonical_form(m)) == canonical_code(m));
  // Relabel half-edges by swapping the two pendant half-edge pairs with the square's last edge.
  std::vector<int> perm{0, 1, 2, 3, 4, 5, 8, 9, 6, 7};
  std::vector<HalfEdge> he(10);
  for (int h = 0; h < 10; ++h)
    he[perm[h]] = {perm[m.twin(h)], perm[m.next(h)], m.origin(h)};
  const PlanarMap renumbered(5, he, perm[m.root()]);
  CHECK(canonical_code(renumbered) == canonical_code(m));
}

TEST_CASE("flip") {
  const auto m = square_with_pendant(1);
  const auto mirrored = square_with_pendant(3);
  CHECK(canonical_code(flip(m)) == canonical_code(mirrored));
  CHECK(canonical_code(m) != canonical_code(mirrored));
  CHECK(flip(flip(m)) == m);

  Rng rng(4, 1, "map/flip");
  const FreeBoltzmannSampler free_sampler(64);
  for (int r = 0; r < 50; ++r) {
    const auto q = free_sampler.sample(rng);
    const auto f = flip(q);
    CHECK(flip(f) == q);
    CHECK(f.is_quadrangulation_with_boundary());
    CHECK(f.perimeter() == q.perimeter());
    CHECK(f.area() == q.area());
  }
}

TEST_CASE("json round trip") {
  const auto m = square_with_pendant(3);
  const auto j = map_to_json(m);
  CHECK(map_from_json(j) == m);
  auto bad = j;
  bad["outer_face"] = 1 - j["outer_face"].get<int>();
  CHECK_THROWS(map_from_json(bad));
  std::vector<HalfEdge> broken{{1, 1, 0}, {1, 0, 1}};
  CHECK_FALSE(PlanarMap(2, broken, 0).well_formed());
}
