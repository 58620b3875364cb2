#include <cmath>
#include <cstdlib>

#include "doctest.h"
#include "helpers.hpp"

#include "halfplane/schaeffer.hpp"
#include "halfplane/treed_bridge.hpp"

using namespace hpq;

TEST_CASE("down-steps") {
  CHECK(down_steps(Bridge::finite({0, 1})) == std::vector<long>{1});
  CHECK(down_steps(Bridge::finite({0, 1, 2, 1})) == std::vector<long>{2, 3});
  const ConditionedBridgeSampler bs(30);
  Rng rng(5, 0, "tb/down");
  for (int p = 1; p <= 30; ++p)
    CHECK(down_steps(Bridge::finite(bs.sample(p, rng))).size() == static_cast<std::size_t>(p));
  CHECK_THROWS(Bridge::finite({0, 2}));
}

TEST_CASE("B_p") {
  const ConditionedBridgeSampler bs(40);
  Rng rng(5, 1, "tb/Bp");
  long empty = 0;
  const long n = 100000;
  for (long r = 0; r < n; ++r) {
    const auto b = sample_B_p(1, bs, rng);
    REQUIRE(b.bridge.labels() == std::vector<int>{0, 1});
    REQUIRE(b.trees.size() == 1);
    REQUIRE(b.trees.at(1).root_label() == 1);
    empty += b.size() == 0;
  }
  CHECK(test::near_probability(empty, n, 0.75));

  // Law of the image restricted to area <= 2: 12^{-n} (3/4) per map, with
  // 1, 2 and 9 maps of areas 0, 1, 2.
  std::map<std::vector<int>, std::pair<int, long>> seen;  // code -> (area, count)
  long by_area[3] = {0, 0, 0};
  for (long r = 0; r < n; ++r) {
    const auto q = phi_positive(sample_B_p(1, bs, rng)).map;
    if (q.area() > 2) continue;
    ++by_area[q.area()];
    auto& slot = seen[canonical_code(q)];
    slot.first = q.area();
    ++slot.second;
  }
  CHECK(seen.size() == 12);
  const int classes[3] = {1, 2, 9};
  for (const auto& [code, entry] : seen)
    CHECK(test::near_probability(entry.second, by_area[entry.first], 1.0 / classes[entry.first]));
  CHECK(test::near_probability(by_area[0], n, 0.75));
  CHECK(test::near_probability(by_area[1], n, 2 * 0.75 / 12));
  CHECK(test::near_probability(by_area[2], n, 9 * 0.75 / 144));

  for (int p = 1; p <= 40; p += 13) {
    const auto b = sample_B_p(p, bs, rng);
    std::string why;
    CHECK_MESSAGE(b.valid(&why), why);
    CHECK(b.trees.size() == static_cast<std::size_t>(p));
  }
}

TEST_CASE("B_inf windows") {
  Rng rng(5, 2, "tb/Binf");
  long up2 = 0;
  double sxy = 0, sx = 0, sy = 0, sxx = 0, syy = 0;
  const long n = 20000;
  for (long r = 0; r < n; ++r) {
    const auto b = sample_B_inf_window(10, 10, rng);
    REQUIRE(b.bridge.at(1) == 1);
    REQUIRE(b.bridge.at(-1) == 1);
    up2 += b.bridge.at(2) == 2;
    const double x = b.bridge.at(10), y = b.bridge.at(-10);
    sx += x;
    sy += y;
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
    if (r < 100) {
      std::string why;
      CHECK_MESSAGE(b.valid(&why), why);
    }
  }
  CHECK(test::near_probability(up2, n, 5.0 / 6.0));
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double corr = cov / std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n));
  CHECK(std::abs(corr) < 4 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("B_pm windows") {
  Rng rng(5, 3, "tb/Bpm");
  TreeSampleOptions opt;
  opt.max_vertices = 1000;
  long up = 0;
  double sum = 0, sum_sq = 0;
  const long n = 20000;
  for (long r = 0; r < n; ++r) {
    const auto b = sample_B_pm_window(20, rng, opt);
    up += b.bridge.at(1) == 1;
    sum += b.bridge.at(20);
    sum_sq += static_cast<double>(b.bridge.at(20)) * b.bridge.at(20);
    for (const auto& [i, t] : b.trees) REQUIRE(t.root_label() == b.bridge.at(i));
  }
  CHECK(test::near_probability(up, n, 0.5));
  const double mean = sum / n, se = std::sqrt((sum_sq / n - mean * mean) / n);
  CHECK(std::abs(mean) <= 4 * se);
}

TEST_CASE("budget windows extend each other") {
  const Rng base(5, 4, "tb/budget");
  const auto small = sample_B_pm_budget_window(200, base);
  const auto large = sample_B_pm_budget_window(5000, base);
  CHECK(small.bridge.first() >= large.bridge.first());
  CHECK(small.bridge.last() <= large.bridge.last());
  for (long i = small.bridge.first(); i <= small.bridge.last(); ++i) CHECK(small.bridge.at(i) == large.bridge.at(i));
  for (const auto& [i, t] : small.trees) CHECK(large.trees.at(i) == t);
  CHECK(small.bridge.at(0) == 0);
  CHECK(small.bridge.last() >= 1);
}

TEST_CASE("staircase windows") {
  Rng rng(5, 5, "tb/Bc");
  long root_only = 0;
  const long n = 20000;
  for (long r = 0; r < n; ++r) {
    const auto b = sample_B_c_window(5, rng);
    if (r == 0) {
      for (long i = -5; i < 5; ++i) CHECK(b.bridge.down_step(i) == (i < 0));
      CHECK(b.trees.at(-3).root_label() == 3);
    }
    root_only += b.trees.at(-2).size() == 0;
  }
  CHECK(test::near_probability(root_only, n, 0.6));
}

TEST_CASE("one-sided staircases") {
  Rng rng(5, 6, "tb/derive");
  for (int r = 0; r < 50; ++r) {
    const auto b = sample_B_inf_window(15, 15, rng);
    const auto br = derive_B_r(b);
    for (long i = -15; i < 0; ++i) {
      CHECK(br.bridge.at(i) == -i);
      CHECK(br.trees.at(i) == LabelledTree(static_cast<int>(-i)));
    }
    for (long i = 0; i <= 15; ++i) CHECK(br.bridge.at(i) == b.bridge.at(i));
    for (const auto& [i, t] : b.trees)
      if (i > 0) CHECK(br.trees.at(i) == t);
    const auto both = derive_B_l(br);
    for (long i = -15; i <= 15; ++i) CHECK(both.bridge.at(i) == std::labs(i));
    for (const auto& [i, t] : both.trees) CHECK(t.size() == 0);
    std::string why;
    CHECK_MESSAGE(br.valid(&why), why);
  }
}

TEST_CASE("contour processes") {
  // Pure staircase on the right: C(i) = V(i) = i there.
  TreedBridge stair;
  std::vector<int> labels;
  for (int i = -4; i <= 4; ++i) labels.push_back(std::abs(i));
  stair.bridge = Bridge::window(labels, 4);
  for (long i = -4; i < 0; ++i) stair.trees.emplace(i, LabelledTree(static_cast<int>(-i)));
  const auto cp = contour_processes(stair);
  for (int i = 0; i <= 4; ++i) {
    CHECK(cp.C[cp.origin + i] == i);
    CHECK(cp.V[cp.origin + i] == i);
  }

  Rng rng(5, 7, "tb/contour");
  for (int r = 0; r < 30; ++r) {
    const auto b = sample_B_inf_window(30, 30, rng);
    const auto c = contour_processes(b);
    REQUIRE(c.C.size() == c.V.size());
    for (std::size_t k = 1; k < c.C.size(); ++k) CHECK(std::abs(c.C[k] - c.C[k - 1]) == 1);
    for (std::size_t k = 1; k < c.V.size(); ++k) CHECK(std::abs(c.V[k] - c.V[k - 1]) <= 1);
  }
}

TEST_CASE("local distance of treed bridges") {
  Rng rng(5, 8, "tb/dist");
  const auto b = sample_B_c_window(6, rng);
  CHECK(tb_local_distance(b, b) == 0);
  auto changed = b;
  // Change the tree at -3 at generation 1.
  changed.trees[-3] = LabelledTree({3, 4}, {1, 0});
  if (b.trees.at(-3) == changed.trees.at(-3)) changed.trees[-3] = LabelledTree({3, 2}, {1, 0});
  CHECK(tb_local_distance(b, changed) == Rational(1, 3));
}

TEST_CASE("json round trip") {
  const ConditionedBridgeSampler bs(10);
  Rng rng(5, 9, "tb/json");
  const auto finite = sample_B_p(6, bs, rng);
  CHECK(treed_bridge_from_json(treed_bridge_to_json(finite)) == finite);
  const auto window = sample_B_inf_window(8, 8, rng);
  CHECK(treed_bridge_from_json(treed_bridge_to_json(window)) == window);
  // Without a cyclic flag, a closed bridge from position 0 reads as finite.
  auto j = treed_bridge_to_json(finite);
  j.erase("cyclic");
  CHECK(treed_bridge_from_json(j) == finite);
}
