#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"

#include "halfplane/laws.hpp"

using namespace hpq;

TEST_CASE("step probabilities") {
  CHECK(step_prob(0, Step::up) == 1);
  CHECK(step_prob(0, Step::down) == 0);
  CHECK(step_prob(1, Step::down) == Rational(1, 6));
  CHECK(step_prob(2, Step::up) == Rational(3, 4));
  for (int n = 0; n < 50; ++n) {
    CHECK(step_prob(n, Step::up) + step_prob(n, Step::down) == 1);
    CHECK(p_down(n) == doctest::Approx(to_double(step_prob(n, Step::down))));
  }
}

TEST_CASE("tree weights and closed forms") {
  CHECK(w(0) == 0);
  CHECK(w(1) == Rational(4, 3));
  CHECK(w(2) == Rational(5, 3));
  CHECK(w_of(2.0) == doctest::Approx(5.0 / 3.0));
  CHECK(wc_coefficient(0) == 1);
  CHECK(wc_coefficient(1) == Rational(4, 3));
  CHECK(wc_coefficient(2) == 4);
  CHECK(c_poly(0) == 1);
  CHECK(c_poly(1) == 6);
  CHECK(c_poly(2) == 20);
  CHECK(w_gap(1e12L, 1e12L - 1) > 0);
  CHECK(static_cast<double>(w_gap(5, 2)) == doctest::Approx(to_double(w(5) - w(2))));
}

TEST_CASE("walk identities") {
  for (int n = 1; n <= 60; ++n)
    CHECK(w(n) == 8 * step_prob(n, Step::down) * step_prob(n - 1, Step::up));
  for (int j = 1; j <= 60; ++j)
    CHECK(step_prob(j, Step::down) * c_poly(j) / c_poly(j - 1) == step_prob(j - 1, Step::up));
}

TEST_CASE("bridge kernel") {
  CHECK(bridge_kernel_exact(2, 0, 0) == Rational(1, 6));
  CHECK(bridge_kernel_exact(1, 0, 0) == 0);
  CHECK(bridge_kernel(1, 0, 0) == 0.0);
  for (int p = 1; p <= 20; ++p) {
    Rational eighth = 1;
    for (int k = 0; k < p; ++k) eighth /= 8;
    CHECK(bridge_kernel_exact(2 * p, 0, 0) == eighth * wc_coefficient(p));
  }
  // Rows of the stochastic kernel sum to one and agree with the exact values.
  for (int steps : {1, 5, 12}) {
    for (int i : {0, 3}) {
      const auto row = bridge_kernel_row(steps, i);
      double total = 0;
      for (double v : row) total += v;
      CHECK(total == doctest::Approx(1.0));
      for (int j = 0; j < static_cast<int>(row.size()); ++j)
        CHECK(row[j] == doctest::Approx(to_double(bridge_kernel_exact(steps, i, j))));
    }
  }
  // Second moment from the kernel matches the exact one.
  double m2 = 0;
  const auto row = bridge_kernel_row(30, 0);
  for (std::size_t j = 0; j < row.size(); ++j) m2 += row[j] * static_cast<double>(j * j);
  CHECK(walk_second_moment(30) == doctest::Approx(m2));
}

TEST_CASE("hitting probability") {
  CHECK(hit_below_prob_exact(2, 1) == step_prob(2, Step::down) + step_prob(2, Step::up) * hit_below_prob_exact(3, 1));
  double prev = 1;
  for (long n = 3; n < 200; ++n) {
    const double h = hit_below_prob(n, 2);
    CHECK(h > 0);
    CHECK(h < prev);
    prev = h;
  }
  CHECK(hit_below_prob(10, 2) == doctest::Approx(to_double(hit_below_prob_exact(10, 2))));

  // Walks from 10 until they hit 2 or reach 30; from 30 the exact value closes the estimate.
  const double target = hit_below_prob(10, 2), tail = hit_below_prob(30, 2);
  Rng rng(11, 0, "laws/hit");
  const long walks = 1000000;
  double sum = 0, sum_sq = 0;
  for (long r = 0; r < walks; ++r) {
    long x = 10;
    while (x > 2 && x < 30) x += rng.uniform() < p_down(x) ? -1 : 1;
    const double v = x <= 2 ? 1.0 : tail;
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / walks, se = std::sqrt((sum_sq / walks - mean * mean) / walks);
  CHECK(std::abs(mean - target) <= 3 * se);
}

TEST_CASE("dip probability") {
  CHECK(dip_prob_exact(2, 1) == Rational(1, 5));
  CHECK(dip_prob_exact(1, 0) == 0);
  CHECK(dip_prob(10, 1) == doctest::Approx(to_double(dip_prob_exact(10, 1))));

  // Sizes have a heavy tail, so trees are cut at a size cap and the
  // frequency is bracketed by counting cut trees on either side.
  Rng rng(11, 1, "laws/dip");
  TreeSampleOptions opt;
  opt.max_vertices = 5000;
  auto bracket = [&](int x, long m, long n) {
    long dips = 0, cut = 0;
    for (long r = 0; r < n; ++r) {
      const auto t = sample_tree_rho_plus(x, rng, opt);
      if (!t) {
        ++cut;
        continue;
      }
      dips += t->min_label() <= m;
    }
    const double p = dip_prob(x, m), se = std::sqrt(p * (1 - p) / static_cast<double>(n));
    CHECK(static_cast<double>(dips) / static_cast<double>(n) <= p + 3 * se);
    CHECK(static_cast<double>(dips + cut) / static_cast<double>(n) >= p - 3 * se);
  };
  bracket(3, 1, 100000);
  bracket(10, 1, 200000);
}

TEST_CASE("rho_k sampler") {
  Rng rng(11, 2, "laws/rho");
  TreeSampleOptions opt;
  opt.max_vertices = 1000;
  long empty = 0, one = 0;
  const long n = 200000;
  bool roots_ok = true;
  for (long r = 0; r < n; ++r) {
    const auto t = sample_tree_rho(4, rng, opt);
    if (!t) continue;
    roots_ok = roots_ok && t->root_label() == 4 && t->labels_valid();
    empty += t->size() == 0;
    one += t->size() == 1;
  }
  CHECK(roots_ok);
  CHECK(test::near_probability(empty, n, 0.5));
  CHECK(test::near_probability(one, n, 0.125));
}

TEST_CASE("rho_k^+ sampler") {
  Rng rng(11, 3, "laws/rho+");
  TreeSampleOptions opt;
  opt.max_vertices = 2000;
  long root_only = 0;
  bool positive = true;
  const long n = 200000;
  for (long r = 0; r < n; ++r) {
    const auto t = sample_tree_rho_plus(1, rng, opt);
    if (!t) continue;
    positive = positive && t->positive() && t->root_label() == 1;
    root_only += t->size() == 0;
  }
  CHECK(positive);
  CHECK(test::near_probability(root_only, n, 0.75));

  // The size-only grower has the same law.
  std::map<std::size_t, long> a, b;
  for (long r = 0; r < 50000; ++r) {
    const auto t = sample_tree_rho_plus(2, rng, opt);
    ++a[std::min<std::size_t>(t ? t->size() : 6, 6)];
    ++b[std::min<std::size_t>(sample_rho_plus_size(2, rng, 2000).value_or(6), 6)];
  }
  for (std::size_t k = 0; k <= 6; ++k) {
    const double pa = static_cast<double>(a[k]) / 50000, pb = static_cast<double>(b[k]) / 50000;
    CHECK(std::abs(pa - pb) <= 4 * std::sqrt((pa + pb) / 50000) + 1e-9);
  }
}

TEST_CASE("minimum label by inversion") {
  Rng rng(11, 4, "laws/min");
  const long n = 200000;
  std::map<long, long> hist;
  for (long r = 0; r < n; ++r) {
    const long m = sample_plus_min(5, 5, rng);
    REQUIRE(m >= 1);
    REQUIRE(m <= 5);
    ++hist[m];
  }
  long cumulative = 0;
  for (long l = 1; l < 5; ++l) {
    cumulative += hist[l];
    CHECK(test::near_probability(cumulative, n, dip_prob(5, l)));
  }
  // Conditioned draws stay below the bound.
  for (long r = 0; r < 1000; ++r) CHECK(sample_plus_min(1000000000L, 3, rng) <= 3);
}

TEST_CASE("walk sampler") {
  Rng rng(11, 5, "laws/walk");
  bool first_up = true, nonneg = true;
  double sum = 0;
  const int walks = 4000;
  const long steps = 10000;
  for (int r = 0; r < walks; ++r) {
    const auto x = sample_walk(0, steps, rng);
    first_up = first_up && x[1] == 1;
    for (int v : x) nonneg = nonneg && v >= 0;
    sum += static_cast<double>(x.back()) * x.back() / steps;
  }
  CHECK(first_up);
  CHECK(nonneg);
  CHECK(std::abs(sum / walks / 5.0 - 1.0) < 0.05);
  CHECK(walk_second_moment(steps) / steps / 5.0 == doctest::Approx(0.98314).epsilon(1e-4));
}

TEST_CASE("conditioned bridges") {
  Rng rng(11, 6, "laws/bridge");
  const ConditionedBridgeSampler small(2);
  for (int r = 0; r < 100; ++r) CHECK(small.sample(1, rng) == std::vector<int>{0, 1});
  // Two bridges of length 4; (0,1,2,1) carries p(0,1)p(1,2)p(2,1)p(1,0) / S^(4)(0,0).
  const Rational up_down = step_prob(0, Step::up) * step_prob(1, Step::up) * step_prob(2, Step::down) *
                           step_prob(1, Step::down) / bridge_kernel_exact(4, 0, 0);
  CHECK(up_down == Rational(5, 9));
  long hits = 0;
  const long n = 100000;
  for (long r = 0; r < n; ++r) hits += small.sample(2, rng) == std::vector<int>{0, 1, 2, 1};
  CHECK(test::near_probability(hits, n, 5.0 / 9.0));

  // Start of a long bridge: exact finite law, its limit, and the sampler.
  const int p = 200;
  std::map<std::vector<int>, double> exact, limit;
  std::vector<std::vector<int>> frontier{{0}};
  for (int s = 0; s < 6; ++s) {
    std::vector<std::vector<int>> grown;
    for (const auto& path : frontier)
      for (int d : {-1, 1}) {
        if (path.back() + d < 0) continue;
        auto q = path;
        q.push_back(path.back() + d);
        grown.push_back(std::move(q));
      }
    frontier = std::move(grown);
  }
  const double norm = bridge_kernel(2 * p, 0, 0);
  double tv = 0;
  for (const auto& path : frontier) {
    double prod = 1;
    for (int s = 0; s < 6; ++s) prod *= path[s + 1] > path[s] ? p_up(path[s]) : p_down(path[s]);
    limit[path] = prod;
    exact[path] = prod * bridge_kernel(2 * p - 6, path.back(), 0) / norm;
    tv += 0.5 * std::abs(exact[path] - prod);
  }
  CHECK(tv < 0.01);
  const ConditionedBridgeSampler big(p);
  std::map<std::vector<int>, long> seen;
  const long m = 100000;
  for (long r = 0; r < m; ++r) {
    const auto b = big.sample(p, rng);
    ++seen[std::vector<int>(b.begin(), b.begin() + 7)];
  }
  for (const auto& [path, q] : exact) CHECK(test::near_probability(seen[path], m, q, 4.5));
}

TEST_CASE("perimeter law") {
  CHECK(PerimeterLaw::pmf(0) == doctest::Approx(0.75));
  CHECK(PerimeterLaw::pmf(1) == doctest::Approx(0.125));
  for (int p = 0; p <= 3; ++p) {
    const double c = to_double(wc_coefficient(p)) / std::pow(8.0, p);
    CHECK(PerimeterLaw::pmf(p) == doctest::Approx(0.75 * c));
    CHECK(PerimeterLaw::tail(p) - PerimeterLaw::tail(p + 1) == doctest::Approx(PerimeterLaw::pmf(p)));
  }
  CHECK(PerimeterLaw::tail(0) == doctest::Approx(1.0));
  // Mean half-perimeter: sum of tails, the p^{-1/2} remainder added back.
  const long n = 1000000;
  double mean = 0;
  for (long p = 1; p <= n; ++p) mean += PerimeterLaw::tail(p);
  mean += 2.0 * static_cast<double>(n) * PerimeterLaw::tail(n);
  CHECK(2 * mean == doctest::Approx(2.0).epsilon(1e-3));

  Rng rng(11, 7, "laws/perimeter");
  std::map<long, long> hist;
  const long m = 200000;
  for (long r = 0; r < m; ++r) ++hist[PerimeterLaw::sample(rng)];
  for (long p = 0; p <= 3; ++p) CHECK(test::near_probability(hist[p], m, PerimeterLaw::pmf(p)));
}
