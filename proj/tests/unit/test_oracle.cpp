#include <algorithm>
#include <stdexcept>

#include "doctest.h"

#include "halfplane/laws.hpp"
#include "halfplane/oracle.hpp"

using namespace hpq;

namespace {

using Key = std::pair<std::vector<int>, std::vector<int>>;

std::vector<Key> keys(const std::vector<LabelledTree>& trees) {
  std::vector<Key> out;
  for (const auto& t : trees) out.emplace_back(t.labels(), t.degrees());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("labelled tree counts") {
  CHECK(enumerate_labelled_trees(LabelKind::any, 0, 0).size() == 1);
  CHECK(enumerate_labelled_trees(LabelKind::any, 0, 1).size() == 3);
  CHECK(enumerate_labelled_trees(LabelKind::positive, 1, 1).size() == 2);
  // 3^n Catalan(n) unconstrained trees.
  const std::uint64_t catalan[] = {1, 1, 2, 5, 14, 42};
  std::uint64_t three = 1;
  for (int n = 0; n <= 5; ++n, three *= 3) CHECK(count_labelled_trees(LabelKind::any, 2, n) == three * catalan[n]);
  CHECK_THROWS_AS(enumerate_labelled_trees(LabelKind::any, 0, default_tree_bound + 1), std::invalid_argument);
}

TEST_CASE("recursive and ballot enumerations agree") {
  for (auto kind : {LabelKind::any, LabelKind::positive})
    for (int n = 0; n <= 5; ++n) {
      const auto a = keys(enumerate_labelled_trees(kind, 1, n));
      const auto b = keys(enumerate_labelled_trees_ballot(kind, 1, n));
      CHECK(a == b);
      CHECK(std::adjacent_find(a.begin(), a.end()) == a.end());
      CHECK(count_labelled_trees(kind, 1, n) == a.size());
    }
}

TEST_CASE("treed bridge counts") {
  CHECK(count_treed_bridges(TreedKind::positive, 0, 1) == 1);
  CHECK(count_treed_bridges(TreedKind::unconstrained, 0, 1) == 2);
  CHECK(count_treed_bridges(TreedKind::positive, 1, 1) == 2);
  for (int p = 1; p <= 4; ++p)
    for (int n = 0; n + p <= 5; ++n)
      CHECK(enumerate_treed_bridges(TreedKind::positive, n, p).size() == count_treed_bridges(TreedKind::positive, n, p));
}

TEST_CASE("quadrangulations with a boundary of length 2") {
  const std::uint64_t expected[] = {1, 2, 9, 54};
  for (int n = 0; n <= 3; ++n) {
    const auto g = count_quadrangulations_by_gluing(n);
    CHECK(g.by_symmetry == expected[n]);
    CHECK(g.by_canonical_form == expected[n]);
  }
}

TEST_CASE("bijection reports") {
  for (int p = 1; p <= 4; ++p)
    for (int n = 0; n + p <= 5; ++n) {
      const auto r = verify_bijection(n, p);
      CHECK_MESSAGE(r.ok(), r.witness);
      CHECK(r.distinct_images == r.positive_count);
      if (p == 1 && n <= 3) CHECK(r.brute_force == static_cast<int>(r.positive_count));
    }
}

TEST_CASE("partition sums") {
  const auto rows = verify_partition_sums(6);
  REQUIRE(!rows.empty());
  for (const auto& r : rows) {
    CHECK(r.ok());
    CHECK(r.target == (r.kind == LabelKind::any ? Rational(2) : w(r.root_label)));
  }
  const auto zero = verify_partition_sums(0);
  for (const auto& r : zero) {
    if (r.kind == LabelKind::positive && r.root_label == 1) {
      CHECK(r.partial == 1);
      CHECK(r.target == Rational(4, 3));
    }
    if (r.kind == LabelKind::any) CHECK(r.partial == 1);
  }
}
