#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "netmech/dgp.hpp"
#include "netmech/network.hpp"

using namespace netmech;
using fixtures::figure1a;

namespace {

std::vector<UnitId> sorted(std::vector<UnitId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Pairwise distances checked one pair at a time, independent of the ball-based verifier.
bool pairwise_separated(const FriendshipNetwork& net, const std::vector<UnitId>& m, std::size_t k) {
  for (std::size_t a = 0; a < m.size(); ++a) {
    for (std::size_t b = a + 1; b < m.size(); ++b) {
      auto d = pairwise_distance(net, m[a], m[b]);
      if (d && *d < k) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("network construction enforces invariants") {
  const std::vector<std::pair<UnitId, UnitId>> dup{{0, 1}, {1, 0}, {1, 2}};
  FriendshipNetwork net(3, dup);
  CHECK(net.n_edges() == 2);
  CHECK(net.adjacent(1, 0));
  CHECK_FALSE(net.adjacent(0, 2));
  const std::vector<std::pair<UnitId, UnitId>> loop{{1, 1}};
  CHECK_THROWS_AS(FriendshipNetwork(3, loop), ArgumentError);
  const std::vector<std::pair<UnitId, UnitId>> out_of_range{{0, 3}};
  CHECK_THROWS_AS(FriendshipNetwork(3, out_of_range), ArgumentError);
  CHECK_THROWS_AS(FriendshipNetwork::from_adjacency({{1}, {}}), ArgumentError);
  CHECK_NOTHROW(FriendshipNetwork::from_adjacency({{1}, {0}}));
}

TEST_CASE("neighborhood rings of the example network") {
  const auto net = figure1a();
  CHECK(neighborhood(net, 4, {2}) == std::vector<UnitId>{1, 6});
  CHECK(neighborhood(net, 4, {0}) == std::vector<UnitId>{4});
  CHECK(neighborhood(net, 4, {1, 2, 3}) == std::vector<UnitId>{1, 2, 5, 6, 7, 8});
  CHECK(neighborhood(net, 4, {1}) == std::vector<UnitId>{2, 5});
  CHECK(neighborhood(net, 4, {3}) == std::vector<UnitId>{7, 8});
  CHECK_THROWS_AS(neighborhood(net, 11, {1}), ArgumentError);

  // Rings are disjoint and cover the connected component.
  std::vector<UnitId> all;
  for (const auto& r : distance_rings(net, 4, 20)) all.insert(all.end(), r.begin(), r.end());
  CHECK(sorted(all) == std::vector<UnitId>{1, 2, 4, 5, 6, 7, 8, 9, 10});
}

TEST_CASE("pairwise distance") {
  const auto p = fixtures::path(3);
  CHECK(pairwise_distance(p, 0, 2) == 2u);
  CHECK(pairwise_distance(p, 1, 1) == 0u);
  CHECK_FALSE(pairwise_distance(fixtures::edgeless(2), 0, 1).has_value());
  CHECK_THROWS_AS(pairwise_distance(p, 0, 9), ArgumentError);
  CHECK(pairwise_distance(figure1a(), 1, 9) == 6u);
}

TEST_CASE("the published separated sets are valid and maximal") {
  const auto net = figure1a();
  SeparatedSet s6{6, Eligibility::None, {1, 9}, {}};
  auto c = verify_separated_set(net, s6);
  CHECK(c.separated);
  // Isolated units 0 and 3 can always be added, so maximality needs them.
  CHECK_FALSE(c.maximal);
  s6.members = {0, 1, 3, 9};
  CHECK(verify_separated_set(net, s6).maximal);

  SeparatedSet s2{2, Eligibility::None, {0, 1, 3, 4, 6, 10}, {}};
  c = verify_separated_set(net, s2);
  CHECK(c.separated);
  CHECK(c.maximal);

  SeparatedSet dyads{2, Eligibility::None, {}, {{1, 2}, {6, 7}, {9, 10}}};
  c = verify_separated_set(net, dyads);
  CHECK(c.separated);
  CHECK(c.maximal);

  SeparatedSet bad{6, Eligibility::None, {1, 4}, {}};
  CHECK_FALSE(verify_separated_set(net, bad).separated);
  SeparatedSet bad_dyads{2, Eligibility::None, {}, {{1, 2}, {4, 5}}};
  CHECK_FALSE(verify_separated_set(net, bad_dyads).separated);
}

TEST_CASE("greedy separated sets are valid, maximal and reproducible") {
  const auto net = figure1a();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (std::size_t k : {1, 2, 3, 6}) {
      const auto s = greedy_separated_set(net, k, Eligibility::None, 1, seed);
      const auto c = verify_separated_set(net, s);
      CHECK(c.separated);
      CHECK(c.maximal);
      CHECK(pairwise_separated(net, s.members, k));
    }
    const auto e = greedy_separated_set(net, 6, Eligibility::NonEmptyRings12, 1, seed);
    const auto c = verify_separated_set(net, e);
    CHECK(c.eligible);
    CHECK(c.maximal);
    for (UnitId u : e.members) CHECK((u != 0 && u != 3));
    const auto d = greedy_dyad_separated_set(net, 2, 1, seed);
    const auto cd = verify_separated_set(net, d);
    CHECK(cd.separated);
    CHECK(cd.maximal);
  }
  // With k = 6 the component {1,2,4,5,6,7,8,9,10} holds at most two units, e.g. {1, 9}.
  const auto best = greedy_separated_set(net, 6, Eligibility::None, 64, 7);
  CHECK(best.size() == 4);

  const auto a = greedy_separated_set(net, 2, Eligibility::None, 5, 99);
  const auto b = greedy_separated_set(net, 2, Eligibility::None, 5, 99);
  CHECK(a.members == b.members);
}

TEST_CASE("restarts keep the first largest set") {
  const auto net = generate_network(3000, DegreeRule::range(1, 6), 5);
  std::vector<std::size_t> sizes;
  const auto best = greedy_separated_set(net, 6, Eligibility::NonEmptyRings12, 12, 3, &sizes);
  REQUIRE(sizes.size() == 12);
  const auto it = std::max_element(sizes.begin(), sizes.end());
  CHECK(best.size() == *it);
  const auto single = greedy_separated_set(net, 6, Eligibility::NonEmptyRings12, 1, 3);
  CHECK(single.size() == sizes[0]);
  const auto c = verify_separated_set(net, best);
  CHECK(c.separated);
  CHECK(c.eligible);
  CHECK(c.maximal);
  CHECK(pairwise_separated(net, best.members, 6));
}

TEST_CASE("degenerate separated-set inputs") {
  CHECK(greedy_separated_set(fixtures::edgeless(1), 6, Eligibility::NonEmptyRings12, 1, 0).size() == 0);
  CHECK(greedy_separated_set(FriendshipNetwork{}, 6, Eligibility::None, 3, 0).size() == 0);
  CHECK(greedy_dyad_separated_set(fixtures::edgeless(4), 2, 1, 0).size() == 0);
  const auto one = greedy_dyad_separated_set(fixtures::path(2), 2, 1, 0);
  REQUIRE(one.size() == 1);
  CHECK(one.dyads[0] == Dyad{0, 1});
  CHECK(greedy_separated_set(fixtures::complete(10), 6, Eligibility::None, 1, 0).size() == 1);
  CHECK_THROWS_AS(greedy_separated_set(figure1a(), 0, Eligibility::None, 1, 0), ArgumentError);
  CHECK_THROWS_AS(greedy_dyad_separated_set(figure1a(), 0, 1, 0), ArgumentError);
}

TEST_CASE("eligibility requires non-empty rings 1 and 2") {
  const auto net = figure1a();
  CHECK_FALSE(is_eligible(net, 3, Eligibility::NonEmptyRings12));
  CHECK(is_eligible(net, 3, Eligibility::None));
  CHECK(is_eligible(net, 1, Eligibility::NonEmptyRings12));
  // In a triangle nobody has a ring-2 neighbour.
  const auto tri = fixtures::complete(3);
  for (UnitId i = 0; i < 3; ++i) CHECK_FALSE(is_eligible(tri, i, Eligibility::NonEmptyRings12));
}
