#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "netmech/dgp.hpp"
#include "netmech/mechtest.hpp"

using namespace netmech;

namespace {

struct Sample {
  FriendshipNetwork net;
  NetworkData data;
  SeparatedSet sep;
};

const Sample& shared(const std::string& preset) {
  static std::map<std::string, Sample> cache;
  auto it = cache.find(preset);
  if (it != cache.end()) return it->second;
  Sample s;
  s.net = generate_network(20000, DegreeRule::range(1, 6), 11);
  s.data = generate_data(s.net, dgp_preset(preset), 12);
  s.sep = greedy_separated_set(s.net, 6, Eligibility::NonEmptyRings12, 1, 13);
  return cache.emplace(preset, std::move(s)).first->second;
}

}  // namespace

TEST_CASE("one degree of freedom and a non-negative statistic per layer") {
  const auto& s = shared("h1-undirected");
  for (Layer l : {Layer::L, Layer::A, Layer::Y}) {
    const auto r = test_layer(s.net, s.data, l, 0.05, s.sep);
    REQUIRE(r.status == TestStatus::Ok);
    CHECK(r.df == 1);
    CHECK(r.lr_statistic >= -1e-6);
    CHECK(r.p_value >= 0.0);
    CHECK(r.p_value <= 1.0);
    CHECK(r.effective_sample_size == s.sep.size());
    CHECK(r.decision.has_value());
  }
}

TEST_CASE("alpha = 1 always rejects the contagion null") {
  const auto& s = shared("h1-undirected");
  const auto report = determine_mechanisms(s.net, s.data, 1.0, s.sep);
  CHECK(report.complete());
  CHECK(report.spec.code() == "BBB");
}

TEST_CASE("decisions follow the p-value") {
  const auto& s = shared("h1-bidirected");
  const auto report = determine_mechanisms(s.net, s.data, 0.05, s.sep);
  for (const auto& r : report.layers) {
    REQUIRE(r.decision.has_value());
    CHECK((*r.decision == Mechanism::Bidirected) == (r.p_value < 0.05));
    CHECK(report.spec[r.layer] == *r.decision);
  }
}

TEST_CASE("insufficient samples give an unknown mechanism") {
  const auto& s = shared("h1-undirected");
  const auto r = test_layer(s.net, s.data, Layer::Y, 0.05, s.sep.prefix(5));
  CHECK(r.status == TestStatus::InsufficientSample);
  CHECK_FALSE(r.decision.has_value());
  const auto report = determine_mechanisms(s.net, s.data, 0.05, s.sep.prefix(5));
  CHECK_FALSE(report.complete());
  CHECK(report.spec.Y == Mechanism::Unknown);
}

TEST_CASE("degenerate layers fail the fit instead of deciding") {
  const auto& s = shared("h1-undirected");
  auto data = s.data;
  std::fill(data.Y.begin(), data.Y.end(), 0);
  const auto report = determine_mechanisms(s.net, data, 0.05, s.sep);
  CHECK(report.layers[2].status == TestStatus::FitFailed);
  CHECK(report.spec.Y == Mechanism::Unknown);
  CHECK_FALSE(report.layers[2].diagnostic.empty());
  CHECK(report.layers[0].status == TestStatus::Ok);
}

TEST_CASE("preconditions") {
  const auto& s = shared("h1-undirected");
  auto weak = s.sep;
  weak.k = 5;
  CHECK_THROWS_AS(test_layer(s.net, s.data, Layer::L, 0.05, weak), PreconditionError);
  auto unrestricted = s.sep;
  unrestricted.eligibility = Eligibility::None;
  CHECK_THROWS_AS(test_layer(s.net, s.data, Layer::L, 0.05, unrestricted), PreconditionError);
  const auto dyads = greedy_dyad_separated_set(s.net, 6, 1, 1);
  CHECK_THROWS_AS(test_layer(s.net, s.data, Layer::L, 0.05, dyads), PreconditionError);
  CHECK_THROWS_AS(test_layer(s.net, s.data, Layer::L, 0.0, s.sep), ArgumentError);
  CHECK_THROWS_AS(test_layer(s.net, s.data, Layer::L, 1.5, s.sep), ArgumentError);
  auto bad = s.data;
  bad.Y[0] = 2;
  CHECK_THROWS_AS(determine_mechanisms(s.net, bad, 0.05, 1, 1), ArgumentError);
}

TEST_CASE("statistics do not depend on unit labels") {
  const auto& s = shared("h1-bidirected");
  const std::size_t n = s.net.n_units();
  std::vector<UnitId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(5));
  std::vector<std::pair<UnitId, UnitId>> edges;
  for (auto [u, v] : s.net.edges()) edges.emplace_back(perm[u], perm[v]);
  const FriendshipNetwork relabeled(n, edges);
  NetworkData d = s.data;
  for (UnitId u = 0; u < n; ++u) {
    d.L[perm[u]] = s.data.L[u];
    d.A[perm[u]] = s.data.A[u];
    d.Y[perm[u]] = s.data.Y[u];
  }
  SeparatedSet sep = s.sep;
  for (auto& m : sep.members) m = perm[m];
  for (Layer l : {Layer::L, Layer::A, Layer::Y}) {
    const auto a = test_layer(s.net, s.data, l, 0.05, s.sep);
    const auto b = test_layer(relabeled, d, l, 0.05, sep);
    CHECK(a.lr_statistic == doctest::Approx(b.lr_statistic).epsilon(1e-8));
  }
}

TEST_CASE("the seeded entry point is reproducible") {
  const auto& s = shared("h1-undirected");
  const auto a = determine_mechanisms(s.net, s.data, 0.05, 2, 77);
  const auto b = determine_mechanisms(s.net, s.data, 0.05, 2, 77);
  CHECK(a.separated_set.members == b.separated_set.members);
  for (int i = 0; i < 3; ++i) CHECK(a.layers[i].lr_statistic == b.layers[i].lr_statistic);
  const auto check = verify_separated_set(s.net, a.separated_set);
  CHECK((check.separated && check.eligible && check.maximal));
}
