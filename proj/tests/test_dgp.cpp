#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "fixtures.hpp"
#include "netmech/dgp.hpp"
#include "oracles.hpp"

using namespace netmech;
using doctest::Approx;

TEST_CASE("degree ranges are respected") {
  for (auto [lo, hi] : {std::pair<std::size_t, std::size_t>{1, 6}, {2, 4}, {3, 3}}) {
    const auto net = generate_network(5000, DegreeRule::range(lo, hi), lo * 10 + hi);
    std::size_t min_deg = SIZE_MAX, max_deg = 0;
    for (UnitId i = 0; i < net.n_units(); ++i) {
      min_deg = std::min(min_deg, net.degree(i));
      max_deg = std::max(max_deg, net.degree(i));
    }
    CHECK(min_deg >= lo);
    CHECK(max_deg <= hi);
  }
}

TEST_CASE("degree one everywhere is a perfect matching") {
  const auto net = generate_network(1000, DegreeRule::range(1, 1), 4);
  CHECK(net.n_edges() == 500);
  for (UnitId i = 0; i < 1000; ++i) CHECK(net.degree(i) == 1);
}

TEST_CASE("mean/max rule") {
  const auto net = generate_network(20000, DegreeRule::mean_max(5, 10), 6);
  double total = 0;
  for (UnitId i = 0; i < net.n_units(); ++i) {
    CHECK(net.degree(i) <= 10);
    total += net.degree(i);
  }
  // Truncating a Poisson(5) at 10 and dropping the odd duplicate stub costs little.
  CHECK(total / 20000 == Approx(5.0).epsilon(0.03));
}

TEST_CASE("infeasible rules are rejected") {
  CHECK_THROWS_AS(generate_network(5, DegreeRule::range(1, 1), 1), ArgumentError);
  CHECK_THROWS_AS(generate_network(3, DegreeRule::range(3, 4), 1), ArgumentError);
  CHECK_THROWS_AS(generate_network(10, DegreeRule::range(4, 2), 1), ArgumentError);
  CHECK_THROWS_AS(generate_network(10, DegreeRule::mean_max(7, 5), 1), ArgumentError);
  CHECK(generate_network(0, DegreeRule::range(1, 6), 1).n_units() == 0);
  // max is capped at n - 1
  const auto tiny = generate_network(4, DegreeRule::range(1, 6), 2);
  for (UnitId i = 0; i < 4; ++i) CHECK(tiny.degree(i) <= 3);
}

TEST_CASE("generation is deterministic") {
  const auto a = generate_network(2000, DegreeRule::range(1, 6), 9);
  const auto b = generate_network(2000, DegreeRule::range(1, 6), 9);
  const auto c = generate_network(2000, DegreeRule::range(1, 6), 10);
  CHECK(a.edges() == b.edges());
  CHECK(a.edges() != c.edges());
  const auto cfg = dgp_preset("h3-BBB");
  const auto d1 = generate_data(a, cfg, 3), d2 = generate_data(a, cfg, 3);
  CHECK(d1.L == d2.L);
  CHECK(d1.A == d2.A);
  CHECK(d1.Y == d2.Y);
  CHECK(d1.continuous_L);
  d1.validate(a.n_units());
}

TEST_CASE("linear predictor follows the layer formula") {
  const auto net = fixtures::figure1a();
  NetworkData d;
  d.continuous_L = true;
  d.L = {0, 0.5, 1, 0, 2, 3, 1.5, 0, 0, 0, 0};
  d.A = {0, 1, 1, 0, 0, 1, 0, 1, 0, 0, 0};
  d.Y = {0, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0};
  LayerGenerator g;
  g.intercept = 0.1;
  g.own_L = 0.2;
  g.own_A = 0.3;
  g.ring1_L = 0.4;
  g.ring1_A = 0.5;
  g.ring1_Y = 0.6;
  g.hidden = 2.0;
  // unit 5: neighbours 2, 4, 6
  const double sum_l = 1 + 2 + 1.5, sum_a = 1, sum_y = 1 + 1 + 1;
  g.mechanism = Mechanism::Undirected;
  CHECK(layer_eta(g, Layer::Y, net, d, 5, 0.0) ==
        Approx(0.1 + 0.2 * 3 + 0.3 * 1 + 0.4 * sum_l + 0.5 * sum_a + 0.6 * sum_y));
  CHECK(layer_eta(g, Layer::A, net, d, 5, 0.0) == Approx(0.1 + 0.2 * 3 + 0.4 * sum_l + 0.5 * sum_a));
  CHECK(layer_eta(g, Layer::L, net, d, 5, 0.0) == Approx(0.1 + 0.4 * sum_l));
  // Bidirected layers drop their own peer term and use the hidden sum.
  g.mechanism = Mechanism::Bidirected;
  CHECK(layer_eta(g, Layer::Y, net, d, 5, 0.7) ==
        Approx(0.1 + 2.0 * 0.7 + 0.2 * 3 + 0.3 * 1 + 0.4 * sum_l + 0.5 * sum_a));
  CHECK(layer_eta(g, Layer::L, net, d, 5, 0.7) == Approx(0.1 + 2.0 * 0.7));
}

TEST_CASE("zero coefficients give fair coins") {
  const auto net = generate_network(20000, DegreeRule::range(1, 6), 1);
  DgpConfig cfg;
  cfg.burnin_sweeps = 5;
  const auto d = generate_data(net, cfg, 2);
  auto mean = [](const auto& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); };
  CHECK(mean(d.L) == Approx(0.5).epsilon(0.04));
  CHECK(mean(d.A) == Approx(0.5).epsilon(0.04));
  CHECK(mean(d.Y) == Approx(0.5).epsilon(0.04));
}

TEST_CASE("presets") {
  const auto names = dgp_preset_names();
  CHECK(names.size() == 18);
  for (const auto& n : names) {
    const auto cfg = dgp_preset(n);
    CHECK(cfg.spec().fully_determined());
  }
  CHECK(dgp_preset("h1-undirected").spec().code() == "UUU");
  CHECK(dgp_preset("h1-bidirected").spec().code() == "BBB");
  CHECK(dgp_preset("h3-BUB").spec().code() == "BUB");
  CHECK(dgp_preset("h3-BUU").L.gaussian);
  CHECK_FALSE(dgp_preset("h1-BUU").L.gaussian);
  CHECK_THROWS_AS(dgp_preset("h2-UUU"), ArgumentError);
  CHECK_THROWS_AS(dgp_preset("h1-UU?"), ArgumentError);
}

TEST_CASE("ground truth matches the exact dyad functional") {
  const auto net = fixtures::path(2);
  GibbsConfig g;
  g.draws = 200000;
  g.thinning = 1;
  g.burn_in = 100;
  std::uint64_t seed = 100;
  for (const auto& name : dgp_preset_names()) {
    const auto cfg = dgp_preset(name);
    for (const std::vector<int>& a : {std::vector<int>{1, 1}, std::vector<int>{0, 1}}) {
      const double exact = oracle::dyad_truth(cfg, a);
      const auto truth = ground_truth_mean(net, cfg, a, g, ++seed);
      CHECK_MESSAGE(std::abs(truth.per_unit[0] - exact) < 0.005,
                    name << " a=(" << a[0] << a[1] << "): " << truth.per_unit[0] << " vs " << exact);
    }
  }
}

TEST_CASE("treatment without any effect on Y has a null contrast") {
  const auto net = generate_network(2000, DegreeRule::range(1, 6), 3);
  auto cfg = dgp_preset("h1-UUU");
  cfg.Y.own_A = 0;
  cfg.Y.ring1_A = 0;
  GibbsConfig g;
  g.draws = 600;
  const double effect = ground_truth_effect(net, cfg, std::vector<int>(2000, 1),
                                            std::vector<int>(2000, 0), g, 5);
  CHECK(std::abs(effect) < 0.01);
  CHECK_THROWS_AS(ground_truth_mean(net, cfg, {1, 0}, g, 1), ArgumentError);
}
