#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netmech/dgp.hpp"
#include "netmech/estimator.hpp"
#include "netmech/io.hpp"

namespace netmech {

// Greedy S^k search with eligibility NonEmptyRings12: one record per restart, best size and
// node usage in `extra`.
ExperimentReport analyze_network(const FriendshipNetwork& net, std::size_t k,
                                 std::size_t restarts, std::uint64_t seed);

struct SimulationConfig {
  std::string kind = "test-calibration";  // test-calibration | test-power | estimation
  std::string preset;                     // empty picks the kind's default
  std::vector<std::size_t> sizes;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  std::size_t burnin_sweeps = 200;  // data generation

  // Test experiments. Without an input network, one network of network_units units is
  // generated and reused across trials; every trial draws fresh data and a fresh S^6 set and
  // tests each requested size on a prefix of it. With an input network and no sizes, every
  // trial tests on the full best-of-`restarts` set.
  std::size_t network_units = 200000;
  DegreeRule test_degrees = DegreeRule::range(1, 6);
  std::optional<FriendshipNetwork> network;
  std::size_t restarts = 1;

  // Estimation experiments: a fresh network of each size per trial.
  DegreeRule estimation_degrees = DegreeRule::mean_max(5.0, 10);
  EstimatorConfig estimator;
  GibbsConfig truth_gibbs;
  bool baseline = true;  // also run plain auto-g

  std::string resolved_preset() const;
  nlohmann::json to_json() const;
};

ExperimentReport run_simulation(const SimulationConfig& config);

}  // namespace netmech
