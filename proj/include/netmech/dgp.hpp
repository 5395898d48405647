#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netmech/data.hpp"
#include "netmech/estimator.hpp"
#include "netmech/network.hpp"

namespace netmech {

// Degree constraints for random friendship networks.
struct DegreeRule {
  enum class Kind { Range, MeanMax };
  Kind kind = Kind::Range;
  std::size_t min = 1;
  std::size_t max = 6;
  double mean = 0.0;

  static DegreeRule range(std::size_t lo, std::size_t hi) { return {Kind::Range, lo, hi, 0.0}; }
  static DegreeRule mean_max(double mean, std::size_t hi) { return {Kind::MeanMax, 0, hi, mean}; }
};

// Random simple graph obeying `rule`; deterministic given seed.
FriendshipNetwork generate_network(std::size_t n, const DegreeRule& rule, std::uint64_t seed);

// Generator for one layer. The linear predictor of unit i is
//   intercept + own_L*L_i + own_A*A_i + ring1_L*sum L + ring1_A*sum A + ring1_Y*sum Y
//   + hidden*sum_k H_ik
// where sums run over ring-1 neighbours and H are per-edge hidden Normal(hidden_mean, hidden_sd)
// variables (bidirected layers only). Undirected layers are Gibbs sampled, with the layer's own
// ring-1 term as the peer coupling. A Gaussian L layer is multivariate normal over the network.
struct LayerGenerator {
  Mechanism mechanism = Mechanism::Undirected;
  bool gaussian = false;
  double intercept = 0.0;
  double own_L = 0.0;
  double own_A = 0.0;
  double ring1_L = 0.0;
  double ring1_A = 0.0;
  double ring1_Y = 0.0;
  double hidden = 0.0;
  double hidden_mean = 0.0;
  double hidden_sd = 1.0;
  LBidirectedParams normal;  // gaussian only
};

struct DgpConfig {
  std::string name;
  LayerGenerator L, A, Y;
  // Systematic sweeps before an undirected layer is read off (200 sweeps = 200*N unit updates).
  std::size_t burnin_sweeps = 200;

  SegregatedGraphSpec spec() const { return {L.mechanism, A.mechanism, Y.mechanism}; }
};

// "h1-undirected", "h1-bidirected", "h1-<LAY>" and "h3-<LAY>" with LAY in {U,B}^3.
DgpConfig dgp_preset(const std::string& name);
std::vector<std::string> dgp_preset_names();

NetworkData generate_data(const FriendshipNetwork& net, const DgpConfig& config, std::uint64_t seed);

// Linear predictor of `layer` for unit i given current values and per-unit hidden sums.
double layer_eta(const LayerGenerator& g, Layer layer, const FriendshipNetwork& net,
                 const NetworkData& data, UnitId i, double hidden_sum);

struct GroundTruth {
  std::vector<double> per_unit;
  double population_average = 0.0;
};

// Post-intervention E[Y_i | do(a)] simulated from the generating process. The L chain keeps one
// draw every gibbs.thinning sweeps after gibbs.burn_in; at each kept draw Y is redrawn given L
// (gibbs.burn_in warm-started sweeps when undirected, an exact draw otherwise). Y is averaged
// over gibbs.resolved_draws(N) such draws.
GroundTruth ground_truth_mean(const FriendshipNetwork& net, const DgpConfig& config,
                              const std::vector<int>& a, const GibbsConfig& gibbs,
                              std::uint64_t seed);

// E[Y | do(a1)] - E[Y | do(a0)] averaged over units.
double ground_truth_effect(const FriendshipNetwork& net, const DgpConfig& config,
                           const std::vector<int>& a1, const std::vector<int>& a0,
                           const GibbsConfig& gibbs, std::uint64_t seed);

}  // namespace netmech
