#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "netmech/data.hpp"
#include "netmech/glm.hpp"
#include "netmech/network.hpp"
#include "netmech/rng.hpp"
#include "netmech/sgraph.hpp"

namespace netmech {

// Rows are draws, columns are units.
using DrawMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct GibbsConfig {
  std::size_t draws = 0;  // 0 selects ceil(0.3 * N)
  std::size_t thinning = 3;
  std::size_t burn_in = 200;

  std::size_t resolved_draws(std::size_t n_units) const;
  void validate() const;
};

// Shared mean, variance and adjacent-pair covariance of the dyad normal model of L.
struct LBidirectedParams {
  double mean = 0.0;
  double variance = 1.0;
  double covariance = 0.0;
};

// Conditional model of L given its ring-1 neighbours (undirected mechanism).
// Binary L: logistic with [intercept, ring-1 sum]; continuous L: Gaussian auto-model.
struct LUndirectedParams {
  bool continuous = false;
  Eigen::VectorXd coefficients;  // intercept, ring-1 sum
  double variance = 0.0;         // Gaussian only
};

struct LLayerModel {
  Mechanism mechanism = Mechanism::Unknown;
  LUndirectedParams undirected;
  LBidirectedParams bidirected;
  std::size_t sample_size = 0;  // units or dyads used
};

struct YLayerModel {
  Mechanism mechanism = Mechanism::Unknown;
  Eigen::VectorXd params;  // ordered as outcome_model(mechanism)
  FitResult fit;
};

LLayerModel fit_L_layer(const FriendshipNetwork& net, const NetworkData& data, Mechanism mechanism,
                        const SeparatedSet& sep_units, const SeparatedSet& sep_dyads,
                        const FitConfig& fit = {});

// Closed-form maximiser of the exchangeable bivariate normal dyad likelihood.
LBidirectedParams fit_dyad_normal(const NetworkData& data, const SeparatedSet& dyads);

YLayerModel fit_Y_layer(const FriendshipNetwork& net, const NetworkData& data, Mechanism mechanism,
                        const SeparatedSet& sep_units, const FitConfig& fit = {});

DrawMatrix gibbs_sample_L(const FriendshipNetwork& net, const LUndirectedParams& params,
                          const GibbsConfig& config, std::uint64_t seed);

// Draws from N(mean * 1, variance * I + covariance * adjacency) via a sparse Cholesky factor.
class SparseNormalSampler {
 public:
  // Throws FitError if the implied covariance is not positive definite.
  SparseNormalSampler(const FriendshipNetwork& net, const LBidirectedParams& params);
  ~SparseNormalSampler();
  SparseNormalSampler(SparseNormalSampler&&) noexcept;
  SparseNormalSampler& operator=(SparseNormalSampler&&) noexcept;

  void draw(Rng& rng, double* out) const;
  std::size_t dimension() const;

 private:
  struct Factor;
  std::unique_ptr<Factor> factor_;
};

// Independent draws from N(mean * 1, variance * I + covariance * adjacency).
// Throws FitError if the implied covariance is not positive definite.
DrawMatrix sample_L_mvn(const FriendshipNetwork& net, const LBidirectedParams& params,
                        std::size_t draws, std::uint64_t seed);

// One Y draw per L draw: burn_in sweeps from a random start, keeping the final state.
DrawMatrix gibbs_sample_Y(const FriendshipNetwork& net, const Eigen::VectorXd& params,
                          const DrawMatrix& L_draws, const std::vector<int>& a,
                          const GibbsConfig& config, std::uint64_t seed);

// E[Y_i | a, L^(m)] under the outcome regression, for every draw m and unit i.
DrawMatrix predict_Y(const FriendshipNetwork& net, const Eigen::VectorXd& params,
                     const DrawMatrix& L_draws, const std::vector<int>& a);

struct EffectEstimate {
  std::vector<double> per_unit;  // estimates of E[Y_i | do(a)]
  double population_average = 0.0;
  std::size_t n_draws = 0;
  DrawMatrix y_draws;  // filled only when requested
};

struct EstimatorConfig {
  GibbsConfig gibbs;
  FitConfig fit;
  std::size_t separation_restarts = 1;
  bool keep_draws = false;
};

struct FittedModels {
  LLayerModel L;
  YLayerModel Y;
  std::size_t n_units = 0;
};

FittedModels fit_models(const FriendshipNetwork& net, const NetworkData& data,
                        const SegregatedGraphSpec& spec, const EstimatorConfig& config,
                        std::uint64_t seed);

// Monte Carlo evaluation of the identifying functional under fitted (or known) models.
EffectEstimate simulate_effects(const FriendshipNetwork& net, const FittedModels& models,
                                const std::vector<int>& a, const EstimatorConfig& config,
                                std::uint64_t seed);

EffectEstimate estimate_effects(const FriendshipNetwork& net, const NetworkData& data,
                                const SegregatedGraphSpec& spec, const std::vector<int>& a,
                                const EstimatorConfig& config, std::uint64_t seed);

struct OverallEffect {
  EffectEstimate treated;    // do(1)
  EffectEstimate untreated;  // do(0)
  double contrast = 0.0;
  FittedModels models;
};

OverallEffect overall_effect(const FriendshipNetwork& net, const NetworkData& data,
                             const SegregatedGraphSpec& spec, const EstimatorConfig& config,
                             std::uint64_t seed);

// The plain auto-g-computation baseline: L and Y layers treated as undirected.
SegregatedGraphSpec auto_g_spec(const SegregatedGraphSpec& spec);

}  // namespace netmech
