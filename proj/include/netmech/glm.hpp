#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "netmech/data.hpp"
#include "netmech/network.hpp"

namespace netmech {

// Numerically stable logistic function.
double expit(double x);
// log(expit(x)) without overflow.
double log_expit(double x);

// Aggregate statistic used as a regressor for a unit:
//   Intercept          1
//   Own(layer)         the unit's own value
//   RingSum(layer, r)  sum of `layer` over units exactly r hops away
struct Feature {
  enum class Kind { Intercept, Own, RingSum };
  Kind kind = Kind::Intercept;
  Layer layer = Layer::L;
  int ring = 0;

  static Feature intercept() { return {Kind::Intercept, Layer::L, 0}; }
  static Feature own(Layer l) { return {Kind::Own, l, 0}; }
  static Feature ring_sum(Layer l, int r) { return {Kind::RingSum, l, r}; }
  std::string name() const;
  bool operator==(const Feature&) const = default;
};

enum class Hypothesis { Null, Alternative };

struct LayerModelSpec {
  Layer response = Layer::L;
  std::vector<Feature> features;

  std::size_t size() const { return features.size(); }
  int max_ring() const;
  std::vector<std::string> names() const;
};

// Nested logistic models for the per-layer mechanism tests. The alternative appends the
// ring-2 sum of the response layer to the null feature list.
LayerModelSpec test_model(Layer layer, Hypothesis hypothesis);

// p(L_i | L over ring 1): intercept, ring-1 L sum.
LayerModelSpec covariate_model();

// Y model used for effect estimation. Undirected: conditions on ring-1 Y, A and L over
// rings 0-1. Bidirected: the outcome regression without peer outcomes.
LayerModelSpec outcome_model(Mechanism y_mechanism);

// Feature vector of one unit. `rings` must come from distance_rings(net, i, >= max_ring).
void fill_features(const LayerModelSpec& spec, const NetworkData& data,
                   const std::vector<std::vector<UnitId>>& rings, double* out);

struct CodingSampleSet {
  Eigen::MatrixXd features;  // one row per unit
  Eigen::VectorXd response;
  std::vector<UnitId> units;
  std::size_t k = 0;  // separation degree of the originating set

  std::size_t rows() const { return units.size(); }
  std::size_t cols() const { return static_cast<std::size_t>(features.cols()); }
};

CodingSampleSet build_coding_samples(const FriendshipNetwork& net, const NetworkData& data,
                                     const LayerModelSpec& spec, const SeparatedSet& sep);

double coding_log_likelihood(const CodingSampleSet& s, const Eigen::VectorXd& params);
Eigen::VectorXd coding_gradient(const CodingSampleSet& s, const Eigen::VectorXd& params);
Eigen::MatrixXd coding_hessian(const CodingSampleSet& s, const Eigen::VectorXd& params);

struct FitConfig {
  std::size_t max_iterations = 100;
  double gradient_tolerance = 1e-8;
  std::size_t max_halvings = 30;
  double ridge = 1e-8;
  // Under (quasi-)separation the optimiser drifts towards infinity and the observed information
  // vanishes; a standard error beyond this bound is reported as separation.
  double separation_se = 1e3;
};

struct FitResult {
  Eigen::VectorXd params;
  Eigen::VectorXd standard_errors;  // from the observed information; empty if unavailable
  double log_likelihood = 0.0;
  double gradient_max_norm = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  std::string diagnostic;
};

// Newton-Raphson with step halving on the logistic coding log-likelihood.
FitResult fit_mle(const CodingSampleSet& samples, const FitConfig& config = {});

struct LinearFit {
  Eigen::VectorXd coefficients;
  double residual_variance = 0.0;
  bool ok = false;
  std::string diagnostic;
};

// Least squares for continuous responses (Gaussian conditional models).
LinearFit fit_linear(const CodingSampleSet& samples);

// Upper tail P(chi2_df >= x).
double chi_square_sf(double x, int df);

}  // namespace netmech
