#include "netmech/estimator.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "netmech/rng.hpp"

namespace netmech {

namespace {

// Extreme eigenvalues of the adjacency matrix by power iteration; used for diagnostics.
std::pair<double, double> adjacency_spectrum_bounds(const FriendshipNetwork& net) {
  const std::size_t n = net.n_units();
  if (n == 0 || net.n_edges() == 0) return {0.0, 0.0};
  auto multiply = [&](const Eigen::VectorXd& x, double shift) {
    Eigen::VectorXd y = shift * x;
    for (UnitId i = 0; i < n; ++i) {
      for (UnitId j : net.neighbors(i)) y[i] += x[j];
    }
    return y;
  };
  auto dominant = [&](double shift) {
    Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += 0.01 * static_cast<double>(i % 7);
    double lambda = 0.0;
    for (int it = 0; it < 500; ++it) {
      Eigen::VectorXd y = multiply(x, shift);
      lambda = x.dot(y) / x.dot(x);
      const double norm = y.norm();
      if (norm == 0.0) break;
      x = y / norm;
    }
    return lambda;
  };
  const double lmax = dominant(0.0);
  // Dominant eigenvalue of (-A + lmax I) is lmax - lmin.
  auto multiply_neg = [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(lmax * x - (multiply(x, 0.0))); };
  Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += (i % 2 ? 0.5 : -0.5);
  double mu = 0.0;
  for (int it = 0; it < 500; ++it) {
    Eigen::VectorXd y = multiply_neg(x);
    mu = x.dot(y) / x.dot(x);
    const double norm = y.norm();
    if (norm == 0.0) break;
    x = y / norm;
  }
  return {lmax - mu, lmax};
}

double ring1_sum(const FriendshipNetwork& net, const double* values, UnitId i) {
  double s = 0.0;
  for (UnitId j : net.neighbors(i)) s += values[j];
  return s;
}

SeparatedSet units_set(const FriendshipNetwork& net, const EstimatorConfig& config, std::uint64_t seed) {
  return greedy_separated_set(net, 2, Eligibility::None, config.separation_restarts,
                              derive_seed(seed, 101));
}

}  // namespace

std::size_t GibbsConfig::resolved_draws(std::size_t n_units) const {
  if (draws > 0) return draws;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.3 * static_cast<double>(n_units))));
}

void GibbsConfig::validate() const {
  if (thinning < 1) throw ArgumentError("Gibbs thinning interval must be >= 1");
}

LBidirectedParams fit_dyad_normal(const NetworkData& data, const SeparatedSet& dyads) {
  if (dyads.dyads.empty()) throw FitError("no dyads available for the bidirected L model");
  double sum = 0.0;
  for (const auto& d : dyads.dyads) sum += data.L.at(d.first) + data.L.at(d.second);
  const double count = 2.0 * static_cast<double>(dyads.dyads.size());
  LBidirectedParams p;
  p.mean = sum / count;
  double ss = 0.0, cross = 0.0;
  for (const auto& d : dyads.dyads) {
    const double u = data.L[d.first] - p.mean, v = data.L[d.second] - p.mean;
    ss += u * u + v * v;
    cross += u * v;
  }
  p.variance = ss / count;
  p.covariance = cross / static_cast<double>(dyads.dyads.size());
  if (!(p.variance > 0.0) || std::abs(p.covariance) >= p.variance) {
    throw FitError("degenerate dyad normal estimate (variance " + std::to_string(p.variance) +
                   ", covariance " + std::to_string(p.covariance) + ")");
  }
  return p;
}

LLayerModel fit_L_layer(const FriendshipNetwork& net, const NetworkData& data, Mechanism mechanism,
                        const SeparatedSet& sep_units, const SeparatedSet& sep_dyads,
                        const FitConfig& fit) {
  data.validate(net.n_units());
  LLayerModel model;
  model.mechanism = mechanism;
  switch (mechanism) {
    case Mechanism::Undirected: {
      const auto samples = build_coding_samples(net, data, covariate_model(), sep_units);
      model.sample_size = samples.rows();
      model.undirected.continuous = data.continuous_L;
      if (data.continuous_L) {
        const LinearFit lf = fit_linear(samples);
        if (!lf.ok) throw FitError("Gaussian L model: " + lf.diagnostic);
        model.undirected.coefficients = lf.coefficients;
        model.undirected.variance = lf.residual_variance;
      } else {
        const FitResult fr = fit_mle(samples, fit);
        if (!fr.converged) throw FitError("L model: " + fr.diagnostic);
        model.undirected.coefficients = fr.params;
      }
      break;
    }
    case Mechanism::Bidirected:
      if (!data.continuous_L) {
        throw PreconditionError("bidirected L estimation is supported for continuous L only");
      }
      model.bidirected = fit_dyad_normal(data, sep_dyads);
      model.sample_size = sep_dyads.dyads.size();
      break;
    case Mechanism::Unknown:
      throw PreconditionError("L mechanism must be determined before estimation");
  }
  return model;
}

YLayerModel fit_Y_layer(const FriendshipNetwork& net, const NetworkData& data, Mechanism mechanism,
                        const SeparatedSet& sep_units, const FitConfig& fit) {
  if (mechanism == Mechanism::Unknown) throw PreconditionError("Y mechanism must be determined before estimation");
  YLayerModel model;
  model.mechanism = mechanism;
  model.fit = fit_mle(build_coding_samples(net, data, outcome_model(mechanism), sep_units), fit);
  if (!model.fit.converged) throw FitError("Y model: " + model.fit.diagnostic);
  model.params = model.fit.params;
  return model;
}

DrawMatrix gibbs_sample_L(const FriendshipNetwork& net, const LUndirectedParams& params,
                          const GibbsConfig& config, std::uint64_t seed) {
  config.validate();
  if (params.coefficients.size() != 2) throw ArgumentError("L conditional model needs 2 coefficients");
  const std::size_t n = net.n_units();
  const std::size_t m = config.resolved_draws(n);
  const double c0 = params.coefficients[0], c1 = params.coefficients[1];
  const double sd = std::sqrt(params.variance);
  Rng rng = make_rng(seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<double> state(n);
  for (auto& v : state) v = params.continuous ? c0 + sd * normal(rng) : bernoulli(rng, 0.5);
  auto sweep = [&] {
    for (UnitId i = 0; i < n; ++i) {
      const double eta = c0 + c1 * ring1_sum(net, state.data(), i);
      state[i] = params.continuous ? eta + sd * normal(rng) : bernoulli(rng, expit(eta));
    }
  };
  for (std::size_t s = 0; s < config.burn_in; ++s) sweep();
  DrawMatrix draws(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (std::size_t d = 0; d < m; ++d) {
    for (std::size_t t = 0; t < config.thinning; ++t) sweep();
    std::copy(state.begin(), state.end(), draws.row(static_cast<Eigen::Index>(d)).data());
  }
  return draws;
}

struct SparseNormalSampler::Factor {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
  Eigen::SparseMatrix<double> lower;
  double mean = 0.0;
};

SparseNormalSampler::SparseNormalSampler(const FriendshipNetwork& net, const LBidirectedParams& params)
    : factor_(std::make_unique<Factor>()) {
  const auto n = static_cast<Eigen::Index>(net.n_units());
  std::vector<Eigen::Triplet<double>> entries;
  for (UnitId i = 0; i < net.n_units(); ++i) {
    entries.emplace_back(i, i, params.variance);
    if (params.covariance != 0.0) {
      for (UnitId j : net.neighbors(i)) entries.emplace_back(i, j, params.covariance);
    }
  }
  Eigen::SparseMatrix<double> cov(n, n);
  cov.setFromTriplets(entries.begin(), entries.end());
  factor_->llt.compute(cov);
  if (!(params.variance > 0.0) || factor_->llt.info() != Eigen::Success) {
    const auto [lmin, lmax] = adjacency_spectrum_bounds(net);
    const double eig = params.variance + std::min(params.covariance * lmin, params.covariance * lmax);
    throw FitError("implied L covariance is not positive definite (smallest eigenvalue ~ " +
                   std::to_string(eig) + ")");
  }
  factor_->lower = factor_->llt.matrixL();
  factor_->mean = params.mean;
}

SparseNormalSampler::~SparseNormalSampler() = default;
SparseNormalSampler::SparseNormalSampler(SparseNormalSampler&&) noexcept = default;
SparseNormalSampler& SparseNormalSampler::operator=(SparseNormalSampler&&) noexcept = default;

std::size_t SparseNormalSampler::dimension() const {
  return static_cast<std::size_t>(factor_->lower.rows());
}

void SparseNormalSampler::draw(Rng& rng, double* out) const {
  const Eigen::Index n = factor_->lower.rows();
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
  // cov = P^-1 L L^T P^-T, so P^-1 L z has covariance cov.
  const Eigen::VectorXd x = factor_->llt.permutationPinv() * (factor_->lower * z);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = x[i] + factor_->mean;
}

DrawMatrix sample_L_mvn(const FriendshipNetwork& net, const LBidirectedParams& params,
                        std::size_t draws, std::uint64_t seed) {
  const SparseNormalSampler sampler(net, params);
  Rng rng = make_rng(seed, 0);
  DrawMatrix out(static_cast<Eigen::Index>(draws), static_cast<Eigen::Index>(net.n_units()));
  for (std::size_t d = 0; d < draws; ++d) sampler.draw(rng, out.row(static_cast<Eigen::Index>(d)).data());
  return out;
}

DrawMatrix gibbs_sample_Y(const FriendshipNetwork& net, const Eigen::VectorXd& params,
                          const DrawMatrix& L_draws, const std::vector<int>& a,
                          const GibbsConfig& config, std::uint64_t seed) {
  config.validate();
  const std::size_t n = net.n_units();
  if (params.size() != 6) throw ArgumentError("undirected Y model needs 6 coefficients");
  if (a.size() != n || static_cast<std::size_t>(L_draws.cols()) != n) {
    throw ArgumentError("treatment vector and L draws must match the network size");
  }
  const double b0 = params[0], b_peer = params[1], b_a = params[2], b_a1 = params[3],
               b_l = params[4], b_l1 = params[5];
  std::vector<double> a_sum(n);
  for (UnitId i = 0; i < n; ++i) {
    double s = 0.0;
    for (UnitId j : net.neighbors(i)) s += a[j];
    a_sum[i] = s;
  }
  const auto m = static_cast<std::size_t>(L_draws.rows());
  DrawMatrix out(L_draws.rows(), L_draws.cols());
  parallel_for(m, [&](std::size_t d) {
    Rng rng = make_rng(seed, d);
    const double* l = L_draws.row(static_cast<Eigen::Index>(d)).data();
    // Success probabilities indexed by the number of treated-state neighbours.
    std::vector<std::size_t> offset(n + 1, 0);
    for (UnitId i = 0; i < n; ++i) offset[i + 1] = offset[i] + net.degree(i) + 1;
    std::vector<double> prob(offset[n]);
    for (UnitId i = 0; i < n; ++i) {
      const double base = b0 + b_a * a[i] + b_a1 * a_sum[i] + b_l * l[i] + b_l1 * ring1_sum(net, l, i);
      for (std::size_t s = 0; s <= net.degree(i); ++s) prob[offset[i] + s] = expit(base + b_peer * s);
    }
    std::vector<unsigned char> y(n);
    for (auto& v : y) v = static_cast<unsigned char>(bernoulli(rng, 0.5));
    for (std::size_t sweep = 0; sweep < config.burn_in; ++sweep) {
      for (UnitId i = 0; i < n; ++i) {
        std::size_t s = 0;
        for (UnitId j : net.neighbors(i)) s += y[j];
        y[i] = static_cast<unsigned char>(uniform01(rng) < prob[offset[i] + s]);
      }
    }
    for (UnitId i = 0; i < n; ++i) out(static_cast<Eigen::Index>(d), i) = y[i];
  });
  return out;
}

DrawMatrix predict_Y(const FriendshipNetwork& net, const Eigen::VectorXd& params,
                     const DrawMatrix& L_draws, const std::vector<int>& a) {
  const std::size_t n = net.n_units();
  if (params.size() != 5) throw ArgumentError("outcome regression needs 5 coefficients");
  if (a.size() != n || static_cast<std::size_t>(L_draws.cols()) != n) {
    throw ArgumentError("treatment vector and L draws must match the network size");
  }
  std::vector<double> a_part(n);
  for (UnitId i = 0; i < n; ++i) {
    double s = 0.0;
    for (UnitId j : net.neighbors(i)) s += a[j];
    a_part[i] = params[0] + params[1] * a[i] + params[2] * s;
  }
  DrawMatrix out(L_draws.rows(), L_draws.cols());
  for (Eigen::Index d = 0; d < L_draws.rows(); ++d) {
    const double* l = L_draws.row(d).data();
    for (UnitId i = 0; i < n; ++i) {
      out(d, i) = expit(a_part[i] + params[3] * l[i] + params[4] * ring1_sum(net, l, i));
    }
  }
  return out;
}

FittedModels fit_models(const FriendshipNetwork& net, const NetworkData& data,
                        const SegregatedGraphSpec& spec, const EstimatorConfig& config,
                        std::uint64_t seed) {
  if (spec.L == Mechanism::Unknown || spec.Y == Mechanism::Unknown) {
    throw PreconditionError("estimation needs determined L and Y mechanisms (got " + spec.code() + ")");
  }
  data.validate(net.n_units());
  const SeparatedSet units = units_set(net, config, seed);
  SeparatedSet dyads;
  if (spec.L == Mechanism::Bidirected) {
    dyads = greedy_dyad_separated_set(net, 2, config.separation_restarts, derive_seed(seed, 102));
  }
  FittedModels models;
  models.n_units = net.n_units();
  models.L = fit_L_layer(net, data, spec.L, units, dyads, config.fit);
  models.Y = fit_Y_layer(net, data, spec.Y, units, config.fit);
  return models;
}

EffectEstimate simulate_effects(const FriendshipNetwork& net, const FittedModels& models,
                                const std::vector<int>& a, const EstimatorConfig& config,
                                std::uint64_t seed) {
  const std::size_t n = net.n_units();
  if (a.size() != n) throw ArgumentError("treatment vector length must equal the network size");
  for (int v : a) {
    if (v != 0 && v != 1) throw ArgumentError("treatment assignments must be binary");
  }
  const std::size_t m = config.gibbs.resolved_draws(n);

  DrawMatrix l_draws;
  GibbsConfig gibbs = config.gibbs;
  gibbs.draws = m;
  switch (models.L.mechanism) {
    case Mechanism::Undirected:
      l_draws = gibbs_sample_L(net, models.L.undirected, gibbs, derive_seed(seed, 1));
      break;
    case Mechanism::Bidirected:
      l_draws = sample_L_mvn(net, models.L.bidirected, m, derive_seed(seed, 1));
      break;
    case Mechanism::Unknown:
      throw PreconditionError("L model is not fitted");
  }

  DrawMatrix y_draws;
  switch (models.Y.mechanism) {
    case Mechanism::Undirected:
      y_draws = gibbs_sample_Y(net, models.Y.params, l_draws, a, gibbs, derive_seed(seed, 2));
      break;
    case Mechanism::Bidirected:
      y_draws = predict_Y(net, models.Y.params, l_draws, a);
      break;
    case Mechanism::Unknown:
      throw PreconditionError("Y model is not fitted");
  }

  EffectEstimate est;
  est.n_draws = m;
  est.per_unit.resize(n);
  const Eigen::VectorXd means = y_draws.colwise().mean().transpose();
  for (std::size_t i = 0; i < n; ++i) est.per_unit[i] = means[static_cast<Eigen::Index>(i)];
  double total = 0.0;
  for (double v : est.per_unit) total += v;
  est.population_average = n ? total / static_cast<double>(n) : 0.0;
  if (config.keep_draws) est.y_draws = std::move(y_draws);
  return est;
}

EffectEstimate estimate_effects(const FriendshipNetwork& net, const NetworkData& data,
                                const SegregatedGraphSpec& spec, const std::vector<int>& a,
                                const EstimatorConfig& config, std::uint64_t seed) {
  const FittedModels models = fit_models(net, data, spec, config, seed);
  return simulate_effects(net, models, a, config, derive_seed(seed, 11));
}

OverallEffect overall_effect(const FriendshipNetwork& net, const NetworkData& data,
                             const SegregatedGraphSpec& spec, const EstimatorConfig& config,
                             std::uint64_t seed) {
  OverallEffect out;
  out.models = fit_models(net, data, spec, config, seed);
  const std::size_t n = net.n_units();
  out.treated = simulate_effects(net, out.models, std::vector<int>(n, 1), config, derive_seed(seed, 11));
  out.untreated = simulate_effects(net, out.models, std::vector<int>(n, 0), config, derive_seed(seed, 12));
  out.contrast = out.treated.population_average - out.untreated.population_average;
  return out;
}

SegregatedGraphSpec auto_g_spec(const SegregatedGraphSpec& spec) {
  return {Mechanism::Undirected, spec.A, Mechanism::Undirected};
}

}  // namespace netmech
