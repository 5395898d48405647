#include "netmech/glm.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <string>

namespace netmech {

void NetworkData::validate(std::size_t n_units) const {
  if (L.size() != n_units || A.size() != n_units || Y.size() != n_units) {
    throw ArgumentError("data vectors must have length " + std::to_string(n_units) + " (got L=" +
                        std::to_string(L.size()) + ", A=" + std::to_string(A.size()) +
                        ", Y=" + std::to_string(Y.size()) + ")");
  }
  auto binary = [](double v) { return v == 0.0 || v == 1.0; };
  for (std::size_t i = 0; i < n_units; ++i) {
    if (!binary(A[i]) || !binary(Y[i])) {
      throw ArgumentError("A and Y must be binary (unit " + std::to_string(i) + ")");
    }
    if (!continuous_L && !binary(L[i])) {
      throw ArgumentError("L is flagged binary but unit " + std::to_string(i) + " has L=" +
                          std::to_string(L[i]));
    }
    if (!std::isfinite(L[i])) throw ArgumentError("non-finite L at unit " + std::to_string(i));
  }
}

double expit(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_expit(double x) {
  if (x >= 0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

std::string Feature::name() const {
  switch (kind) {
    case Kind::Intercept: return "intercept";
    case Kind::Own: return std::string(to_string(layer)) + "_i";
    case Kind::RingSum: return "sum_" + std::string(to_string(layer)) + "_ring" + std::to_string(ring);
  }
  return "?";
}

int LayerModelSpec::max_ring() const {
  int r = 0;
  for (const auto& f : features) r = std::max(r, f.ring);
  return r;
}

std::vector<std::string> LayerModelSpec::names() const {
  std::vector<std::string> out;
  for (const auto& f : features) out.push_back(f.name());
  return out;
}

LayerModelSpec test_model(Layer layer, Hypothesis hypothesis) {
  using F = Feature;
  LayerModelSpec spec{layer, {F::intercept(), F::ring_sum(layer, 1)}};
  auto& f = spec.features;
  if (layer == Layer::Y) {
    f.push_back(F::own(Layer::A));
    for (int r = 1; r <= 3; ++r) f.push_back(F::ring_sum(Layer::A, r));
  }
  if (layer != Layer::L) {
    f.push_back(F::own(Layer::L));
    for (int r = 1; r <= 3; ++r) f.push_back(F::ring_sum(Layer::L, r));
  }
  if (hypothesis == Hypothesis::Alternative) f.push_back(F::ring_sum(layer, 2));
  return spec;
}

LayerModelSpec covariate_model() {
  return {Layer::L, {Feature::intercept(), Feature::ring_sum(Layer::L, 1)}};
}

LayerModelSpec outcome_model(Mechanism y_mechanism) {
  using F = Feature;
  if (y_mechanism == Mechanism::Unknown) throw PreconditionError("outcome model needs a known Y mechanism");
  LayerModelSpec spec{Layer::Y, {F::intercept()}};
  if (y_mechanism == Mechanism::Undirected) spec.features.push_back(F::ring_sum(Layer::Y, 1));
  spec.features.push_back(F::own(Layer::A));
  spec.features.push_back(F::ring_sum(Layer::A, 1));
  spec.features.push_back(F::own(Layer::L));
  spec.features.push_back(F::ring_sum(Layer::L, 1));
  return spec;
}

void fill_features(const LayerModelSpec& spec, const NetworkData& data,
                   const std::vector<std::vector<UnitId>>& rings, double* out) {
  const UnitId i = rings.at(0).at(0);
  for (std::size_t c = 0; c < spec.features.size(); ++c) {
    const Feature& f = spec.features[c];
    switch (f.kind) {
      case Feature::Kind::Intercept: out[c] = 1.0; break;
      case Feature::Kind::Own: out[c] = data.value(f.layer, i); break;
      case Feature::Kind::RingSum: {
        double s = 0.0;
        if (static_cast<std::size_t>(f.ring) < rings.size()) {
          for (UnitId j : rings[f.ring]) s += data.value(f.layer, j);
        }
        out[c] = s;
        break;
      }
    }
  }
}

CodingSampleSet build_coding_samples(const FriendshipNetwork& net, const NetworkData& data,
                                     const LayerModelSpec& spec, const SeparatedSet& sep) {
  data.validate(net.n_units());
  if (spec.max_ring() >= 2 && sep.eligibility != Eligibility::NonEmptyRings12) {
    throw PreconditionError("models using ring-2 statistics need a set restricted to units with "
                            "non-empty rings 1 and 2");
  }
  CodingSampleSet out;
  out.k = sep.k;
  out.units = sep.members;
  const auto rows = static_cast<Eigen::Index>(sep.members.size());
  const auto cols = static_cast<Eigen::Index>(spec.size());
  out.features.resize(rows, cols);
  out.response.resize(rows);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> buffer(rows, cols);
  const auto depth = static_cast<std::size_t>(std::max(spec.max_ring(), 1));
  for (Eigen::Index r = 0; r < rows; ++r) {
    const UnitId i = sep.members[r];
    net.check_unit(i);
    const auto rings = distance_rings(net, i, depth);
    fill_features(spec, data, rings, buffer.row(r).data());
    out.response[r] = data.value(spec.response, i);
  }
  out.features = buffer;
  return out;
}

double coding_log_likelihood(const CodingSampleSet& s, const Eigen::VectorXd& params) {
  if (static_cast<std::size_t>(params.size()) != s.cols()) {
    throw ArgumentError("parameter length " + std::to_string(params.size()) +
                        " does not match feature count " + std::to_string(s.cols()));
  }
  if (s.rows() == 0) return 0.0;
  const Eigen::VectorXd eta = s.features * params;
  double ll = 0.0;
  for (Eigen::Index r = 0; r < eta.size(); ++r) {
    const double y = s.response[r];
    ll += y * log_expit(eta[r]) + (1.0 - y) * log_expit(-eta[r]);
  }
  return ll;
}

Eigen::VectorXd coding_gradient(const CodingSampleSet& s, const Eigen::VectorXd& params) {
  if (static_cast<std::size_t>(params.size()) != s.cols()) throw ArgumentError("parameter length mismatch");
  Eigen::VectorXd resid(static_cast<Eigen::Index>(s.rows()));
  const Eigen::VectorXd eta = s.features * params;
  for (Eigen::Index r = 0; r < eta.size(); ++r) resid[r] = s.response[r] - expit(eta[r]);
  return s.features.transpose() * resid;
}

Eigen::MatrixXd coding_hessian(const CodingSampleSet& s, const Eigen::VectorXd& params) {
  if (static_cast<std::size_t>(params.size()) != s.cols()) throw ArgumentError("parameter length mismatch");
  const Eigen::VectorXd eta = s.features * params;
  Eigen::VectorXd w(eta.size());
  for (Eigen::Index r = 0; r < eta.size(); ++r) {
    const double p = expit(eta[r]);
    w[r] = p * (1.0 - p);
  }
  return -(s.features.transpose() * w.asDiagonal() * s.features);
}

FitResult fit_mle(const CodingSampleSet& samples, const FitConfig& config) {
  const auto p = static_cast<Eigen::Index>(samples.cols());
  FitResult result;
  result.params = Eigen::VectorXd::Zero(p);
  if (samples.rows() == 0) {
    result.diagnostic = "no samples";
    return result;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(samples.features);
  if (qr.rank() < p) {
    result.diagnostic = "rank-deficient design (rank " + std::to_string(qr.rank()) + " < " +
                        std::to_string(p) + " features)";
    result.log_likelihood = coding_log_likelihood(samples, result.params);
    return result;
  }

  Eigen::VectorXd beta = result.params;
  double ll = coding_log_likelihood(samples, beta);
  Eigen::VectorXd grad = coding_gradient(samples, beta);
  bool stalled = false;
  std::size_t it = 0;
  for (; it < config.max_iterations; ++it) {
    if (grad.lpNorm<Eigen::Infinity>() < config.gradient_tolerance) break;
    Eigen::MatrixXd info = -coding_hessian(samples, beta);
    Eigen::LLT<Eigen::MatrixXd> llt(info);
    if (llt.info() != Eigen::Success) {
      info.diagonal().array() += config.ridge * std::max(1.0, info.diagonal().maxCoeff());
      llt.compute(info);
      if (llt.info() != Eigen::Success) {
        result.diagnostic = "singular information matrix";
        stalled = true;
        break;
      }
    }
    const Eigen::VectorXd step = llt.solve(grad);
    double t = 1.0;
    bool accepted = false;
    for (std::size_t h = 0; h <= config.max_halvings; ++h, t *= 0.5) {
      const Eigen::VectorXd candidate = beta + t * step;
      const double cand_ll = coding_log_likelihood(samples, candidate);
      if (std::isfinite(cand_ll) && cand_ll >= ll - 1e-12 * std::abs(ll)) {
        beta = candidate;
        ll = cand_ll;
        accepted = true;
        break;
      }
    }
    grad = coding_gradient(samples, beta);
    if (!accepted) {
      stalled = grad.lpNorm<Eigen::Infinity>() >= config.gradient_tolerance;
      if (stalled) result.diagnostic = "step halving failed to improve the likelihood";
      break;
    }
  }

  result.params = beta;
  result.log_likelihood = ll;
  result.iterations = it;
  result.gradient_max_norm = grad.lpNorm<Eigen::Infinity>();
  result.converged = !stalled && result.gradient_max_norm < config.gradient_tolerance;
  if (!result.converged && result.diagnostic.empty()) {
    result.diagnostic = "no convergence after " + std::to_string(it) + " iterations";
  }

  Eigen::LLT<Eigen::MatrixXd> info(-coding_hessian(samples, beta));
  if (info.info() == Eigen::Success) {
    const Eigen::MatrixXd cov = info.solve(Eigen::MatrixXd::Identity(p, p));
    result.standard_errors = cov.diagonal().cwiseSqrt();
  }
  if (result.standard_errors.size() == 0 || !result.standard_errors.allFinite() ||
      result.standard_errors.maxCoeff() > config.separation_se) {
    const Eigen::VectorXd eta = samples.features * beta;
    result.converged = false;
    result.diagnostic = "perfect or quasi-complete separation (vanishing information; |eta| up to " +
                        std::to_string(eta.cwiseAbs().maxCoeff()) + ")";
  }
  return result;
}

LinearFit fit_linear(const CodingSampleSet& samples) {
  LinearFit fit;
  const auto n = static_cast<Eigen::Index>(samples.rows());
  const auto p = static_cast<Eigen::Index>(samples.cols());
  if (n <= p) {
    fit.diagnostic = "need more rows than features";
    return fit;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(samples.features);
  if (qr.rank() < p) {
    fit.diagnostic = "rank-deficient design";
    return fit;
  }
  fit.coefficients = qr.solve(samples.response);
  const Eigen::VectorXd resid = samples.response - samples.features * fit.coefficients;
  fit.residual_variance = resid.squaredNorm() / static_cast<double>(n - p);
  fit.ok = fit.residual_variance > 0.0;
  if (!fit.ok) fit.diagnostic = "zero residual variance";
  return fit;
}

double chi_square_sf(double x, int df) {
  if (!(x >= 0.0)) throw ArgumentError("chi-square statistic must be non-negative");
  if (df < 1) throw ArgumentError("degrees of freedom must be positive");
  if (x == 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

}  // namespace netmech
