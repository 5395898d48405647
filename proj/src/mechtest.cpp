#include "netmech/mechtest.hpp"

#include <algorithm>

#include "netmech/rng.hpp"

namespace netmech {

std::string_view to_string(TestStatus s) {
  switch (s) {
    case TestStatus::Ok: return "ok";
    case TestStatus::InsufficientSample: return "insufficient-sample";
    case TestStatus::FitFailed: return "fit-failed";
  }
  return "?";
}

LayerTestResult test_layer(const FriendshipNetwork& net, const NetworkData& data, Layer layer,
                           double alpha, const SeparatedSet& sep, const FitConfig& fit) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ArgumentError("alpha must lie in (0, 1]");
  if (sep.k < 6 || sep.eligibility != Eligibility::NonEmptyRings12 || !sep.dyads.empty()) {
    throw PreconditionError("layer tests need a 6-separated unit set with non-empty rings 1 and 2");
  }
  const LayerModelSpec null_spec = test_model(layer, Hypothesis::Null);
  const LayerModelSpec alt_spec = test_model(layer, Hypothesis::Alternative);

  LayerTestResult result;
  result.layer = layer;
  result.df = static_cast<int>(alt_spec.size() - null_spec.size());
  result.effective_sample_size = sep.members.size();
  if (sep.members.size() < alt_spec.size() + 1) {
    result.status = TestStatus::InsufficientSample;
    result.diagnostic = "separated set has " + std::to_string(sep.members.size()) +
                        " units; need at least " + std::to_string(alt_spec.size() + 1);
    return result;
  }

  result.null_fit = fit_mle(build_coding_samples(net, data, null_spec, sep), fit);
  result.alternative_fit = fit_mle(build_coding_samples(net, data, alt_spec, sep), fit);
  if (!result.null_fit.converged || !result.alternative_fit.converged) {
    result.status = TestStatus::FitFailed;
    result.diagnostic = !result.null_fit.converged ? "null fit: " + result.null_fit.diagnostic
                                                   : "alternative fit: " + result.alternative_fit.diagnostic;
    return result;
  }
  result.lr_statistic =
      -2.0 * (result.null_fit.log_likelihood - result.alternative_fit.log_likelihood);
  // Tiny negative values are optimizer noise on nested models.
  result.p_value = chi_square_sf(std::max(result.lr_statistic, 0.0), result.df);
  result.decision = result.p_value < alpha ? Mechanism::Bidirected : Mechanism::Undirected;
  return result;
}

MechanismReport determine_mechanisms(const FriendshipNetwork& net, const NetworkData& data,
                                     double alpha, const SeparatedSet& sep, const FitConfig& fit) {
  MechanismReport report;
  report.separated_set = sep;
  const Layer layers[] = {Layer::L, Layer::A, Layer::Y};
  parallel_for(3, [&](std::size_t i) {
    report.layers[i] = test_layer(net, data, layers[i], alpha, sep, fit);
  });
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& r = report.layers[i];
    report.spec[layers[i]] = r.decision.value_or(Mechanism::Unknown);
  }
  return report;
}

MechanismReport determine_mechanisms(const FriendshipNetwork& net, const NetworkData& data,
                                     double alpha, std::size_t restarts, std::uint64_t seed,
                                     const FitConfig& fit) {
  data.validate(net.n_units());
  const SeparatedSet sep =
      greedy_separated_set(net, 6, Eligibility::NonEmptyRings12, restarts, seed);
  return determine_mechanisms(net, data, alpha, sep, fit);
}

}  // namespace netmech
