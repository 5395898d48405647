#include "netmech/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netmech/mechtest.hpp"
#include "netmech/rng.hpp"

namespace netmech {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

nlohmann::json gibbs_json(const GibbsConfig& g) {
  return {{"draws", g.draws}, {"thinning", g.thinning}, {"burn_in", g.burn_in}};
}

nlohmann::json degrees_json(const DegreeRule& r) {
  if (r.kind == DegreeRule::Kind::Range) return {{"min", r.min}, {"max", r.max}};
  return {{"mean", r.mean}, {"max", r.max}};
}

TrialRecord test_record(std::size_t trial, std::size_t size, const LayerTestResult& r) {
  TrialRecord rec;
  rec.trial = trial;
  rec.size = size;
  rec.series = std::string(to_string(r.layer));
  rec.value = r.lr_statistic;
  rec.p_value = r.p_value;
  switch (r.status) {
    case TestStatus::Ok:
      rec.decision = *r.decision == Mechanism::Bidirected ? 1 : 0;
      break;
    case TestStatus::InsufficientSample:
      rec.status = "insufficient-sample";
      break;
    case TestStatus::FitFailed:
      rec.status = "fit-failed";
      break;
  }
  return rec;
}

std::vector<TrialRecord> test_trial(const FriendshipNetwork& net, const DgpConfig& dgp,
                                    const SimulationConfig& config, std::size_t trial) {
  const std::uint64_t trial_seed = derive_seed(config.seed, 1000 + trial);
  const NetworkData data = generate_data(net, dgp, derive_seed(trial_seed, 1));
  const SeparatedSet full = greedy_separated_set(net, 6, Eligibility::NonEmptyRings12,
                                                 config.restarts, derive_seed(trial_seed, 2));
  std::vector<TrialRecord> out;
  TrialRecord set_size;
  set_size.trial = trial;
  set_size.series = "S6";
  set_size.value = static_cast<double>(full.size());
  set_size.p_value = kNaN;

  const std::vector<std::size_t> sizes = config.sizes.empty() ? std::vector<std::size_t>{0}
                                                              : config.sizes;
  for (std::size_t size : sizes) {
    set_size.size = size;
    out.push_back(set_size);
    if (size > full.size()) {
      for (Layer layer : {Layer::L, Layer::A, Layer::Y}) {
        TrialRecord rec;
        rec.trial = trial;
        rec.size = size;
        rec.series = std::string(to_string(layer));
        rec.status = "set-too-small";
        rec.p_value = kNaN;
        out.push_back(rec);
      }
      continue;
    }
    const SeparatedSet sep = size == 0 ? full : full.prefix(size);
    for (Layer layer : {Layer::L, Layer::A, Layer::Y}) {
      out.push_back(test_record(trial, size, test_layer(net, data, layer, config.alpha, sep)));
    }
  }
  return out;
}

std::vector<TrialRecord> estimation_trial(const DgpConfig& dgp, const SimulationConfig& config,
                                          std::size_t size, std::size_t trial) {
  const std::uint64_t trial_seed = derive_seed(derive_seed(config.seed, 2000 + size), trial);
  const FriendshipNetwork net =
      generate_network(size, config.estimation_degrees, derive_seed(trial_seed, 1));
  const NetworkData data = generate_data(net, dgp, derive_seed(trial_seed, 2));
  const std::vector<int> ones(size, 1), zeros(size, 0);

  std::vector<TrialRecord> out;
  auto push = [&](const std::string& series, double value, const std::string& status = "ok") {
    TrialRecord rec;
    rec.trial = trial;
    rec.size = size;
    rec.series = series;
    rec.status = status;
    rec.value = status == "ok" ? value : kNaN;
    rec.p_value = kNaN;
    out.push_back(rec);
  };
  const double truth =
      ground_truth_effect(net, dgp, ones, zeros, config.truth_gibbs, derive_seed(trial_seed, 3));
  push("truth", truth);

  auto run = [&](const std::string& name, const SegregatedGraphSpec& spec, std::uint64_t stream) {
    try {
      const double est =
          overall_effect(net, data, spec, config.estimator, derive_seed(trial_seed, stream)).contrast;
      push(name, est);
      push(name + "-error", est - truth);
    } catch (const FitError&) {
      push(name, 0.0, "fit-failed");
      push(name + "-error", 0.0, "fit-failed");
    }
  };
  run("ours", dgp.spec(), 4);
  if (config.baseline) run("autog", auto_g_spec(dgp.spec()), 5);
  return out;
}

}  // namespace

ExperimentReport analyze_network(const FriendshipNetwork& net, std::size_t k,
                                 std::size_t restarts, std::uint64_t seed) {
  std::vector<std::size_t> sizes;
  const SeparatedSet best =
      greedy_separated_set(net, k, Eligibility::NonEmptyRings12, restarts, seed, &sizes);
  ExperimentReport report;
  report.kind = "network-analysis";
  report.seed = seed;
  report.config = {{"k", k}, {"restarts", restarts}, {"eligibility", "non-empty-rings-1-2"}};
  for (std::size_t r = 0; r < sizes.size(); ++r) {
    TrialRecord rec;
    rec.trial = r;
    rec.size = net.n_units();
    rec.series = "S" + std::to_string(k);
    rec.value = static_cast<double>(sizes[r]);
    rec.p_value = kNaN;
    report.records.push_back(rec);
  }
  const double usage =
      net.n_units() ? static_cast<double>(best.size()) / static_cast<double>(net.n_units()) : 0.0;
  report.extra = {{"n_units", net.n_units()},
                  {"n_edges", net.n_edges()},
                  {"best_size", best.size()},
                  {"node_usage", usage},
                  {"best_members", best.members}};
  return report;
}

std::string SimulationConfig::resolved_preset() const {
  if (!preset.empty()) return preset;
  if (kind == "test-calibration") return "h1-undirected";
  if (kind == "test-power") return "h1-bidirected";
  return "h3-BBB";
}

nlohmann::json SimulationConfig::to_json() const {
  nlohmann::json j = {{"kind", kind},
                      {"preset", resolved_preset()},
                      {"sizes", sizes},
                      {"trials", trials},
                      {"alpha", alpha},
                      {"burnin_sweeps", burnin_sweeps}};
  if (kind == "estimation") {
    j["degrees"] = degrees_json(estimation_degrees);
    j["estimator_gibbs"] = gibbs_json(estimator.gibbs);
    j["truth_gibbs"] = gibbs_json(truth_gibbs);
    j["baseline"] = baseline;
  } else {
    j["restarts"] = restarts;
    if (network) {
      j["network"] = {{"source", "edge-list"}, {"n_units", network->n_units()},
                      {"n_edges", network->n_edges()}};
    } else {
      j["network"] = {{"source", "generated"}, {"n_units", network_units},
                      {"degrees", degrees_json(test_degrees)}};
    }
  }
  return j;
}

ExperimentReport run_simulation(const SimulationConfig& config) {
  if (config.trials == 0) throw ArgumentError("trials must be >= 1");
  if (!(config.alpha > 0.0 && config.alpha <= 1.0)) throw ArgumentError("alpha must lie in (0, 1]");
  DgpConfig dgp = dgp_preset(config.resolved_preset());
  dgp.burnin_sweeps = config.burnin_sweeps;

  ExperimentReport report;
  report.seed = config.seed;
  report.config = config.to_json();
  std::vector<std::vector<TrialRecord>> per_task;

  if (config.kind == "test-calibration" || config.kind == "test-power") {
    report.kind = config.kind;
    const FriendshipNetwork net =
        config.network ? *config.network
                       : generate_network(config.network_units, config.test_degrees,
                                          derive_seed(config.seed, 1));
    per_task.resize(config.trials);
    parallel_for(config.trials,
                 [&](std::size_t t) { per_task[t] = test_trial(net, dgp, config, t); });
  } else if (config.kind == "estimation") {
    report.kind = "estimation-consistency";
    if (config.sizes.empty()) throw ArgumentError("estimation needs at least one network size");
    const std::size_t tasks = config.sizes.size() * config.trials;
    per_task.resize(tasks);
    parallel_for(tasks, [&](std::size_t task) {
      const std::size_t size = config.sizes[task / config.trials];
      per_task[task] = estimation_trial(dgp, config, size, task % config.trials);
    });
  } else {
    throw ArgumentError("unknown simulation kind '" + config.kind + "'");
  }
  for (auto& recs : per_task) {
    report.records.insert(report.records.end(), recs.begin(), recs.end());
  }
  return report;
}

}  // namespace netmech
