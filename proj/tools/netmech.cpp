// netmech: mechanism tests, effect estimation and simulation harnesses on friendship networks.
#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>

#include "netmech/dgp.hpp"
#include "netmech/estimator.hpp"
#include "netmech/experiments.hpp"
#include "netmech/io.hpp"
#include "netmech/mechtest.hpp"
#include "netmech/sgraph.hpp"

using namespace netmech;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kParse = 2, kPrecondition = 3, kFit = 4, kIo = 5 };

void emit(const json& doc, const std::string& out) {
  if (out.empty()) {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream f(out);
  if (!f) throw IoError("cannot open '" + out + "' for writing");
  f << doc.dump(2) << '\n';
}

json fit_json(const FitResult& f) {
  return {{"converged", f.converged},
          {"iterations", f.iterations},
          {"log_likelihood", f.log_likelihood},
          {"gradient_max_norm", f.gradient_max_norm},
          {"params", std::vector<double>(f.params.data(), f.params.data() + f.params.size())},
          {"diagnostic", f.diagnostic}};
}

json report_json(const MechanismReport& r, double alpha, std::uint64_t seed) {
  json layers = json::array();
  for (const auto& l : r.layers) {
    json j = {{"layer", to_string(l.layer)},
              {"status", to_string(l.status)},
              {"lr_statistic", l.lr_statistic},
              {"df", l.df},
              {"p_value", l.p_value},
              {"effective_sample_size", l.effective_sample_size},
              {"null_fit", fit_json(l.null_fit)},
              {"alternative_fit", fit_json(l.alternative_fit)}};
    j["decision"] = l.decision ? json(to_string(*l.decision)) : json(nullptr);
    if (!l.diagnostic.empty()) j["diagnostic"] = l.diagnostic;
    layers.push_back(j);
  }
  return {{"spec", r.spec.code()},
          {"complete", r.complete()},
          {"alpha", alpha},
          {"seed", seed},
          {"separated_set_size", r.separated_set.size()},
          {"layers", layers}};
}

json effect_json(const EffectEstimate& e) {
  return {{"population_average", e.population_average},
          {"n_draws", e.n_draws},
          {"per_unit", e.per_unit}};
}

json models_json(const FittedModels& m) {
  json l = {{"mechanism", to_string(m.L.mechanism)}, {"sample_size", m.L.sample_size}};
  if (m.L.mechanism == Mechanism::Bidirected) {
    l["mean"] = m.L.bidirected.mean;
    l["variance"] = m.L.bidirected.variance;
    l["covariance"] = m.L.bidirected.covariance;
  } else {
    const auto& c = m.L.undirected.coefficients;
    l["coefficients"] = std::vector<double>(c.data(), c.data() + c.size());
    if (m.L.undirected.continuous) l["variance"] = m.L.undirected.variance;
  }
  json y = {{"mechanism", to_string(m.Y.mechanism)}, {"fit", fit_json(m.Y.fit)}};
  return {{"L", l}, {"Y", y}};
}

std::vector<std::size_t> parse_sizes(const std::string& list) {
  std::vector<std::size_t> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(item, &pos);
    if (pos != item.size()) throw CLI::ValidationError("--sizes", "not an integer list: " + list);
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

// "1:6" is a degree range, "5/10" a mean with a cap.
DegreeRule parse_degrees(const std::string& s) {
  try {
    if (auto p = s.find(':'); p != std::string::npos) {
      return DegreeRule::range(std::stoul(s.substr(0, p)), std::stoul(s.substr(p + 1)));
    }
    if (auto p = s.find('/'); p != std::string::npos) {
      return DegreeRule::mean_max(std::stod(s.substr(0, p)), std::stoul(s.substr(p + 1)));
    }
  } catch (const std::logic_error&) {
  }
  throw CLI::ValidationError("--degrees", "expected MIN:MAX or MEAN/MAX, got '" + s + "'");
}

std::vector<int> parse_treatment(const std::string& spec, std::size_t n) {
  if (spec == "ones") return std::vector<int>(n, 1);
  if (spec == "zeros") return std::vector<int>(n, 0);
  if (spec.rfind("file:", 0) == 0) return load_treatment(spec.substr(5), n);
  throw CLI::ValidationError("--treatment", "expected ones, zeros or file:PATH");
}

// Labels name a layer and a unit id as written in the edge list, e.g. "Y7".
VertexSet parse_vertices(const EdgeList& el, const std::string& list) {
  std::unordered_map<std::int64_t, UnitId> compact;
  for (UnitId i = 0; i < el.original_ids.size(); ++i) compact[el.original_ids[i]] = i;
  std::vector<VertexId> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::optional<Layer> layer;
    if (item.size() > 1 && item[0] == 'L') layer = Layer::L;
    if (item.size() > 1 && item[0] == 'A') layer = Layer::A;
    if (item.size() > 1 && item[0] == 'Y') layer = Layer::Y;
    std::int64_t id = 0;
    const char* end = item.data() + item.size();
    const auto [ptr, ec] = std::from_chars(item.data() + 1, end, id);
    if (!layer || ec != std::errc() || ptr != end || !compact.count(id)) {
      throw ArgumentError("unknown vertex '" + item + "'");
    }
    out.push_back(sg_vertex(*layer, compact[id]));
  }
  return make_vertex_set(out);
}

struct Options {
  std::string edges, data, out, spec = "auto", treatment, preset, sizes, degrees = "1:6", kind;
  std::string x, y, z;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  std::size_t k = 6, restarts = 100, draws = 0, thin = 3, burnin = 200, trials = 100;
  std::size_t units = 0, gen_burnin = 200, test_restarts = 1;
  bool no_baseline = false;
};

void add_gibbs(CLI::App* cmd, Options& o) {
  cmd->add_option("--draws", o.draws, "Monte Carlo draws M (0 = ceil(0.3 N))");
  cmd->add_option("--thin", o.thin, "Thinning interval T")->check(CLI::PositiveNumber);
  cmd->add_option("--burnin", o.burnin, "Gibbs burn-in sweeps");
}

GibbsConfig gibbs_from(const Options& o) { return {o.draws, o.thin, o.burnin}; }

int run_analyze(const Options& o) {
  const auto net = load_edge_list(o.edges);
  auto report = analyze_network(net, o.k, o.restarts, o.seed);
  report.config["edges"] = o.edges;
  save_report(report, o.out);
  return kOk;
}

int run_test(const Options& o) {
  const auto net = load_edge_list(o.edges);
  const auto data = load_data_csv(o.data);
  data.validate(net.n_units());
  const auto report = determine_mechanisms(net, data, o.alpha, o.restarts, o.seed);
  emit(report_json(report, o.alpha, o.seed), o.out);
  return report.complete() ? kOk : kFit;
}

int run_estimate(const Options& o) {
  const auto net = load_edge_list(o.edges);
  const auto data = load_data_csv(o.data);
  data.validate(net.n_units());
  json doc = {{"seed", o.seed}};
  SegregatedGraphSpec spec;
  if (o.spec == "auto") {
    const auto tests = determine_mechanisms(net, data, o.alpha, o.restarts, o.seed);
    doc["test"] = report_json(tests, o.alpha, o.seed);
    if (!tests.complete()) {
      emit(doc, o.out);
      throw PreconditionError("mechanism tests were inconclusive; pass --spec explicitly");
    }
    spec = tests.spec;
  } else {
    spec = SegregatedGraphSpec::from_code(o.spec);
    if (!spec.fully_determined()) throw ArgumentError("--spec must be UUU..BBB or auto");
  }
  doc["spec"] = spec.code();
  EstimatorConfig config;
  config.gibbs = gibbs_from(o);
  doc["gibbs"] = {{"draws", config.gibbs.resolved_draws(net.n_units())},
                  {"thinning", config.gibbs.thinning},
                  {"burn_in", config.gibbs.burn_in}};
  if (o.treatment.empty()) {
    const auto effect = overall_effect(net, data, spec, config, o.seed);
    doc["models"] = models_json(effect.models);
    doc["treated"] = effect_json(effect.treated);
    doc["untreated"] = effect_json(effect.untreated);
    doc["contrast"] = effect.contrast;
  } else {
    const auto a = parse_treatment(o.treatment, net.n_units());
    const auto models = fit_models(net, data, spec, config, o.seed);
    doc["models"] = models_json(models);
    doc["treatment"] = o.treatment;
    doc["estimate"] = effect_json(simulate_effects(net, models, a, config, derive_seed(o.seed, 11)));
  }
  emit(doc, o.out);
  return kOk;
}

int run_simulate(const Options& o) {
  SimulationConfig c;
  c.kind = o.kind;
  c.preset = o.preset;
  c.sizes = parse_sizes(o.sizes);
  c.trials = o.trials;
  c.seed = o.seed;
  c.alpha = o.alpha;
  c.burnin_sweeps = o.gen_burnin;
  c.restarts = o.test_restarts;
  c.estimator.gibbs = gibbs_from(o);
  c.truth_gibbs = gibbs_from(o);
  c.baseline = !o.no_baseline;
  if (!o.edges.empty()) c.network = load_edge_list(o.edges);
  if (o.units) c.network_units = o.units;
  if (c.kind == "estimation") {
    if (o.degrees != "1:6") c.estimation_degrees = parse_degrees(o.degrees);
  } else {
    c.test_degrees = parse_degrees(o.degrees);
  }
  auto report = run_simulation(c);
  if (!o.edges.empty()) report.config["edges"] = o.edges;
  save_report(report, o.out);
  return kOk;
}

int run_generate(const Options& o) {
  if (o.out.empty()) throw CLI::ValidationError("--out", "generate needs an output prefix");
  DgpConfig dgp = dgp_preset(o.preset.empty() ? "h1-undirected" : o.preset);
  dgp.burnin_sweeps = o.gen_burnin;
  FriendshipNetwork net;
  if (!o.edges.empty()) {
    net = load_edge_list(o.edges);
  } else {
    if (o.units == 0) throw CLI::ValidationError("--units", "give --units or --edges");
    net = generate_network(o.units, parse_degrees(o.degrees), derive_seed(o.seed, 1));
    save_edge_list(o.out + ".edges", net);
  }
  save_data_csv(o.out + ".csv", generate_data(net, dgp, derive_seed(o.seed, 2)));
  std::cerr << "wrote " << (o.edges.empty() ? o.out + ".edges and " : "") << o.out << ".csv ("
            << net.n_units() << " units, " << net.n_edges() << " edges, preset " << dgp.name
            << ")\n";
  return kOk;
}

int run_sg_check(const Options& o) {
  const auto el = load_edge_list_with_ids(o.edges);
  const auto spec = SegregatedGraphSpec::from_code(o.spec);
  const auto g = instantiate_sg(el.network, spec);
  json doc = {{"spec", spec.code()},
              {"vertices", g.n_vertices()},
              {"directed", g.count(EdgeKind::Directed)},
              {"undirected", g.count(EdgeKind::Undirected)},
              {"bidirected", g.count(EdgeKind::Bidirected)}};
  json violations = json::array();
  for (const auto& v : validate_sg(g)) violations.push_back({{"property", v.property}, {"detail", v.detail}});
  doc["valid"] = violations.empty();
  doc["violations"] = violations;
  if (!o.x.empty() || !o.y.empty()) {
    const auto x = parse_vertices(el, o.x), y = parse_vertices(el, o.y), z = parse_vertices(el, o.z);
    doc["query"] = {{"x", o.x}, {"y", o.y}, {"z", o.z}, {"s_separated", s_separated(g, x, y, z)}};
  }
  emit(doc, o.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network causal inference with contagion and latent confounding"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "Master random seed");
    cmd->add_option("--out", o.out, "Output path (stdout when omitted)");
  };

  auto* analyze = app.add_subcommand("analyze-network", "Greedy maximal S^k search on an edge list");
  analyze->add_option("--edges", o.edges, "Edge list")->required()->check(CLI::ExistingFile);
  analyze->add_option("--k", o.k, "Separation degree")->check(CLI::PositiveNumber);
  analyze->add_option("--restarts", o.restarts, "Greedy restarts")->check(CLI::PositiveNumber);
  common(analyze);

  auto* test = app.add_subcommand("test", "Per-layer coding likelihood ratio tests");
  test->add_option("--edges", o.edges, "Edge list")->required()->check(CLI::ExistingFile);
  test->add_option("--data", o.data, "CSV with header unit,L,A,Y")->required()->check(CLI::ExistingFile);
  test->add_option("--alpha", o.alpha, "Significance level");
  test->add_option("--restarts", o.restarts, "Greedy restarts for the S^6 set");
  common(test);

  auto* estimate = app.add_subcommand("estimate", "Estimate E[Y_i | do(a)] and the overall effect");
  estimate->add_option("--edges", o.edges, "Edge list")->required()->check(CLI::ExistingFile);
  estimate->add_option("--data", o.data, "CSV with header unit,L,A,Y")->required()->check(CLI::ExistingFile);
  estimate->add_option("--spec", o.spec, "UUU..BBB or auto");
  estimate->add_option("--treatment", o.treatment,
                       "ones, zeros or file:PATH (omit for the do(1) - do(0) contrast)");
  estimate->add_option("--alpha", o.alpha, "Significance level for --spec auto");
  estimate->add_option("--restarts", o.restarts, "Greedy restarts for --spec auto");
  add_gibbs(estimate, o);
  common(estimate);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo experiment harness");
  simulate->add_option("kind", o.kind, "test-calibration | test-power | estimation")
      ->required()
      ->check(CLI::IsMember({"test-calibration", "test-power", "estimation"}));
  simulate->add_option("--preset", o.preset, "Data-generating preset");
  simulate->add_option("--sizes", o.sizes, "Comma-separated effective sample sizes or network sizes");
  simulate->add_option("--trials", o.trials, "Trials per size")->check(CLI::PositiveNumber);
  simulate->add_option("--alpha", o.alpha, "Significance level");
  simulate->add_option("--edges", o.edges, "Fixed network for semi-synthetic runs")->check(CLI::ExistingFile);
  simulate->add_option("--units", o.units, "Generated network size for test experiments");
  simulate->add_option("--degrees", o.degrees, "Degree rule MIN:MAX or MEAN/MAX");
  simulate->add_option("--restarts", o.test_restarts, "Greedy restarts per trial");
  simulate->add_option("--gen-burnin", o.gen_burnin, "Data generation burn-in sweeps");
  simulate->add_flag("--no-baseline", o.no_baseline, "Skip the plain auto-g baseline");
  add_gibbs(simulate, o);
  common(simulate);

  auto* generate = app.add_subcommand("generate", "Generate a network and data from a preset");
  generate->add_option("--preset", o.preset, "Data-generating preset");
  generate->add_option("--edges", o.edges, "Use this network instead of generating one")->check(CLI::ExistingFile);
  generate->add_option("--units", o.units, "Network size");
  generate->add_option("--degrees", o.degrees, "Degree rule MIN:MAX or MEAN/MAX");
  generate->add_option("--gen-burnin", o.gen_burnin, "Gibbs burn-in sweeps");
  common(generate);

  auto* sg = app.add_subcommand("sg-check", "Instantiate a segregated graph, validate, query s-separation");
  sg->add_option("--edges", o.edges, "Edge list")->required()->check(CLI::ExistingFile);
  sg->add_option("--spec", o.spec, "UUU..BBB")->required();
  sg->add_option("--x", o.x, "Comma-separated vertex labels, e.g. Y0");
  sg->add_option("--y", o.y, "Comma-separated vertex labels");
  sg->add_option("--z", o.z, "Comma-separated conditioning labels");
  common(sg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze) return run_analyze(o);
    if (*test) return run_test(o);
    if (*estimate) return run_estimate(o);
    if (*simulate) return run_simulate(o);
    if (*generate) return run_generate(o);
    if (*sg) return run_sg_check(o);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const FitError& e) {
    std::cerr << "fit error: " << e.what() << '\n';
    return kFit;
  } catch (const std::logic_error& e) {
    // ArgumentError and PreconditionError
    std::cerr << "error: " << e.what() << '\n';
    return kPrecondition;
  }
  return kUsage;
}
