#include "netmech/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "netmech/rng.hpp"

namespace netmech {

namespace {

std::vector<std::size_t> draw_target_degrees(std::size_t n, const DegreeRule& rule, Rng& rng) {
  std::vector<std::size_t> target(n);
  if (rule.kind == DegreeRule::Kind::Range) {
    std::uniform_int_distribution<std::size_t> pick(rule.min, rule.max);
    for (auto& d : target) d = pick(rng);
  } else {
    std::poisson_distribution<std::size_t> pois(rule.mean);
    for (auto& d : target) {
      do d = pois(rng);
      while (d > rule.max);
    }
  }
  std::size_t total = 0;
  for (auto d : target) total += d;
  if (total % 2 == 1) {
    // Fix parity on a unit that can move within bounds.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      if (target[i] < rule.max) {
        ++target[i];
        break;
      }
      if (target[i] > rule.min) {
        --target[i];
        break;
      }
    }
  }
  return target;
}

// Hidden-variable sums per unit: one Normal(mean, sd) draw per edge, added to both endpoints.
std::vector<double> hidden_sums(const FriendshipNetwork& net, const LayerGenerator& g, Rng& rng) {
  std::vector<double> sums(net.n_units(), 0.0);
  std::normal_distribution<double> normal(g.hidden_mean, g.hidden_sd);
  for (auto [i, j] : net.edges()) {
    const double h = normal(rng);
    sums[i] += h;
    sums[j] += h;
  }
  return sums;
}

int& binary_slot(NetworkData& data, Layer layer, UnitId i) {
  return layer == Layer::A ? data.A[i] : data.Y[i];
}

void set_value(NetworkData& data, Layer layer, UnitId i, double v) {
  if (layer == Layer::L) {
    data.L[i] = v;
  } else {
    binary_slot(data, layer, i) = static_cast<int>(v);
  }
}

// One systematic Gibbs sweep of an undirected binary layer.
void gibbs_sweep(const LayerGenerator& g, Layer layer, const FriendshipNetwork& net,
                 NetworkData& data, Rng& rng) {
  for (UnitId i = 0; i < net.n_units(); ++i) {
    set_value(data, layer, i, bernoulli(rng, expit(layer_eta(g, layer, net, data, i, 0.0))));
  }
}

// Exact draw of a bidirected hidden-variable layer given earlier layers.
void hidden_draw(const LayerGenerator& g, Layer layer, const FriendshipNetwork& net,
                 NetworkData& data, Rng& rng) {
  const auto sums = hidden_sums(net, g, rng);
  for (UnitId i = 0; i < net.n_units(); ++i) {
    set_value(data, layer, i, bernoulli(rng, expit(layer_eta(g, layer, net, data, i, sums[i]))));
  }
}

LayerGenerator h1_layer(Layer layer, Mechanism m) {
  LayerGenerator g;
  g.mechanism = m;
  const bool u = m == Mechanism::Undirected;
  switch (layer) {
    case Layer::L:
      if (u) g.ring1_L = -0.1;
      else g.hidden = 5.0;
      break;
    case Layer::A:
      if (u) {
        g.own_L = 0.8;
        g.ring1_L = -0.1;
        g.ring1_A = -0.1;
      } else {
        g.own_L = 0.2;
        g.ring1_L = 0.1;
        g.hidden = 5.0;
      }
      break;
    case Layer::Y:
      if (u) {
        g.own_L = 0.8;
        g.own_A = 1.7;
        g.ring1_L = -0.1;
        g.ring1_A = -0.1;
        g.ring1_Y = -0.1;
      } else {
        g.own_L = 0.2;
        g.own_A = -0.3;
        g.ring1_L = 0.1;
        g.ring1_A = -0.2;
        g.hidden = 5.0;
      }
      break;
  }
  return g;
}

LayerGenerator h3_layer(Layer layer, Mechanism m) {
  LayerGenerator g;
  g.mechanism = m;
  const bool u = m == Mechanism::Undirected;
  switch (layer) {
    case Layer::L:
      if (u) {
        g.intercept = -0.3;
        g.ring1_L = 0.4;
      } else {
        g.gaussian = true;
        g.normal = {0.7, 3.5, 0.2};
      }
      break;
    case Layer::A:
      if (u) {
        g.intercept = 5.0;
        g.own_L = 4.0;
        g.ring1_L = -1.2;
        g.ring1_A = -2.0;
      } else {
        g.intercept = 1.3;
        g.hidden = 0.2;
        g.hidden_mean = 2.0;
        g.own_L = -0.4;
        g.ring1_L = -0.7;
      }
      break;
    case Layer::Y:
      if (u) {
        g.intercept = 2.0;
        g.own_L = 1.0;
        g.own_A = 1.5;
        g.ring1_L = -5.3;
        g.ring1_A = 1.0;
        g.ring1_Y = -4.0;
      } else {
        g.intercept = -1.0;
        g.hidden = 2.0;
        g.own_L = 0.1;
        g.own_A = 1.0;
        g.ring1_L = -0.3;
        g.ring1_A = 1.0;
      }
      break;
  }
  return g;
}

// Block sampler over (L, Y) with A fixed to the intervention.
class InterventionChain {
 public:
  InterventionChain(const FriendshipNetwork& net, const DgpConfig& config, const std::vector<int>& a,
                    std::uint64_t seed)
      : net_(net), config_(config), rng_(make_rng(seed, 0)) {
    const std::size_t n = net.n_units();
    data_.L.assign(n, 0.0);
    data_.A = a;
    data_.Y.assign(n, 0);
    data_.continuous_L = config.L.gaussian;
    if (config.L.gaussian) normal_.emplace(net, config.L.normal);
    for (UnitId i = 0; i < n; ++i) {
      if (!config.L.gaussian) data_.L[i] = bernoulli(rng_, 0.5);
      data_.Y[i] = bernoulli(rng_, 0.5);
    }
  }

  // One L update; Y is left alone.
  void step_L() {
    if (config_.L.gaussian) {
      normal_->draw(rng_, data_.L.data());
    } else if (config_.L.mechanism == Mechanism::Undirected) {
      gibbs_sweep(config_.L, Layer::L, net_, data_, rng_);
    } else {
      hidden_draw(config_.L, Layer::L, net_, data_, rng_);
    }
  }

  // Redraws Y given the current L. An undirected Y is warm-started from its previous state and
  // swept `sweeps` times; a single sweep would leave Y lagging behind L under strong peer coupling.
  void refresh_Y(std::size_t sweeps) {
    if (config_.Y.mechanism == Mechanism::Undirected) {
      for (std::size_t s = 0; s < sweeps; ++s) gibbs_sweep(config_.Y, Layer::Y, net_, data_, rng_);
    } else {
      hidden_draw(config_.Y, Layer::Y, net_, data_, rng_);
    }
  }

  const NetworkData& data() const { return data_; }

 private:
  const FriendshipNetwork& net_;
  const DgpConfig& config_;
  Rng rng_;
  NetworkData data_;
  std::optional<SparseNormalSampler> normal_;
};

}  // namespace

FriendshipNetwork generate_network(std::size_t n, const DegreeRule& rule, std::uint64_t seed) {
  if (rule.kind == DegreeRule::Kind::Range && rule.min > rule.max) {
    throw ArgumentError("degree rule has min > max");
  }
  if (rule.kind == DegreeRule::Kind::MeanMax &&
      (!(rule.mean >= 0.0) || rule.mean > static_cast<double>(rule.max))) {
    throw ArgumentError("degree rule mean must lie in [0, max]");
  }
  if (n == 0) return FriendshipNetwork(0, std::span<const std::pair<UnitId, UnitId>>{});
  const std::size_t lo = rule.kind == DegreeRule::Kind::Range ? rule.min : 0;
  if (lo > 0 && lo > n - 1) throw ArgumentError("degree rule infeasible: min degree exceeds n - 1");
  if (rule.kind == DegreeRule::Kind::Range && rule.min == rule.max && (n * rule.min) % 2 == 1) {
    throw ArgumentError("degree rule infeasible: odd total degree");
  }

  Rng rng = make_rng(seed, 0);
  DegreeRule effective = rule;
  effective.max = std::min(rule.max, n - 1);
  for (int attempt = 0; attempt < 200; ++attempt) {
    const auto target = draw_target_degrees(n, effective, rng);
    std::vector<UnitId> stubs;
    for (UnitId i = 0; i < n; ++i) stubs.insert(stubs.end(), target[i], i);
    std::set<std::pair<UnitId, UnitId>> edges;
    std::vector<std::size_t> degree(n, 0);
    for (int round = 0; round < 50 && stubs.size() >= 2; ++round) {
      std::shuffle(stubs.begin(), stubs.end(), rng);
      std::vector<UnitId> leftover;
      for (std::size_t s = 0; s + 1 < stubs.size(); s += 2) {
        UnitId u = stubs[s], v = stubs[s + 1];
        if (u > v) std::swap(u, v);
        if (u == v || edges.count({u, v})) {
          leftover.push_back(u);
          leftover.push_back(v);
          continue;
        }
        edges.insert({u, v});
        ++degree[u];
        ++degree[v];
      }
      if (stubs.size() % 2) leftover.push_back(stubs.back());
      stubs.swap(leftover);
    }
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = degree[i] >= lo && degree[i] <= effective.max;
    if (!ok) continue;
    std::vector<std::pair<UnitId, UnitId>> list(edges.begin(), edges.end());
    return FriendshipNetwork(n, list);
  }
  throw ArgumentError("could not realise the degree rule after 200 attempts");
}

double layer_eta(const LayerGenerator& g, Layer layer, const FriendshipNetwork& net,
                 const NetworkData& data, UnitId i, double hidden_sum) {
  const bool peer = g.mechanism == Mechanism::Undirected;
  double sum_l = 0.0, sum_a = 0.0, sum_y = 0.0;
  for (UnitId j : net.neighbors(i)) {
    sum_l += data.L[j];
    if (layer != Layer::L) sum_a += data.A[j];
    if (layer == Layer::Y) sum_y += data.Y[j];
  }
  double eta = g.intercept + g.hidden * hidden_sum;
  switch (layer) {
    case Layer::L:
      if (peer) eta += g.ring1_L * sum_l;
      break;
    case Layer::A:
      eta += g.own_L * data.L[i] + g.ring1_L * sum_l;
      if (peer) eta += g.ring1_A * sum_a;
      break;
    case Layer::Y:
      eta += g.own_L * data.L[i] + g.own_A * data.A[i] + g.ring1_L * sum_l + g.ring1_A * sum_a;
      if (peer) eta += g.ring1_Y * sum_y;
      break;
  }
  return eta;
}

std::vector<std::string> dgp_preset_names() {
  std::vector<std::string> out{"h1-undirected", "h1-bidirected"};
  for (const char* family : {"h1-", "h3-"}) {
    for (int mask = 0; mask < 8; ++mask) {
      std::string code;
      for (int b = 2; b >= 0; --b) code += (mask >> b) & 1 ? 'B' : 'U';
      out.push_back(family + code);
    }
  }
  return out;
}

DgpConfig dgp_preset(const std::string& name) {
  std::string family, code;
  if (name == "h1-undirected") {
    family = "h1", code = "UUU";
  } else if (name == "h1-bidirected") {
    family = "h1", code = "BBB";
  } else if (name.size() == 6 && (name.rfind("h1-", 0) == 0 || name.rfind("h3-", 0) == 0)) {
    family = name.substr(0, 2);
    code = name.substr(3);
  } else {
    throw ArgumentError("unknown DGP preset '" + name + "'");
  }
  const SegregatedGraphSpec spec = SegregatedGraphSpec::from_code(code);
  if (!spec.fully_determined()) throw ArgumentError("preset code must use U/B only: " + name);
  auto make = family == "h1" ? h1_layer : h3_layer;
  DgpConfig config;
  config.name = name;
  config.L = make(Layer::L, spec.L);
  config.A = make(Layer::A, spec.A);
  config.Y = make(Layer::Y, spec.Y);
  return config;
}

NetworkData generate_data(const FriendshipNetwork& net, const DgpConfig& config, std::uint64_t seed) {
  const std::size_t n = net.n_units();
  if (config.A.gaussian || config.Y.gaussian) throw ArgumentError("only the L layer may be Gaussian");
  if (config.L.gaussian && config.L.mechanism != Mechanism::Bidirected) {
    throw ArgumentError("the Gaussian L generator encodes the bidirected mechanism");
  }
  NetworkData data;
  data.L.assign(n, 0.0);
  data.A.assign(n, 0);
  data.Y.assign(n, 0);
  data.continuous_L = config.L.gaussian;

  const std::pair<Layer, const LayerGenerator*> layers[] = {
      {Layer::L, &config.L}, {Layer::A, &config.A}, {Layer::Y, &config.Y}};
  std::uint64_t stream = 0;
  for (const auto& [layer, g] : layers) {
    Rng rng = make_rng(seed, ++stream);
    if (g->gaussian) {
      const SparseNormalSampler sampler(net, g->normal);
      sampler.draw(rng, data.L.data());
    } else if (g->mechanism == Mechanism::Bidirected) {
      hidden_draw(*g, layer, net, data, rng);
    } else {
      for (UnitId i = 0; i < n; ++i) set_value(data, layer, i, bernoulli(rng, 0.5));
      for (std::size_t s = 0; s < config.burnin_sweeps; ++s) gibbs_sweep(*g, layer, net, data, rng);
    }
  }
  return data;
}

GroundTruth ground_truth_mean(const FriendshipNetwork& net, const DgpConfig& config,
                              const std::vector<int>& a, const GibbsConfig& gibbs,
                              std::uint64_t seed) {
  gibbs.validate();
  const std::size_t n = net.n_units();
  if (a.size() != n) throw ArgumentError("treatment vector length must equal the network size");
  InterventionChain chain(net, config, a, seed);
  const bool l_mixing = !config.L.gaussian && config.L.mechanism == Mechanism::Undirected;
  const bool y_mixing = config.Y.mechanism == Mechanism::Undirected;
  if (l_mixing) {
    for (std::size_t s = 0; s < gibbs.burn_in; ++s) chain.step_L();
  }
  const std::size_t m = gibbs.resolved_draws(n);
  const std::size_t thin = l_mixing ? gibbs.thinning : 1;
  const std::size_t y_sweeps = y_mixing ? std::max<std::size_t>(gibbs.burn_in, 1) : 1;
  std::vector<double> total(n, 0.0);
  for (std::size_t d = 0; d < m; ++d) {
    for (std::size_t t = 0; t < thin; ++t) chain.step_L();
    chain.refresh_Y(y_sweeps);
    for (UnitId i = 0; i < n; ++i) total[i] += chain.data().Y[i];
  }
  GroundTruth out;
  out.per_unit.resize(n);
  double sum = 0.0;
  for (UnitId i = 0; i < n; ++i) {
    out.per_unit[i] = total[i] / static_cast<double>(m);
    sum += out.per_unit[i];
  }
  out.population_average = n ? sum / static_cast<double>(n) : 0.0;
  return out;
}

double ground_truth_effect(const FriendshipNetwork& net, const DgpConfig& config,
                           const std::vector<int>& a1, const std::vector<int>& a0,
                           const GibbsConfig& gibbs, std::uint64_t seed) {
  return ground_truth_mean(net, config, a1, gibbs, derive_seed(seed, 1)).population_average -
         ground_truth_mean(net, config, a0, gibbs, derive_seed(seed, 2)).population_average;
}

}  // namespace netmech
