#include "netmech/network.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_set>

#include "netmech/rng.hpp"

namespace netmech {

namespace {

// Marks every unit within `radius` hops of `source` in `blocked`.
void block_ball(const FriendshipNetwork& net, UnitId source, std::size_t radius,
                std::vector<char>& blocked, std::vector<std::uint32_t>& stamp,
                std::uint32_t epoch, std::vector<UnitId>& frontier,
                std::vector<UnitId>& next) {
  frontier.assign(1, source);
  stamp[source] = epoch;
  blocked[source] = 1;
  for (std::size_t depth = 0; depth < radius && !frontier.empty(); ++depth) {
    next.clear();
    for (UnitId u : frontier) {
      for (UnitId v : net.neighbors(u)) {
        if (stamp[v] == epoch) continue;
        stamp[v] = epoch;
        blocked[v] = 1;
        next.push_back(v);
      }
    }
    frontier.swap(next);
  }
}

template <typename Candidate, typename Admissible, typename Commit>
std::vector<Candidate> greedy_pass(std::vector<Candidate> candidates, Rng& rng,
                                   Admissible admissible, Commit commit) {
  std::shuffle(candidates.begin(), candidates.end(), rng);
  std::vector<Candidate> chosen;
  for (const auto& c : candidates) {
    if (!admissible(c)) continue;
    chosen.push_back(c);
    commit(c);
  }
  return chosen;
}

}  // namespace

FriendshipNetwork::FriendshipNetwork(std::size_t n_units,
                                     std::span<const std::pair<UnitId, UnitId>> edges)
    : adjacency_(n_units) {
  for (auto [u, v] : edges) {
    if (u >= n_units || v >= n_units) {
      throw ArgumentError("edge endpoint out of range: " + std::to_string(u) + "-" +
                          std::to_string(v));
    }
    if (u == v) throw ArgumentError("self-loop on unit " + std::to_string(u));
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& row : adjacency_) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    n_edges_ += row.size();
  }
  n_edges_ /= 2;
}

FriendshipNetwork FriendshipNetwork::from_adjacency(std::vector<std::vector<UnitId>> adjacency) {
  const std::size_t n = adjacency.size();
  FriendshipNetwork net;
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = adjacency[i];
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
      throw ArgumentError("duplicate neighbor for unit " + std::to_string(i));
    }
    for (UnitId j : row) {
      if (j >= n) throw ArgumentError("neighbor id out of range for unit " + std::to_string(i));
      if (j == i) throw ArgumentError("self-loop on unit " + std::to_string(i));
    }
  }
  std::size_t degree_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (UnitId j : adjacency[i]) {
      if (!std::binary_search(adjacency[j].begin(), adjacency[j].end(), static_cast<UnitId>(i))) {
        throw ArgumentError("asymmetric adjacency between " + std::to_string(i) + " and " +
                            std::to_string(j));
      }
    }
    degree_sum += adjacency[i].size();
  }
  net.adjacency_ = std::move(adjacency);
  net.n_edges_ = degree_sum / 2;
  return net;
}

bool FriendshipNetwork::adjacent(UnitId i, UnitId j) const {
  check_unit(i);
  check_unit(j);
  const auto& row = adjacency_[i];
  return std::binary_search(row.begin(), row.end(), j);
}

std::vector<std::pair<UnitId, UnitId>> FriendshipNetwork::edges() const {
  std::vector<std::pair<UnitId, UnitId>> out;
  out.reserve(n_edges_);
  for (UnitId i = 0; i < adjacency_.size(); ++i) {
    for (UnitId j : adjacency_[i]) {
      if (i < j) out.emplace_back(i, j);
    }
  }
  return out;
}

void FriendshipNetwork::check_unit(UnitId i) const {
  if (i >= adjacency_.size()) {
    throw ArgumentError("unit id " + std::to_string(i) + " out of range [0, " +
                        std::to_string(adjacency_.size()) + ")");
  }
}

std::vector<std::vector<UnitId>> distance_rings(const FriendshipNetwork& net, UnitId source,
                                                std::size_t max_depth) {
  net.check_unit(source);
  std::vector<std::vector<UnitId>> rings(max_depth + 1);
  rings[0] = {source};
  std::unordered_set<UnitId> seen{source};
  for (std::size_t d = 1; d <= max_depth; ++d) {
    for (UnitId u : rings[d - 1]) {
      for (UnitId v : net.neighbors(u)) {
        if (!seen.insert(v).second) continue;
        rings[d].push_back(v);
      }
    }
    if (rings[d].empty()) break;
  }
  for (auto& r : rings) std::sort(r.begin(), r.end());
  return rings;
}

std::vector<UnitId> neighborhood(const FriendshipNetwork& net, UnitId i,
                                 const std::set<std::size_t>& degrees) {
  net.check_unit(i);
  if (degrees.empty()) return {};
  const auto rings = distance_rings(net, i, *degrees.rbegin());
  std::vector<UnitId> out;
  for (std::size_t d : degrees) out.insert(out.end(), rings[d].begin(), rings[d].end());
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::size_t> pairwise_distance(const FriendshipNetwork& net, UnitId i, UnitId j) {
  net.check_unit(i);
  net.check_unit(j);
  if (i == j) return 0;
  std::vector<std::size_t> dist(net.n_units(), SIZE_MAX);
  std::vector<UnitId> queue{i};
  dist[i] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    UnitId u = queue[head];
    for (UnitId v : net.neighbors(u)) {
      if (dist[v] != SIZE_MAX) continue;
      dist[v] = dist[u] + 1;
      if (v == j) return dist[v];
      queue.push_back(v);
    }
  }
  return std::nullopt;
}

bool is_eligible(const FriendshipNetwork& net, UnitId i, Eligibility rule) {
  if (rule == Eligibility::None) return true;
  if (net.degree(i) == 0) return false;
  // Ring 2 is non-empty iff some neighbor has a neighbor other than i and outside ring 1.
  for (UnitId j : net.neighbors(i)) {
    for (UnitId k : net.neighbors(j)) {
      if (k != i && !net.adjacent(i, k)) return true;
    }
  }
  return false;
}

SeparatedSet SeparatedSet::prefix(std::size_t n) const {
  SeparatedSet out = *this;
  if (!out.members.empty()) out.members.resize(std::min(n, out.members.size()));
  if (!out.dyads.empty()) out.dyads.resize(std::min(n, out.dyads.size()));
  return out;
}

SeparatedSet greedy_separated_set(const FriendshipNetwork& net, std::size_t k,
                                  Eligibility eligibility, std::size_t restarts,
                                  std::uint64_t seed, std::vector<std::size_t>* restart_sizes) {
  if (k < 1) throw ArgumentError("separation degree k must be >= 1");
  const std::size_t n = net.n_units();
  std::vector<UnitId> candidates;
  for (UnitId i = 0; i < n; ++i) {
    if (is_eligible(net, i, eligibility)) candidates.push_back(i);
  }
  restarts = std::max<std::size_t>(restarts, 1);

  std::vector<std::vector<UnitId>> results(restarts);
  parallel_for(restarts, [&](std::size_t r) {
    Rng rng = make_rng(seed, r);
    std::vector<char> blocked(n, 0);
    std::vector<std::uint32_t> stamp(n, 0);
    std::uint32_t epoch = 0;
    std::vector<UnitId> frontier, next;
    results[r] = greedy_pass(
        candidates, rng, [&](UnitId u) { return !blocked[u]; },
        [&](UnitId u) { block_ball(net, u, k - 1, blocked, stamp, ++epoch, frontier, next); });
  });

  if (restart_sizes) {
    restart_sizes->clear();
    for (const auto& r : results) restart_sizes->push_back(r.size());
  }
  SeparatedSet best{k, eligibility, {}, {}};
  for (auto& r : results) {
    if (r.size() > best.members.size()) best.members = std::move(r);
  }
  return best;
}

SeparatedSet greedy_dyad_separated_set(const FriendshipNetwork& net, std::size_t k,
                                       std::size_t restarts, std::uint64_t seed) {
  if (k < 1) throw ArgumentError("separation degree k must be >= 1");
  const std::size_t n = net.n_units();
  std::vector<Dyad> candidates;
  for (auto [u, v] : net.edges()) candidates.push_back({u, v});
  restarts = std::max<std::size_t>(restarts, 1);

  std::vector<std::vector<Dyad>> results(restarts);
  parallel_for(restarts, [&](std::size_t r) {
    Rng rng = make_rng(seed, r);
    std::vector<char> blocked(n, 0);
    std::vector<std::uint32_t> stamp(n, 0);
    std::uint32_t epoch = 0;
    std::vector<UnitId> frontier, next;
    results[r] = greedy_pass(
        candidates, rng, [&](const Dyad& d) { return !blocked[d.first] && !blocked[d.second]; },
        [&](const Dyad& d) {
          block_ball(net, d.first, k - 1, blocked, stamp, ++epoch, frontier, next);
          block_ball(net, d.second, k - 1, blocked, stamp, ++epoch, frontier, next);
        });
  });

  SeparatedSet best{k, Eligibility::None, {}, {}};
  for (auto& r : results) {
    if (r.size() > best.dyads.size()) best.dyads = std::move(r);
  }
  return best;
}

SeparationCheck verify_separated_set(const FriendshipNetwork& net, const SeparatedSet& set) {
  // Each anchor's ball of radius k-1 (via distance_rings) must contain no other group's anchor;
  // maximality holds when every eligible candidate lies within some ball.
  SeparationCheck check;
  if (set.k == 0) return check;
  const std::size_t n = net.n_units();
  std::vector<std::vector<UnitId>> groups;
  if (!set.dyads.empty()) {
    for (const Dyad& d : set.dyads) {
      if (!net.adjacent(d.first, d.second)) check.separated = false;
      groups.push_back({d.first, d.second});
    }
  } else {
    for (UnitId m : set.members) {
      if (!is_eligible(net, m, set.eligibility)) check.eligible = false;
      groups.push_back({m});
    }
  }
  constexpr std::size_t kNone = SIZE_MAX;
  std::vector<std::size_t> owner(n, kNone);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (UnitId u : groups[g]) {
      if (owner[u] != kNone && owner[u] != g) check.separated = false;
      owner[u] = g;
    }
  }
  std::vector<char> covered(n, 0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (UnitId u : groups[g]) {
      for (const auto& ring : distance_rings(net, u, set.k - 1)) {
        for (UnitId v : ring) {
          covered[v] = 1;
          if (owner[v] != kNone && owner[v] != g) check.separated = false;
        }
      }
    }
  }
  if (!set.dyads.empty()) {
    for (auto [u, v] : net.edges()) {
      if (!covered[u] && !covered[v]) check.maximal = false;
    }
  } else {
    for (UnitId u = 0; u < n; ++u) {
      if (!covered[u] && is_eligible(net, u, set.eligibility)) check.maximal = false;
    }
  }
  return check;
}

}  // namespace netmech
