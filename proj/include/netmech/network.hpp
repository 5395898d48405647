#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "netmech/common.hpp"

namespace netmech {

// Undirected friendship network over units 0..n-1.
// Immutable after construction; safe to share across threads.
class FriendshipNetwork {
 public:
  FriendshipNetwork() = default;

  // Builds from an edge list. Self-loops are rejected, duplicate edges merged.
  FriendshipNetwork(std::size_t n_units, std::span<const std::pair<UnitId, UnitId>> edges);

  // Adopts a per-unit adjacency list after validating symmetry, range, loops and duplicates.
  static FriendshipNetwork from_adjacency(std::vector<std::vector<UnitId>> adjacency);

  std::size_t n_units() const { return adjacency_.size(); }
  std::size_t n_edges() const { return n_edges_; }
  std::span<const UnitId> neighbors(UnitId i) const { return adjacency_[i]; }
  std::size_t degree(UnitId i) const { return adjacency_[i].size(); }
  bool adjacent(UnitId i, UnitId j) const;
  std::vector<std::pair<UnitId, UnitId>> edges() const;

  void check_unit(UnitId i) const;

 private:
  std::vector<std::vector<UnitId>> adjacency_;
  std::size_t n_edges_ = 0;
};

// rings[d] = units at BFS distance exactly d from `source`, for d = 0..max_depth.
// Trailing rings may be empty.
std::vector<std::vector<UnitId>> distance_rings(const FriendshipNetwork& net, UnitId source,
                                                std::size_t max_depth);

// Units whose BFS distance from i is in `degrees`. Degree 0 yields i itself.
std::vector<UnitId> neighborhood(const FriendshipNetwork& net, UnitId i,
                                 const std::set<std::size_t>& degrees);

// Shortest-path edge count, nullopt when unreachable.
std::optional<std::size_t> pairwise_distance(const FriendshipNetwork& net, UnitId i, UnitId j);

enum class Eligibility {
  None,
  NonEmptyRings12,  // unit must have non-empty first and second neighborhood rings
};

bool is_eligible(const FriendshipNetwork& net, UnitId i, Eligibility rule);

struct Dyad {
  UnitId first;
  UnitId second;
  bool operator==(const Dyad&) const = default;
};

// Units (or dyads) pairwise at least k hops apart.
struct SeparatedSet {
  std::size_t k = 0;
  Eligibility eligibility = Eligibility::None;
  std::vector<UnitId> members;
  std::vector<Dyad> dyads;

  std::size_t size() const { return members.empty() ? dyads.size() : members.size(); }

  // First n unit members, preserving separation and eligibility metadata.
  SeparatedSet prefix(std::size_t n) const;
};

// Greedy maximal k-separated set over a seeded random candidate order.
// With restarts > 1 the largest set is returned (first found on ties).
// restart_sizes, when given, receives every restart's set size in restart order.
SeparatedSet greedy_separated_set(const FriendshipNetwork& net, std::size_t k,
                                  Eligibility eligibility, std::size_t restarts,
                                  std::uint64_t seed,
                                  std::vector<std::size_t>* restart_sizes = nullptr);

// Greedy maximal set of edges whose endpoints in distinct dyads are at least k hops apart.
SeparatedSet greedy_dyad_separated_set(const FriendshipNetwork& net, std::size_t k,
                                       std::size_t restarts, std::uint64_t seed);

struct SeparationCheck {
  bool separated = true;
  bool eligible = true;
  bool maximal = true;
};

// Verifies distance, eligibility and maximality of a unit set by brute-force BFS.
SeparationCheck verify_separated_set(const FriendshipNetwork& net, const SeparatedSet& set);

}  // namespace netmech
