#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netmech/common.hpp"
#include "netmech/network.hpp"

namespace netmech {

using VertexId = std::uint32_t;
using VertexSet = std::vector<VertexId>;  // sorted, unique

enum class EdgeKind { Directed, Bidirected, Undirected };

// Directed edges point from `from` to `to`; the other kinds are symmetric.
struct MixedEdge {
  VertexId from;
  VertexId to;
  EdgeKind kind;
};

class MixedGraph {
 public:
  VertexId add_vertex(std::string label);
  void add_edge(VertexId from, VertexId to, EdgeKind kind);

  std::size_t n_vertices() const { return labels_.size(); }
  const std::vector<MixedEdge>& edges() const { return edges_; }
  const std::string& label(VertexId v) const { return labels_.at(v); }
  std::optional<VertexId> find(const std::string& label) const;
  std::size_t count(EdgeKind kind) const;

  // Edge indices incident to v.
  const std::vector<std::size_t>& incident(VertexId v) const { return incident_.at(v); }

 private:
  std::vector<std::string> labels_;
  std::vector<MixedEdge> edges_;
  std::vector<std::vector<std::size_t>> incident_;
};

// Per-layer edge type pattern shared by all adjacent unit pairs.
struct SegregatedGraphSpec {
  Mechanism L = Mechanism::Unknown;
  Mechanism A = Mechanism::Unknown;
  Mechanism Y = Mechanism::Unknown;

  Mechanism operator[](Layer layer) const;
  Mechanism& operator[](Layer layer);
  bool fully_determined() const;
  std::string code() const;  // e.g. "UBU"
  static SegregatedGraphSpec from_code(const std::string& code);
  bool operator==(const SegregatedGraphSpec&) const = default;
};

// Vertex id of a unit's variable in an instantiated SG (3 vertices per unit).
inline VertexId sg_vertex(Layer layer, UnitId unit) {
  return 3 * unit + static_cast<VertexId>(layer);
}

// Builds the per-unit L->A->Y pattern, cross-unit directed edges for each friendship,
// and within-layer edges resolved per `spec`.
MixedGraph instantiate_sg(const FriendshipNetwork& net, const SegregatedGraphSpec& spec);

struct SgViolation {
  int property;  // 1: illegal multi-edge, 2: vertex touches both <-> and -, 3: partially directed cycle
  std::string detail;
};

std::vector<SgViolation> validate_sg(const MixedGraph& g);

// s plus every vertex with a partially directed walk into s.
VertexSet anterior(const MixedGraph& g, const VertexSet& s);

// Undirected augmented graph of the subgraph induced by s.
class AugmentedGraph {
 public:
  AugmentedGraph(std::size_t n_vertices, VertexSet vertices);
  void connect(VertexId a, VertexId b);
  bool has_edge(VertexId a, VertexId b) const;
  const VertexSet& vertices() const { return vertices_; }
  const std::vector<VertexId>& neighbors(VertexId v) const { return adjacency_.at(v); }
  std::size_t n_edges() const;

 private:
  VertexSet vertices_;
  std::vector<std::vector<VertexId>> adjacency_;  // indexed by global VertexId
};

AugmentedGraph augment(const MixedGraph& g, const VertexSet& s);

// True iff every path between x and y in the augmented anterior graph of x, y, z meets z.
bool s_separated(const MixedGraph& g, const VertexSet& x, const VertexSet& y, const VertexSet& z);

VertexSet make_vertex_set(std::vector<VertexId> v);

}  // namespace netmech
