// Structural conditional-independence queries on instantiated segregated graphs.
#pragma once

#include <set>
#include <vector>

#include "netmech/network.hpp"
#include "netmech/sgraph.hpp"

namespace lemma {

using namespace netmech;

inline void add_layer(VertexSet& out, Layer layer, const std::vector<UnitId>& units) {
  for (UnitId u : units) out.push_back(sg_vertex(layer, u));
}

inline std::vector<UnitId> rings(const FriendshipNetwork& net, UnitId i, std::set<std::size_t> d) {
  return neighborhood(net, i, d);
}

struct Query {
  VertexSet x, y, z;
};

// Test restriction for `layer` at unit i: the unit against its ring-2 peers in the same layer,
// given ring-1 peers and (for A and Y) earlier layers over rings 0-3.
inline Query layer_restriction(const FriendshipNetwork& net, Layer layer, UnitId i) {
  Query q;
  q.x = {sg_vertex(layer, i)};
  add_layer(q.y, layer, rings(net, i, {2}));
  add_layer(q.z, layer, rings(net, i, {1}));
  const auto r0123 = rings(net, i, {0, 1, 2, 3});
  if (layer != Layer::L) add_layer(q.z, Layer::L, r0123);
  if (layer == Layer::Y) add_layer(q.z, Layer::A, r0123);
  q.x = make_vertex_set(q.x);
  q.y = make_vertex_set(q.y);
  q.z = make_vertex_set(q.z);
  return q;
}

// Coding factorisation: the unit is separated from every modelled variable of units four or
// more hops away, given the conditioning set of the alternative model (rings 1-2 of its own
// layer, rings 0-3 of earlier layers).
inline Query coding_restriction(const FriendshipNetwork& net, Layer layer, UnitId i) {
  Query q;
  q.x = {sg_vertex(layer, i)};
  add_layer(q.z, layer, rings(net, i, {1, 2}));
  const auto r0123 = rings(net, i, {0, 1, 2, 3});
  if (layer != Layer::L) add_layer(q.z, Layer::L, r0123);
  if (layer == Layer::Y) add_layer(q.z, Layer::A, r0123);
  std::set<std::size_t> near{0, 1, 2, 3};
  const auto within = rings(net, i, near);
  const std::set<UnitId> close(within.begin(), within.end());
  std::vector<UnitId> far;
  for (UnitId u = 0; u < net.n_units(); ++u) {
    if (!close.count(u)) far.push_back(u);
  }
  add_layer(q.y, layer, far);
  if (layer != Layer::L) add_layer(q.y, Layer::L, far);
  if (layer == Layer::Y) add_layer(q.y, Layer::A, far);
  q.x = make_vertex_set(q.x);
  q.y = make_vertex_set(q.y);
  q.z = make_vertex_set(q.z);
  return q;
}

inline std::vector<SegregatedGraphSpec> all_specs() {
  std::vector<SegregatedGraphSpec> out;
  for (int mask = 0; mask < 8; ++mask) {
    std::string code;
    for (int b = 2; b >= 0; --b) code += (mask >> b) & 1 ? 'B' : 'U';
    out.push_back(SegregatedGraphSpec::from_code(code));
  }
  return out;
}

}  // namespace lemma
