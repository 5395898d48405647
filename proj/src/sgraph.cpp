#include "netmech/sgraph.hpp"

#include <algorithm>
#include <numeric>
#include <map>

namespace netmech {

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::vector<std::size_t> parent;
};

VertexId other_end(const MixedEdge& e, VertexId v) { return e.from == v ? e.to : e.from; }

// True if traversing e from `from` is allowed in a partially directed walk.
bool forward_partially_directed(const MixedEdge& e, VertexId from) {
  if (e.kind == EdgeKind::Undirected) return true;
  return e.kind == EdgeKind::Directed && e.from == from;
}

std::string edge_kind_name(EdgeKind k) {
  switch (k) {
    case EdgeKind::Directed: return "->";
    case EdgeKind::Bidirected: return "<->";
    case EdgeKind::Undirected: return "-";
  }
  return "?";
}

}  // namespace

VertexId MixedGraph::add_vertex(std::string label) {
  labels_.push_back(std::move(label));
  incident_.emplace_back();
  return static_cast<VertexId>(labels_.size() - 1);
}

void MixedGraph::add_edge(VertexId from, VertexId to, EdgeKind kind) {
  if (from >= n_vertices() || to >= n_vertices()) throw ArgumentError("edge endpoint out of range");
  if (from == to) throw ArgumentError("loop on vertex " + labels_[from]);
  incident_[from].push_back(edges_.size());
  incident_[to].push_back(edges_.size());
  edges_.push_back({from, to, kind});
}

std::optional<VertexId> MixedGraph::find(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<VertexId>(it - labels_.begin());
}

std::size_t MixedGraph::count(EdgeKind kind) const {
  return std::count_if(edges_.begin(), edges_.end(),
                       [kind](const MixedEdge& e) { return e.kind == kind; });
}

Mechanism SegregatedGraphSpec::operator[](Layer layer) const {
  switch (layer) {
    case Layer::L: return L;
    case Layer::A: return A;
    case Layer::Y: return Y;
  }
  return Mechanism::Unknown;
}

Mechanism& SegregatedGraphSpec::operator[](Layer layer) {
  switch (layer) {
    case Layer::L: return L;
    case Layer::A: return A;
    case Layer::Y: break;
  }
  return Y;
}

bool SegregatedGraphSpec::fully_determined() const {
  return L != Mechanism::Unknown && A != Mechanism::Unknown && Y != Mechanism::Unknown;
}

std::string SegregatedGraphSpec::code() const {
  return {mechanism_code(L), mechanism_code(A), mechanism_code(Y)};
}

SegregatedGraphSpec SegregatedGraphSpec::from_code(const std::string& code) {
  if (code.size() != 3) throw ArgumentError("mechanism code must have 3 letters: '" + code + "'");
  SegregatedGraphSpec spec;
  const Layer layers[] = {Layer::L, Layer::A, Layer::Y};
  for (int i = 0; i < 3; ++i) {
    auto m = mechanism_from_code(code[i]);
    if (!m) throw ArgumentError("invalid mechanism letter in '" + code + "'");
    spec[layers[i]] = *m;
  }
  return spec;
}

MixedGraph instantiate_sg(const FriendshipNetwork& net, const SegregatedGraphSpec& spec) {
  if (!spec.fully_determined()) {
    throw PreconditionError("cannot instantiate SG from partially determined spec " + spec.code());
  }
  MixedGraph g;
  for (UnitId i = 0; i < net.n_units(); ++i) {
    for (Layer layer : {Layer::L, Layer::A, Layer::Y}) {
      g.add_vertex(std::string(to_string(layer)) + std::to_string(i));
    }
  }
  const auto L = [](UnitId i) { return sg_vertex(Layer::L, i); };
  const auto A = [](UnitId i) { return sg_vertex(Layer::A, i); };
  const auto Y = [](UnitId i) { return sg_vertex(Layer::Y, i); };
  for (UnitId i = 0; i < net.n_units(); ++i) {
    g.add_edge(L(i), A(i), EdgeKind::Directed);
    g.add_edge(A(i), Y(i), EdgeKind::Directed);
    g.add_edge(L(i), Y(i), EdgeKind::Directed);
  }
  auto kind_of = [](Mechanism m) {
    return m == Mechanism::Undirected ? EdgeKind::Undirected : EdgeKind::Bidirected;
  };
  for (auto [i, j] : net.edges()) {
    g.add_edge(L(i), A(j), EdgeKind::Directed);
    g.add_edge(L(j), A(i), EdgeKind::Directed);
    g.add_edge(L(i), Y(j), EdgeKind::Directed);
    g.add_edge(L(j), Y(i), EdgeKind::Directed);
    g.add_edge(A(i), Y(j), EdgeKind::Directed);
    g.add_edge(A(j), Y(i), EdgeKind::Directed);
    g.add_edge(L(i), L(j), kind_of(spec.L));
    g.add_edge(A(i), A(j), kind_of(spec.A));
    g.add_edge(Y(i), Y(j), kind_of(spec.Y));
  }
  return g;
}

std::vector<SgViolation> validate_sg(const MixedGraph& g) {
  std::vector<SgViolation> out;
  const std::size_t n = g.n_vertices();

  // (i) at most one edge per pair, except a directed + bidirected pair.
  std::map<std::pair<VertexId, VertexId>, std::vector<EdgeKind>> by_pair;
  for (const auto& e : g.edges()) {
    by_pair[{std::min(e.from, e.to), std::max(e.from, e.to)}].push_back(e.kind);
  }
  for (const auto& [pair, kinds] : by_pair) {
    if (kinds.size() == 1) continue;
    bool ok = kinds.size() == 2 &&
              std::count(kinds.begin(), kinds.end(), EdgeKind::Directed) == 1 &&
              std::count(kinds.begin(), kinds.end(), EdgeKind::Bidirected) == 1;
    if (!ok) {
      std::string detail = g.label(pair.first) + " and " + g.label(pair.second) + " joined by";
      for (auto k : kinds) detail += " " + edge_kind_name(k);
      out.push_back({1, detail});
    }
  }

  // (ii) no vertex touches both a bidirected and an undirected edge.
  for (VertexId v = 0; v < n; ++v) {
    bool bi = false, un = false;
    for (std::size_t ei : g.incident(v)) {
      bi |= g.edges()[ei].kind == EdgeKind::Bidirected;
      un |= g.edges()[ei].kind == EdgeKind::Undirected;
    }
    if (bi && un) out.push_back({2, g.label(v) + " has both <-> and - edges"});
  }

  // (iii) partially directed cycles: contract undirected components, then any directed edge
  // inside a component, or a directed cycle between components, closes one.
  DisjointSets sections(n);
  for (const auto& e : g.edges()) {
    if (e.kind == EdgeKind::Undirected) sections.unite(e.from, e.to);
  }
  std::vector<std::vector<std::size_t>> dag(n);
  std::vector<int> indegree(n, 0);
  bool cyclic = false;
  for (const auto& e : g.edges()) {
    if (e.kind != EdgeKind::Directed) continue;
    std::size_t a = sections.find(e.from), b = sections.find(e.to);
    if (a == b) {
      out.push_back({3, "directed edge " + g.label(e.from) + "->" + g.label(e.to) +
                            " inside an undirected component"});
      cyclic = true;
      continue;
    }
    dag[a].push_back(b);
    ++indegree[b];
  }
  if (!cyclic) {
    std::vector<std::size_t> queue;
    std::size_t roots = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (sections.find(v) != v) continue;
      ++roots;
      if (indegree[v] == 0) queue.push_back(v);
    }
    std::size_t visited = 0;
    while (!queue.empty()) {
      std::size_t v = queue.back();
      queue.pop_back();
      ++visited;
      for (std::size_t w : dag[v]) {
        if (--indegree[w] == 0) queue.push_back(w);
      }
    }
    if (visited != roots) out.push_back({3, "partially directed cycle between undirected components"});
  }
  return out;
}

VertexSet make_vertex_set(std::vector<VertexId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

VertexSet anterior(const MixedGraph& g, const VertexSet& s) {
  std::vector<char> in(g.n_vertices(), 0);
  std::vector<VertexId> stack;
  for (VertexId v : s) {
    if (v >= g.n_vertices()) throw ArgumentError("vertex out of range");
    if (!in[v]) {
      in[v] = 1;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (std::size_t ei : g.incident(v)) {
      const auto& e = g.edges()[ei];
      VertexId u = other_end(e, v);
      // u joins if the edge can be walked from u towards v.
      if (in[u] || !forward_partially_directed(e, u)) continue;
      in[u] = 1;
      stack.push_back(u);
    }
  }
  VertexSet out;
  for (VertexId v = 0; v < g.n_vertices(); ++v) {
    if (in[v]) out.push_back(v);
  }
  return out;
}

AugmentedGraph::AugmentedGraph(std::size_t n_vertices, VertexSet vertices)
    : vertices_(std::move(vertices)), adjacency_(n_vertices) {}

void AugmentedGraph::connect(VertexId a, VertexId b) {
  if (a == b || has_edge(a, b)) return;
  adjacency_.at(a).push_back(b);
  adjacency_.at(b).push_back(a);
}

bool AugmentedGraph::has_edge(VertexId a, VertexId b) const {
  const auto& row = adjacency_.at(a);
  return std::find(row.begin(), row.end(), b) != row.end();
}

std::size_t AugmentedGraph::n_edges() const {
  std::size_t total = 0;
  for (const auto& row : adjacency_) total += row.size();
  return total / 2;
}

AugmentedGraph augment(const MixedGraph& g, const VertexSet& s) {
  const std::size_t n = g.n_vertices();
  std::vector<char> in(n, 0);
  for (VertexId v : s) in.at(v) = 1;
  AugmentedGraph out(n, s);

  // Sections are undirected components; sections joined by <-> form collider components.
  DisjointSets components(n);
  std::vector<const MixedEdge*> induced;
  for (const auto& e : g.edges()) {
    if (!in[e.from] || !in[e.to]) continue;
    induced.push_back(&e);
    out.connect(e.from, e.to);
    if (e.kind != EdgeKind::Directed) components.unite(e.from, e.to);
  }

  // Every vertex with an arrowhead into a collider component is collider-connected to every
  // other such vertex of the same component.
  std::map<std::size_t, std::vector<VertexId>> boundary;
  for (const MixedEdge* e : induced) {
    if (e->kind == EdgeKind::Directed) {
      boundary[components.find(e->to)].push_back(e->from);
    } else if (e->kind == EdgeKind::Bidirected) {
      std::size_t c = components.find(e->to);
      boundary[c].push_back(e->from);
      boundary[c].push_back(e->to);
    }
  }
  for (auto& [c, members] : boundary) {
    members = make_vertex_set(std::move(members));
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) out.connect(members[a], members[b]);
    }
  }
  return out;
}

bool s_separated(const MixedGraph& g, const VertexSet& x, const VertexSet& y, const VertexSet& z) {
  const std::size_t n = g.n_vertices();
  std::vector<char> role(n, 0);  // 1 = x, 2 = y, 3 = z
  auto mark = [&](const VertexSet& set, char r) {
    for (VertexId v : set) {
      if (v >= n) throw ArgumentError("vertex out of range");
      if (role[v] != 0) throw ArgumentError("separation query sets must be disjoint");
      role[v] = r;
    }
  };
  mark(x, 1);
  mark(y, 2);
  mark(z, 3);
  if (x.empty() || y.empty()) return true;

  VertexSet all;
  for (VertexId v = 0; v < n; ++v) {
    if (role[v]) all.push_back(v);
  }
  const AugmentedGraph aug = augment(g, anterior(g, all));

  std::vector<char> seen(n, 0);
  std::vector<VertexId> stack(x.begin(), x.end());
  for (VertexId v : x) seen[v] = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (VertexId w : aug.neighbors(v)) {
      if (seen[w] || role[w] == 3) continue;
      if (role[w] == 2) return false;
      seen[w] = 1;
      stack.push_back(w);
    }
  }
  return true;
}

}  // namespace netmech
