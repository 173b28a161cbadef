#include "rgglab/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "rgglab/errors.hpp"

namespace rgglab {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::vector<std::size_t> label_pieces(const SimpleGraph& g, const std::vector<bool>& edge_selected,
                                      std::size_t& pieces) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> piece(n, kNone);
  pieces = 0;
  for (Vertex s = 0; s < n; ++s) {
    if (piece[s] != kNone) continue;
    bool has_edge = false;
    for (const auto& inc : g.neighbors(s)) has_edge = has_edge || edge_selected[inc.edge];
    if (!has_edge) continue;
    std::queue<Vertex> queue;
    queue.push(s);
    piece[s] = pieces;
    while (!queue.empty()) {
      const Vertex u = queue.front();
      queue.pop();
      for (const auto& inc : g.neighbors(u)) {
        if (!edge_selected[inc.edge] || piece[inc.neighbor] != kNone) continue;
        piece[inc.neighbor] = pieces;
        queue.push(inc.neighbor);
      }
    }
    ++pieces;
  }
  return piece;
}

std::vector<GraphPiece> collect_pieces(const SimpleGraph& g, const std::vector<bool>& edge_selected) {
  std::size_t count = 0;
  const auto piece = label_pieces(g, edge_selected, count);
  std::vector<GraphPiece> out(count);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (piece[v] != kNone) out[piece[v]].vertices.push_back(v);
  }
  for (std::size_t id = 0; id < g.edge_count(); ++id) {
    if (edge_selected[id]) out[piece[g.edges()[id].u]].edges.push_back(id);
  }
  return out;
}

void require_connected(const SimpleGraph& g, const char* who) {
  std::size_t count = 0;
  const auto comp = connected_components(g, &count);
  if (count <= 1) return;
  const auto other = std::find_if(comp.begin(), comp.end(), [](std::size_t c) { return c != 0; });
  const auto b = static_cast<std::size_t>(std::distance(comp.begin(), other));
  std::ostringstream msg;
  msg << who << ": graph is disconnected (vertices 0 and " << b << " lie in different components)";
  throw DisconnectedGraph(msg.str(), 0, b);
}

struct LocalGraph {
  SimpleGraph graph;
  std::vector<Vertex> labels;
};

LocalGraph induced_on_edges(const SimpleGraph& g, const GraphPiece& piece) {
  LocalGraph local;
  local.labels = piece.vertices;
  auto local_id = [&](Vertex v) {
    return static_cast<Vertex>(std::lower_bound(local.labels.begin(), local.labels.end(), v) - local.labels.begin());
  };
  std::vector<Edge> edges;
  edges.reserve(piece.edges.size());
  for (auto id : piece.edges) {
    const auto& e = g.edges()[id];
    edges.push_back(make_edge(local_id(e.u), local_id(e.v)));
  }
  local.graph = SimpleGraph(local.labels.size(), std::move(edges));
  return local;
}

}  // namespace

SimpleGraph::SimpleGraph(std::size_t vertex_count, std::vector<Edge> edges) : incidence_(vertex_count) {
  for (auto& e : edges) {
    if (e.u == e.v) throw InvalidParameter("SimpleGraph: self-loop at vertex " + std::to_string(e.u));
    if (e.u >= vertex_count || e.v >= vertex_count) throw InvalidParameter("SimpleGraph: edge endpoint out of range");
    e = make_edge(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw InvalidParameter("SimpleGraph: duplicate edge");
  }
  edges_ = std::move(edges);
  for (std::size_t id = 0; id < edges_.size(); ++id) {
    incidence_[edges_[id].u].push_back({edges_[id].v, id});
    incidence_[edges_[id].v].push_back({edges_[id].u, id});
  }
  for (auto& list : incidence_) {
    std::sort(list.begin(), list.end(), [](const Incidence& a, const Incidence& b) { return a.neighbor < b.neighbor; });
  }
}

SimpleGraph::SimpleGraph(const Adjacency& adjacency) : SimpleGraph(adjacency.n(), adjacency.edges()) {}

std::optional<std::size_t> SimpleGraph::edge_id(Vertex a, Vertex b) const {
  const Edge key = make_edge(a, b);
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

std::vector<std::size_t> connected_components(const SimpleGraph& g, std::size_t* count) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> comp(n, kNone);
  std::size_t next = 0;
  for (Vertex s = 0; s < n; ++s) {
    if (comp[s] != kNone) continue;
    std::queue<Vertex> queue;
    queue.push(s);
    comp[s] = next;
    while (!queue.empty()) {
      const Vertex u = queue.front();
      queue.pop();
      for (const auto& inc : g.neighbors(u)) {
        if (comp[inc.neighbor] == kNone) {
          comp[inc.neighbor] = next;
          queue.push(inc.neighbor);
        }
      }
    }
    ++next;
  }
  if (count != nullptr) *count = next;
  return comp;
}

std::vector<bool> bridge_mask(const SimpleGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> disc(n, kNone), low(n, 0);
  std::vector<bool> bridge(g.edge_count(), false);
  struct Frame {
    Vertex v;
    std::size_t parent_edge;
    std::size_t next;
  };
  std::vector<Frame> stack;
  std::size_t timer = 0;
  for (Vertex s = 0; s < n; ++s) {
    if (disc[s] != kNone) continue;
    disc[s] = low[s] = timer++;
    stack.push_back({s, kNone, 0});
    while (!stack.empty()) {
      Frame& top = stack.back();
      const auto nbrs = g.neighbors(top.v);
      if (top.next < nbrs.size()) {
        const auto inc = nbrs[top.next++];
        if (inc.edge == top.parent_edge) continue;
        if (disc[inc.neighbor] == kNone) {
          disc[inc.neighbor] = low[inc.neighbor] = timer++;
          stack.push_back({inc.neighbor, inc.edge, 0});
        } else {
          low[top.v] = std::min(low[top.v], disc[inc.neighbor]);
        }
        continue;
      }
      const Frame done = top;
      stack.pop_back();
      if (stack.empty()) break;
      const Vertex parent = stack.back().v;
      low[parent] = std::min(low[parent], low[done.v]);
      if (low[done.v] > disc[parent]) bridge[done.parent_edge] = true;
    }
  }
  return bridge;
}

std::vector<Edge> find_bridges(const SimpleGraph& g) {
  const auto mask = bridge_mask(g);
  std::vector<Edge> out;
  for (std::size_t id = 0; id < mask.size(); ++id) {
    if (mask[id]) out.push_back(g.edges()[id]);
  }
  return out;
}

BlockCutTree block_cut_tree(const SimpleGraph& g) {
  require_connected(g, "block_cut_tree");
  BlockCutTree tree;
  tree.is_bridge = bridge_mask(g);
  std::vector<bool> non_bridge(tree.is_bridge.size());
  std::transform(tree.is_bridge.begin(), tree.is_bridge.end(), non_bridge.begin(), [](bool b) { return !b; });
  tree.two_edge_connected_components = collect_pieces(g, non_bridge);
  tree.bridge_components = collect_pieces(g, tree.is_bridge);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    bool touches_bridge = false, touches_cycle = false;
    for (const auto& inc : g.neighbors(v)) {
      (tree.is_bridge[inc.edge] ? touches_bridge : touches_cycle) = true;
    }
    if (touches_bridge && touches_cycle) tree.junctions.push_back(v);
  }
  return tree;
}

EarDecomposition ear_decomposition(const SimpleGraph& g, Vertex root) {
  const std::size_t n = g.vertex_count();
  if (root >= n) throw InvalidParameter("ear_decomposition: root out of range");
  if (g.edge_count() == 0) throw NotTwoEdgeConnected("ear_decomposition: graph has no edges", root, root);
  {
    std::size_t count = 0;
    const auto comp = connected_components(g, &count);
    if (count > 1) {
      const auto other = std::find_if(comp.begin(), comp.end(), [&](std::size_t c) { return c != comp[root]; });
      const auto b = static_cast<std::size_t>(std::distance(comp.begin(), other));
      throw NotTwoEdgeConnected("ear_decomposition: graph is disconnected", root, b);
    }
  }
  const auto bridges = bridge_mask(g);
  for (std::size_t id = 0; id < bridges.size(); ++id) {
    if (bridges[id]) {
      const auto& e = g.edges()[id];
      std::ostringstream msg;
      msg << "ear_decomposition: graph is not 2-edge-connected, bridge (" << e.u << ", " << e.v << ")";
      throw NotTwoEdgeConnected(msg.str(), e.u, e.v);
    }
  }

  // Iterative DFS in ascending neighbour order.
  std::vector<std::size_t> pre(n, kNone), parent_edge(n, kNone);
  std::vector<Vertex> parent(n, root), order;
  order.reserve(n);
  std::vector<std::pair<Vertex, std::size_t>> stack{{root, 0}};
  pre[root] = 0;
  order.push_back(root);
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    const auto nbrs = g.neighbors(v);
    if (next == nbrs.size()) {
      stack.pop_back();
      continue;
    }
    const auto inc = nbrs[next++];
    if (pre[inc.neighbor] != kNone) continue;
    pre[inc.neighbor] = order.size();
    parent[inc.neighbor] = v;
    parent_edge[inc.neighbor] = inc.edge;
    order.push_back(inc.neighbor);
    stack.emplace_back(inc.neighbor, 0);
  }

  EarDecomposition out;
  out.root = root;
  std::vector<bool> covered(n, false);
  covered[root] = true;
  for (const Vertex a : order) {
    for (const auto& inc : g.neighbors(a)) {
      const Vertex x = inc.neighbor;
      const bool tree_edge = parent_edge[x] == inc.edge || parent_edge[a] == inc.edge;
      if (tree_edge || pre[x] < pre[a]) continue;
      if (!covered[a]) throw std::logic_error("ear_decomposition: chain starts at an uncovered vertex");
      Ear ear;
      ear.vertices = {a, x};
      Vertex cur = x;
      while (!covered[cur]) {
        covered[cur] = true;
        cur = parent[cur];
        ear.vertices.push_back(cur);
      }
      out.ears.push_back(std::move(ear));
    }
  }
  return out;
}

EarValidation validate_ears(const SimpleGraph& g, const EarDecomposition& candidate) {
  auto fail = [](std::string why) { return EarValidation{false, std::move(why)}; };
  const std::size_t n = g.vertex_count();
  if (candidate.ears.empty()) return fail("no ears");
  std::vector<bool> covered(n, false), used(g.edge_count(), false);

  auto claim_edges = [&](const Ear& ear, std::size_t index) -> std::optional<std::string> {
    for (std::size_t i = 0; i + 1 < ear.vertices.size(); ++i) {
      const Vertex a = ear.vertices[i], b = ear.vertices[i + 1];
      if (a >= n || b >= n) return "ear " + std::to_string(index + 1) + " has a vertex out of range";
      const auto id = a == b ? std::nullopt : g.edge_id(a, b);
      if (!id) {
        return "ear " + std::to_string(index + 1) + " uses (" + std::to_string(a) + ", " + std::to_string(b) +
               ") which is not an edge";
      }
      if (used[*id]) {
        return "edge (" + std::to_string(a) + ", " + std::to_string(b) + ") repeated in ear " +
               std::to_string(index + 1);
      }
      used[*id] = true;
    }
    return std::nullopt;
  };

  const Ear& first = candidate.ears.front();
  if (!first.closed() || first.length() < 3) return fail("first ear not a cycle");
  {
    std::vector<Vertex> inner(first.vertices.begin(), first.vertices.end() - 1);
    std::sort(inner.begin(), inner.end());
    if (std::adjacent_find(inner.begin(), inner.end()) != inner.end()) return fail("first ear not a simple cycle");
    if (!std::binary_search(inner.begin(), inner.end(), candidate.root)) return fail("first ear does not contain the root");
  }
  if (auto err = claim_edges(first, 0)) return fail(*err);
  for (const Vertex v : first.vertices) covered[v] = true;

  for (std::size_t i = 1; i < candidate.ears.size(); ++i) {
    const Ear& ear = candidate.ears[i];
    const std::string label = "ear " + std::to_string(i + 1);
    if (ear.length() < 1) return fail(label + " is empty");
    if (ear.vertices.front() >= n || ear.vertices.back() >= n) return fail(label + " has a vertex out of range");
    if (!covered[ear.vertices.front()] || !covered[ear.vertices.back()]) {
      return fail(label + " has an endpoint outside the earlier ears");
    }
    std::vector<Vertex> inner(ear.vertices.begin() + 1, ear.vertices.end() - 1);
    for (const Vertex v : inner) {
      if (v >= n) return fail(label + " has a vertex out of range");
      if (covered[v]) return fail(label + " has internal vertex " + std::to_string(v) + " already covered");
    }
    std::sort(inner.begin(), inner.end());
    if (std::adjacent_find(inner.begin(), inner.end()) != inner.end()) return fail(label + " is not a path");
    if (auto err = claim_edges(ear, i)) return fail(*err);
    for (const Vertex v : ear.vertices) covered[v] = true;
  }
  for (std::size_t id = 0; id < used.size(); ++id) {
    if (!used[id]) {
      const auto& e = g.edges()[id];
      return fail("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ") not covered");
    }
  }
  return {};
}

WalkGraph build_walk_graph(std::span<const Vertex> walk) {
  if (walk.size() < 2) throw InvalidWalk("closed walk needs at least two entries");
  for (std::size_t i = 0; i < walk.size(); ++i) {
    const Vertex a = walk[i], b = walk[(i + 1) % walk.size()];
    if (a == b) {
      std::ostringstream msg;
      msg << "closed walk repeats vertex " << a << " at positions " << i << " and " << (i + 1) % walk.size();
      throw InvalidWalk(msg.str());
    }
  }
  WalkGraph out;
  out.labels.assign(walk.begin(), walk.end());
  std::sort(out.labels.begin(), out.labels.end());
  out.labels.erase(std::unique(out.labels.begin(), out.labels.end()), out.labels.end());
  auto compact = [&](Vertex v) {
    return static_cast<Vertex>(std::lower_bound(out.labels.begin(), out.labels.end(), v) - out.labels.begin());
  };
  std::map<Edge, std::size_t> counts;
  for (std::size_t i = 0; i < walk.size(); ++i) {
    ++counts[make_edge(compact(walk[i]), compact(walk[(i + 1) % walk.size()]))];
  }
  std::vector<Edge> edges;
  edges.reserve(counts.size());
  for (const auto& [edge, count] : counts) {
    edges.push_back(edge);
    out.multiplicity.push_back(count);
  }
  out.graph = SimpleGraph(out.labels.size(), std::move(edges));
  return out;
}

WalkGraphStats walk_graph_stats(std::span<const Vertex> walk) {
  const WalkGraph wg = build_walk_graph(walk);
  const SimpleGraph& g = wg.graph;
  WalkGraphStats s;
  s.walk_length = walk.size();
  s.v = g.vertex_count();
  s.e = g.edge_count();
  s.g = s.e + 1 - s.v;
  s.multiplicities = wg.multiplicity;
  s.b = static_cast<std::size_t>(std::count(s.multiplicities.begin(), s.multiplicities.end(), std::size_t{1}));

  const BlockCutTree tree = block_cut_tree(g);
  for (const auto& comp : tree.two_edge_connected_components) {
    s.c += comp.edges.size();
    Vertex root = comp.vertices.front();
    for (const Vertex j : tree.junctions) {
      if (std::binary_search(comp.vertices.begin(), comp.vertices.end(), j)) {
        root = j;
        break;
      }
    }
    const LocalGraph local = induced_on_edges(g, comp);
    const auto local_root = static_cast<Vertex>(
        std::lower_bound(local.labels.begin(), local.labels.end(), root) - local.labels.begin());
    const EarDecomposition ears = ear_decomposition(local.graph, local_root);
    s.ears_per_component.push_back(ears.ears.size());
    bool has_long = false;
    for (const auto& ear : ears.ears) {
      if (ear.length() == 2) ++s.t;
      if (ear.length() == 1) ++s.chords;
      if (ear.length() >= 3) has_long = true;
    }
    s.every_component_has_long_ear = s.every_component_has_long_ear && has_long;
  }
  return s;
}

double contribution_bound(const WalkGraphStats& stats, double p, double tau, double C) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("contribution_bound: p must lie in (0, 1)");
  if (!(tau > 0.0)) throw InvalidParameter("contribution_bound: tau must be positive");
  if (!(C > 0.0)) throw InvalidParameter("contribution_bound: C must be positive");
  if (stats.g < stats.t) {
    throw DomainError("contribution_bound: excess g = " + std::to_string(stats.g) +
                      " is smaller than the number of length-2 ears t = " + std::to_string(stats.t));
  }
  const auto as_int = [](std::size_t x) { return static_cast<double>(x); };
  const double cycle_power = as_int(stats.c) - 2.0 * as_int(stats.g);
  return std::pow(2.0, as_int(stats.t)) * std::pow(p, as_int(stats.v) - 1.0) * std::pow(C * tau, cycle_power) *
         std::pow(C * std::sqrt(std::log(1.0 / p)), as_int(stats.g - stats.t));
}

}  // namespace rgglab
