#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rgglab/graphgen.hpp"

namespace rgglab {

/// Simple undirected graph with incidence lists sorted by neighbour id.
class SimpleGraph {
 public:
  struct Incidence {
    Vertex neighbor;
    std::size_t edge;  ///< index into edges()
  };

  SimpleGraph() = default;
  /// Throws InvalidParameter on self-loops, duplicates or out-of-range endpoints.
  SimpleGraph(std::size_t vertex_count, std::vector<Edge> edges);
  explicit SimpleGraph(const Adjacency& adjacency);

  std::size_t vertex_count() const noexcept { return incidence_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const Incidence> neighbors(Vertex v) const { return incidence_[v]; }
  std::optional<std::size_t> edge_id(Vertex a, Vertex b) const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> incidence_;
};

/// Connected component id per vertex; ids are assigned in order of lowest vertex.
std::vector<std::size_t> connected_components(const SimpleGraph& g, std::size_t* count = nullptr);

/// is_bridge[edge id], by one iterative low-link DFS.
std::vector<bool> bridge_mask(const SimpleGraph& g);

/// Bridge edges, sorted.
std::vector<Edge> find_bridges(const SimpleGraph& g);

struct GraphPiece {
  std::vector<Vertex> vertices;     ///< sorted
  std::vector<std::size_t> edges;   ///< edge ids of the parent graph, sorted
};

/// G = union of 2-edge-connected components G_C and bridge components F (subtrees spanned by bridges).
/// Single vertices whose edges are all bridges are not components of their own.
struct BlockCutTree {
  std::vector<GraphPiece> two_edge_connected_components;
  std::vector<GraphPiece> bridge_components;
  std::vector<Vertex> junctions;    ///< vertices touching both a bridge and a non-bridge edge
  std::vector<bool> is_bridge;      ///< by edge id
};

/// Requires a connected graph; otherwise throws DisconnectedGraph naming two vertices.
BlockCutTree block_cut_tree(const SimpleGraph& g);

/// An ear as a vertex path. The first ear is a cycle written with its start repeated at the
/// end; later ears are paths whose endpoints were already covered (they may coincide).
struct Ear {
  std::vector<Vertex> vertices;
  std::size_t length() const noexcept { return vertices.empty() ? 0 : vertices.size() - 1; }
  bool closed() const noexcept { return vertices.size() >= 2 && vertices.front() == vertices.back(); }
};

struct EarDecomposition {
  Vertex root = 0;
  std::vector<Ear> ears;
};

/// DFS chain decomposition: tree edges point to the root, back edges away from it; vertices are
/// taken in DFS preorder and each back edge a -> x is followed up the tree from x until an
/// already covered vertex. Children are explored in ascending id order. The first ear is a cycle
/// through `root`. Throws NotTwoEdgeConnected if the graph has a bridge or is disconnected.
EarDecomposition ear_decomposition(const SimpleGraph& g, Vertex root);

struct EarValidation {
  bool valid = true;
  std::string violation;  ///< first failed condition, empty when valid
};

/// Checks the three defining conditions of an ear decomposition of g (first ear is a simple
/// cycle containing the root; later ears attach at covered vertices with fresh internal
/// vertices; ears partition the edge set).
EarValidation validate_ears(const SimpleGraph& g, const EarDecomposition& candidate);

/// Underlying simple graph of a closed walk, on compact labels 0..v-1 (sorted by original id).
struct WalkGraph {
  SimpleGraph graph;
  std::vector<Vertex> labels;              ///< compact id -> original vertex id
  std::vector<std::size_t> multiplicity;   ///< traversal count by edge id
};

/// The walk (i_1, ..., i_k) is closed by the implicit step i_k -> i_1. Throws InvalidWalk when
/// k < 2 or two cyclically consecutive entries coincide.
WalkGraph build_walk_graph(std::span<const Vertex> walk);

struct WalkGraphStats {
  std::size_t v = 0;   ///< vertices
  std::size_t e = 0;   ///< distinct edges
  std::size_t g = 0;   ///< excess e - v + 1
  std::size_t c = 0;   ///< edges inside 2-edge-connected components
  std::size_t t = 0;   ///< ears of length 2, over all components
  std::size_t b = 0;   ///< edges traversed exactly once
  std::size_t chords = 0;  ///< ears of length 1, over all components
  std::vector<std::size_t> ears_per_component;
  std::vector<std::size_t> multiplicities;  ///< by edge id of the walk graph
  std::size_t walk_length = 0;

  /// c >= 3g - t; fails when length-1 ears are present.
  bool satisfies_ear_length_bound() const noexcept { return c + t >= 3 * g; }
  /// Every component has at least one ear longer than 2 (so g >= t + 1 when g >= 1).
  bool every_component_has_long_ear = true;
};

/// Block-cut tree of the walk graph, then an ear decomposition of each 2-edge-connected
/// component rooted at its lowest junction vertex (lowest vertex when it has none).
WalkGraphStats walk_graph_stats(std::span<const Vertex> walk);

/// 2^t p^{v-1} (C tau)^{c-2g} (C sqrt(log(1/p)))^{g-t}, natural log.
/// Requires 0 < p < 1, tau > 0, C > 0; throws DomainError when g < t.
double contribution_bound(const WalkGraphStats& stats, double p, double tau, double C);

}  // namespace rgglab
