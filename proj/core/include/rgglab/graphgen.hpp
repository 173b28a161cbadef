#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rgglab/sphere.hpp"

namespace rgglab {

using Vertex = std::uint32_t;

/// Undirected edge with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  auto operator<=>(const Edge&) const = default;
};

inline Edge make_edge(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Simple undirected graph on vertices 0..n-1 held as a sorted edge list.
/// The dense 0/1 view is only materialized on request.
class Adjacency {
 public:
  Adjacency() = default;

  /// Validates and sorts: no self-loops, no duplicates, endpoints < n.
  static Adjacency from_edges(std::size_t n, std::vector<Edge> edges);

  std::size_t n() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Symmetric 0/1 matrix with zero diagonal.
  Eigen::MatrixXd dense() const;
  std::vector<std::size_t> degrees() const;

 private:
  Adjacency(std::size_t n, std::vector<Edge> sorted_edges) : n_(n), edges_(std::move(sorted_edges)) {}

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
};

/// Q = A - E[A]: entries A_ij - p off the diagonal, 0 on it.
struct CenteredMatrix {
  Adjacency base;
  double p = 0.0;
  Eigen::MatrixXd values;

  std::size_t n() const noexcept { return base.n(); }
};

/// Edge {i, j} iff <v_i, v_j> >= tau. Inner products are taken in blocks of rows;
/// `threads` = 0 uses the hardware concurrency, and the edge list is identical for any value.
Adjacency geometric_graph(const UnitVectorSet& vectors, const CapParams& cap, unsigned threads = 1);

/// Each pair independently with probability p, drawn in row-major pair order from one stream.
Adjacency erdos_renyi(std::size_t n, double p, std::uint64_t seed);

/// Requires 0 < p < 1.
CenteredMatrix center(const Adjacency& a, double p);

}  // namespace rgglab
