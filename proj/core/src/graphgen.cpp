#include "rgglab/graphgen.hpp"

#include <algorithm>
#include <sstream>

#include "rgglab/errors.hpp"
#include "rgglab/stats.hpp"

namespace rgglab {

Adjacency Adjacency::from_edges(std::size_t n, std::vector<Edge> edges) {
  for (auto& e : edges) {
    if (e.u == e.v) throw InvalidParameter("Adjacency: self-loop at vertex " + std::to_string(e.u));
    if (e.u >= n || e.v >= n) {
      std::ostringstream msg;
      msg << "Adjacency: edge (" << e.u << ", " << e.v << ") out of range for n = " << n;
      throw InvalidParameter(msg.str());
    }
    e = make_edge(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  const auto dup = std::adjacent_find(edges.begin(), edges.end());
  if (dup != edges.end()) {
    std::ostringstream msg;
    msg << "Adjacency: duplicate edge (" << dup->u << ", " << dup->v << ")";
    throw InvalidParameter(msg.str());
  }
  return Adjacency(n, std::move(edges));
}

Eigen::MatrixXd Adjacency::dense() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : edges_) {
    m(e.u, e.v) = 1.0;
    m(e.v, e.u) = 1.0;
  }
  return m;
}

std::vector<std::size_t> Adjacency::degrees() const {
  std::vector<std::size_t> deg(n_, 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

Adjacency geometric_graph(const UnitVectorSet& vectors, const CapParams& cap, unsigned threads) {
  if (cap.d != vectors.d()) {
    std::ostringstream msg;
    msg << "geometric_graph: cap calibrated for d = " << cap.d << " but vectors have d = " << vectors.d();
    throw InvalidParameter(msg.str());
  }
  const Eigen::MatrixXd& v = vectors.data();
  const auto n = v.rows();
  constexpr Eigen::Index kBlock = 256;
  const auto blocks = static_cast<std::size_t>((n + kBlock - 1) / kBlock);
  std::vector<std::vector<Edge>> per_block(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) {
    const Eigen::Index r0 = static_cast<Eigen::Index>(b) * kBlock;
    const Eigen::Index rows = std::min(kBlock, n - r0);
    const Eigen::MatrixXd gram = v.middleRows(r0, rows) * v.transpose();
    auto& out = per_block[b];
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Eigen::Index i = r0 + r;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (gram(r, j) >= cap.tau) out.push_back(Edge{static_cast<Vertex>(i), static_cast<Vertex>(j)});
      }
    }
  });
  std::vector<Edge> edges;
  for (auto& block : per_block) edges.insert(edges.end(), block.begin(), block.end());
  return Adjacency::from_edges(static_cast<std::size_t>(n), std::move(edges));
}

Adjacency erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("erdos_renyi: p must lie in [0, 1]");
  Engine rng(seed);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (uniform01(rng) < p) edges.push_back(Edge{static_cast<Vertex>(i), static_cast<Vertex>(j)});
    }
  }
  return Adjacency::from_edges(n, std::move(edges));
}

CenteredMatrix center(const Adjacency& a, double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("center: p must lie in (0, 1)");
  const auto n = static_cast<Eigen::Index>(a.n());
  CenteredMatrix q{a, p, Eigen::MatrixXd::Constant(n, n, -p)};
  q.values.diagonal().setZero();
  for (const auto& e : a.edges()) {
    q.values(e.u, e.v) = 1.0 - p;
    q.values(e.v, e.u) = 1.0 - p;
  }
  return q;
}

}  // namespace rgglab
