#include "rgglab/walks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rgglab/errors.hpp"
#include "rgglab/spectral.hpp"
#include "rgglab/sphere.hpp"

namespace rgglab {
namespace {

struct TreeShape {
  bool tree = false;
  bool all_double = false;
};

TreeShape tree_shape(std::span<const Vertex> walk) {
  const WalkGraph wg = build_walk_graph(walk);
  TreeShape s;
  s.tree = wg.graph.edge_count() + 1 == wg.graph.vertex_count();
  s.all_double = std::all_of(wg.multiplicity.begin(), wg.multiplicity.end(), [](std::size_t m) { return m == 2; });
  return s;
}

// Canonically labelled closed walks of length k: each new vertex gets the next unused label.
// Labels are capped at max_vertices.
void for_each_canonical_walk(unsigned k, std::size_t max_vertices,
                             const std::function<void(const ClosedWalk&)>& fn) {
  ClosedWalk walk(k);
  auto rec = [&](auto&& self, std::size_t pos, Vertex used) -> void {
    if (pos == k) {
      if (walk[k - 1] != walk[0]) fn(walk);
      return;
    }
    const Vertex limit = static_cast<Vertex>(std::min<std::size_t>(used + 1, max_vertices));
    for (Vertex v = 0; v < limit; ++v) {
      if (pos > 0 && v == walk[pos - 1]) continue;
      walk[pos] = v;
      self(self, pos + 1, v == used ? used + 1 : used);
    }
  };
  if (k >= 2) rec(rec, 0, 0);
}

std::size_t chunk_count(std::size_t trials, std::size_t chunk) { return (trials + chunk - 1) / chunk; }

}  // namespace

std::string_view to_string(Regime r) { return r == Regime::dense ? "dense" : "sparse"; }

std::string_view to_string(WalkClass c) {
  switch (c) {
    case WalkClass::C1_dense: return "C1_dense";
    case WalkClass::C2_dense: return "C2_dense";
    case WalkClass::C1_sparse: return "C1_sparse";
    case WalkClass::C2_sparse: return "C2_sparse";
  }
  return "unknown";
}

bool is_tree_class(WalkClass c) { return c == WalkClass::C1_dense || c == WalkClass::C1_sparse; }

std::uint64_t catalan(unsigned m) {
  if (m > 30) throw InvalidParameter("catalan: m = " + std::to_string(m) + " overflows 64-bit range (max 30)");
  // C_{j+1} = C_j * 2(2j+1) / (j+2); the division is exact and the product fits for m <= 30.
  std::uint64_t c = 1;
  for (unsigned j = 0; j < m; ++j) c = c * (2 * (2 * j + 1)) / (j + 2);
  return c;
}

MomentValue semicircle_moment(unsigned k) {
  MomentValue out{k, 0.0, MomentLaw::semicircle, 0.0};
  if (k % 2 == 0) out.value = static_cast<double>(catalan(k / 2));
  return out;
}

MomentValue nu_alpha_moment(unsigned k, double alpha) {
  if (!(alpha > 0.0)) throw InvalidParameter("nu_alpha_moment: alpha must be positive");
  MomentValue out{k, 0.0, MomentLaw::nu_alpha, alpha};
  if (k % 2 != 0) return out;
  const unsigned m = k / 2;
  for (unsigned l = 1; l <= m; ++l) {
    out.value += static_cast<double>(catalan(l)) * std::pow(alpha, static_cast<double>(l) - m);
  }
  return out;
}

double sparse_tree_walk_moment(unsigned k, double alpha) {
  if (!(alpha > 0.0)) throw InvalidParameter("sparse_tree_walk_moment: alpha must be positive");
  if (k % 2 != 0 || k == 0) return k == 0 ? 1.0 : 0.0;
  if (k > 16) throw SizeGuardExceeded("sparse_tree_walk_moment: k > 16 is too large to enumerate");
  const unsigned m = k / 2;
  std::vector<std::uint64_t> by_edges(m + 1, 0);
  for_each_canonical_walk(k, m + 1, [&](const ClosedWalk& w) {
    const WalkGraph wg = build_walk_graph(w);
    if (wg.graph.edge_count() + 1 == wg.graph.vertex_count()) ++by_edges[wg.graph.edge_count()];
  });
  double value = 0.0;
  for (unsigned l = 1; l <= m; ++l) {
    value += static_cast<double>(by_edges[l]) * std::pow(alpha, static_cast<double>(l) - m);
  }
  return value;
}

WalkClass classify_walk(std::span<const Vertex> walk, Regime regime) {
  const TreeShape s = tree_shape(walk);
  if (regime == Regime::dense) return s.tree && s.all_double ? WalkClass::C1_dense : WalkClass::C2_dense;
  return s.tree ? WalkClass::C1_sparse : WalkClass::C2_sparse;
}

double closed_walk_guard_size(std::size_t n, unsigned k) {
  if (k == 0 || n == 0) return 0.0;
  return static_cast<double>(n) * std::pow(static_cast<double>(n) - 1.0, static_cast<double>(k) - 1.0);
}

ClosedWalkEnumerator::ClosedWalkEnumerator(std::size_t n, unsigned k) : n_(n), k_(k), current_(k) {
  const double size = closed_walk_guard_size(n, k);
  if (size > kEnumerationLimit) {
    std::ostringstream msg;
    msg << "closed-walk enumeration for n = " << n << ", k = " << k << " would visit up to " << size
        << " sequences (limit " << kEnumerationLimit << "); use the Monte Carlo mode instead";
    throw SizeGuardExceeded(msg.str());
  }
  if (k < 2 || n < 2) done_ = true;
}

bool ClosedWalkEnumerator::allowed(std::size_t position, Vertex value) const {
  if (position > 0 && value == current_[position - 1]) return false;
  if (position + 1 == k_ && value == current_[0]) return false;
  return true;
}

bool ClosedWalkEnumerator::fill(std::size_t position) {
  if (position == k_) return true;
  for (Vertex v = 0; v < n_; ++v) {
    if (!allowed(position, v)) continue;
    current_[position] = v;
    if (fill(position + 1)) return true;
  }
  return false;
}

bool ClosedWalkEnumerator::advance(std::size_t position) {
  if (position == k_) return false;
  if (advance(position + 1)) return true;
  for (Vertex v = current_[position] + 1; v < n_; ++v) {
    if (!allowed(position, v)) continue;
    current_[position] = v;
    if (fill(position + 1)) return true;
  }
  return false;
}

bool ClosedWalkEnumerator::next(ClosedWalk& out) {
  if (done_) return false;
  const bool ok = started_ ? advance(0) : fill(0);
  started_ = true;
  if (!ok) {
    done_ = true;
    return false;
  }
  out = current_;
  return true;
}

void for_each_closed_walk(std::size_t n, unsigned k, const std::function<void(const ClosedWalk&)>& fn) {
  ClosedWalkEnumerator walks(n, k);
  ClosedWalk w;
  while (walks.next(w)) fn(w);
}

WalkStatsHistogram count_walks_by_stats(std::size_t n, unsigned k) {
  WalkStatsHistogram hist;
  for_each_closed_walk(n, k, [&](const ClosedWalk& w) {
    const WalkGraphStats s = walk_graph_stats(w);
    ++hist[WalkStatsKey{s.e, s.b, s.g}];
  });
  return hist;
}

double walk_count_bound(std::size_t n, unsigned k, const WalkStatsKey& key) {
  const double vertex_power = static_cast<double>(key.e) + 1.0 - static_cast<double>(key.g);
  const double k_power = 2.0 * (static_cast<double>(k) - static_cast<double>(key.b) + static_cast<double>(key.g));
  return std::pow(static_cast<double>(n), vertex_power) * std::pow(static_cast<double>(k), k_power);
}

std::uint64_t count_rooted_plane_trees(unsigned m) {
  if (m > 20) throw SizeGuardExceeded("count_rooted_plane_trees: m > 20 is too large to enumerate");
  // Contour words: +1 descends to a new child, -1 returns to the parent; height never negative.
  std::uint64_t count = 0;
  auto rec = [&](auto&& self, unsigned down, unsigned up) -> void {
    if (down == m && up == m) {
      ++count;
      return;
    }
    if (down < m) self(self, down + 1, up);
    if (up < down) self(self, down, up + 1);
  };
  rec(rec, 0, 0);
  return count;
}

std::uint64_t dense_tree_walk_count(std::size_t n, unsigned m) {
  if (n < m + 1) return 0;
  std::uint64_t labelings = 1;
  for (unsigned i = 0; i <= m; ++i) labelings *= static_cast<std::uint64_t>(n - i);
  return count_rooted_plane_trees(m) * labelings;
}

TraceOracleReport brute_trace_oracle(std::size_t n, int d, double p, unsigned k, std::size_t trials,
                                     std::uint64_t seed, Regime regime, unsigned threads) {
  if (n < 2) throw InvalidParameter("brute_trace_oracle: n must be >= 2");
  if (k < 1) throw InvalidParameter("brute_trace_oracle: k must be >= 1");
  if (trials < 1) throw InvalidParameter("brute_trace_oracle: trials must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("brute_trace_oracle: p must lie in (0, 1)");
  if (closed_walk_guard_size(n, k) > kEnumerationLimit) {
    throw SizeGuardExceeded("brute_trace_oracle: walk enumeration exceeds the size guard");
  }
  const CapParams cap = calibrate_tau(p, d, 1e-13);

  TraceOracleReport r;
  r.n = n;
  r.d = d;
  r.p = p;
  r.tau = cap.tau;
  r.k = k;
  r.trials = trials;
  r.seed = seed;
  r.regime = regime;
  const double nn = static_cast<double>(n);
  r.normalization = regime == Regime::dense ? std::sqrt(nn * p * (1.0 - p)) : std::sqrt(nn * p);
  const double scale = 1.0 / (nn * std::pow(r.normalization, static_cast<double>(k)));

  // Each walk as k flat indices into the n x n matrix; tree walks first.
  std::vector<std::uint32_t> tree_steps, other_steps;
  const auto edge_moment = [p](std::size_t j) {
    return p * std::pow(1.0 - p, static_cast<double>(j)) + (1.0 - p) * std::pow(-p, static_cast<double>(j));
  };
  double exact_tree_sum = 0.0;
  for_each_closed_walk(n, k, [&](const ClosedWalk& w) {
    ++r.walk_count;
    const WalkClass cls = classify_walk(w, regime);
    auto& steps = is_tree_class(cls) ? tree_steps : other_steps;
    for (unsigned i = 0; i < k; ++i) {
      steps.push_back(static_cast<std::uint32_t>(w[i] * n + w[(i + 1) % k]));
    }
    if (is_tree_class(cls)) {
      ++r.c1_walk_count;
      const WalkGraph wg = build_walk_graph(w);
      double prod = 1.0;
      for (auto m : wg.multiplicity) prod *= edge_moment(m);
      exact_tree_sum += prod;
    }
  });
  r.s1_exact = exact_tree_sum * scale;

  auto walk_sum = [k](const std::vector<std::uint32_t>& steps, const std::vector<double>& q) {
    double sum = 0.0;
    for (std::size_t i = 0; i < steps.size(); i += k) {
      double prod = 1.0;
      for (unsigned j = 0; j < k; ++j) prod *= q[steps[i + j]];
      sum += prod;
    }
    return sum;
  };

  std::vector<double> s1(trials), s2(trials), spectral(trials);
  parallel_for(trials, threads, [&](std::size_t trial) {
    Engine rng = make_engine(seed, trial);
    const Eigen::MatrixXd v = sample_embedded_vectors(n, d, 0, rng);
    const Eigen::MatrixXd gram = v * v.transpose();
    std::vector<double> q(n * n, 0.0);
    Eigen::MatrixXd qm = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double a = gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) >= cap.tau ? 1.0 : 0.0;
        q[i * n + j] = a - p;
        qm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a - p;
      }
    }
    s1[trial] = walk_sum(tree_steps, q) * scale;
    s2[trial] = walk_sum(other_steps, q) * scale;
    const auto eigs = eigenvalues_symmetric(qm);
    double tr = 0.0;
    for (double lambda : eigs) tr += std::pow(lambda / r.normalization, static_cast<double>(k));
    spectral[trial] = tr / nn;
  });

  std::vector<double> total(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    total[t] = s1[t] + s2[t];
    r.max_identity_gap = std::max(r.max_identity_gap, std::abs(total[t] - spectral[t]));
  }
  r.s1 = mean_se(s1);
  r.s2 = mean_se(s2);
  r.total = mean_se(total);
  r.spectral_total = mean_se(spectral);
  return r;
}

TreeMomentEstimate tree_moment_check(const SimpleGraph& tree, int d, double p, std::size_t trials,
                                     std::uint64_t seed, unsigned threads) {
  const std::size_t v = tree.vertex_count();
  std::size_t components = 0;
  connected_components(tree, &components);
  if (v == 0 || components != 1 || tree.edge_count() + 1 != v) {
    throw InvalidParameter("tree_moment_check: input graph is not a tree");
  }
  if (trials < 2) throw InvalidParameter("tree_moment_check: need at least two trials");
  const CapParams cap = calibrate_tau(p, d, 1e-13);

  constexpr std::size_t kChunk = 4096;
  std::vector<double> values(trials);
  parallel_for(chunk_count(trials, kChunk), threads, [&](std::size_t chunk) {
    Engine rng = make_engine(seed, chunk);
    const std::size_t end = std::min(trials, (chunk + 1) * kChunk);
    for (std::size_t t = chunk * kChunk; t < end; ++t) {
      const Eigen::MatrixXd x = sample_embedded_vectors(v, d, 0, rng);
      double prod = 1.0;
      for (const auto& e : tree.edges()) {
        const double a = x.row(e.u).dot(x.row(e.v)) >= cap.tau ? 1.0 : 0.0;
        prod *= (a - p) * (a - p);
      }
      values[t] = prod;
    }
  });
  const MeanSe ms = mean_se(values);
  return TreeMomentEstimate{ms.mean, ms.se, std::pow(p * (1.0 - p), static_cast<double>(tree.edge_count())), trials,
                            cap.tau};
}

}  // namespace rgglab
