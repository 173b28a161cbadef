#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rgglab/decomp.hpp"
#include "rgglab/stats.hpp"

namespace rgglab {

/// Vertex sequence (i_1, ..., i_k); consecutive entries distinct and i_k != i_1. k = size().
using ClosedWalk = std::vector<Vertex>;

/// Dense regime: C1 = tree with every edge traversed exactly twice.
/// Sparse regime: C1 = tree, any multiplicities.
enum class Regime { dense, sparse };
enum class WalkClass { C1_dense, C2_dense, C1_sparse, C2_sparse };

std::string_view to_string(Regime r);
std::string_view to_string(WalkClass c);
bool is_tree_class(WalkClass c);

/// binom(2m, m) / (m + 1) in exact integer arithmetic; throws InvalidParameter for m > 30.
std::uint64_t catalan(unsigned m);

enum class MomentLaw { semicircle, nu_alpha };

struct MomentValue {
  unsigned k = 0;
  double value = 0.0;
  MomentLaw law = MomentLaw::semicircle;
  double alpha = 0.0;  ///< only meaningful for nu_alpha
};

/// 0 for odd k, catalan(k/2) for even k.
MomentValue semicircle_moment(unsigned k);

/// 0 for odd k; for k = 2m, sum_{l=1}^{m} C_l alpha^{l-m}.
MomentValue nu_alpha_moment(unsigned k, double alpha);

/// Limit of (1/n) E tr (A / sqrt(alpha))^k for p = alpha/n obtained by counting tree walks
/// directly: sum over canonically labelled closed walks whose graph is a tree with l edges of
/// alpha^{l-m}. Agrees with nu_alpha_moment for k <= 4 and exceeds it from k = 6 on.
double sparse_tree_walk_moment(unsigned k, double alpha);

/// Coefficients with (a - p)^k = alpha_k (a - p) + beta_k for a in {0, 1}.
template <class Real>
struct MultiplicityCoefficients {
  Real alpha;
  Real beta;
};

template <class Real>
Real integer_power(Real base, unsigned k) {
  Real out(1);
  for (unsigned i = 0; i < k; ++i) out *= base;
  return out;
}

/// alpha_k = (1-p)^k - (-p)^k, beta_k = p (1-p)^k + (1-p)(-p)^k. Generic so tests can run it
/// in exact rational arithmetic.
template <class Real>
MultiplicityCoefficients<Real> multiplicity_reduce(unsigned k, const Real& p) {
  const Real one(1);
  const Real up = integer_power<Real>(one - p, k);
  const Real down = integer_power<Real>(Real(-p), k);
  return {up - down, p * up + (one - p) * down};
}

/// Tree/multiplicity classification of the walk's underlying graph.
WalkClass classify_walk(std::span<const Vertex> walk, Regime regime);

/// Upper bound n (n-1)^{k-1} on the number of closed walks, used as the enumeration guard.
double closed_walk_guard_size(std::size_t n, unsigned k);
inline constexpr double kEnumerationLimit = 1e8;

/// Lexicographic stream of all closed walks of length k on n vertices.
/// Throws SizeGuardExceeded when n (n-1)^{k-1} > 1e8.
class ClosedWalkEnumerator {
 public:
  ClosedWalkEnumerator(std::size_t n, unsigned k);

  /// Writes the next walk into `out`; returns false once exhausted.
  bool next(ClosedWalk& out);

 private:
  bool fill(std::size_t position);
  bool advance(std::size_t position);
  bool allowed(std::size_t position, Vertex value) const;

  std::size_t n_;
  unsigned k_;
  ClosedWalk current_;
  bool started_ = false;
  bool done_ = false;
};

void for_each_closed_walk(std::size_t n, unsigned k, const std::function<void(const ClosedWalk&)>& fn);

/// Histogram key of the (e, b, g) walk-graph statistics.
struct WalkStatsKey {
  std::size_t e = 0;
  std::size_t b = 0;
  std::size_t g = 0;
  auto operator<=>(const WalkStatsKey&) const = default;
};

using WalkStatsHistogram = std::map<WalkStatsKey, std::uint64_t>;

/// Exact count of closed walks of length k on n vertices by (e, b, g).
WalkStatsHistogram count_walks_by_stats(std::size_t n, unsigned k);

/// n^{e+1-g} k^{2(k-b+g)}.
double walk_count_bound(std::size_t n, unsigned k, const WalkStatsKey& key);

/// Number of rooted plane trees with m edges, by enumerating their depth-first contour words.
std::uint64_t count_rooted_plane_trees(unsigned m);

/// Closed walks of length 2m on n labelled vertices whose graph is a tree with every edge
/// traversed twice: (rooted plane trees with m edges) x n (n-1) ... (n-m).
std::uint64_t dense_tree_walk_count(std::size_t n, unsigned m);

struct TraceOracleReport {
  std::size_t n = 0;
  int d = 0;
  double p = 0.0;
  double tau = 0.0;
  unsigned k = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  Regime regime = Regime::dense;
  double normalization = 0.0;       ///< scale s with Q/s: sqrt(np(1-p)) dense, sqrt(np) sparse
  std::uint64_t walk_count = 0;
  std::uint64_t c1_walk_count = 0;
  MeanSe s1;                        ///< tree-walk part of the normalized trace
  MeanSe s2;                        ///< everything else
  MeanSe total;                     ///< s1 + s2 per trial
  MeanSe spectral_total;            ///< (1/n) tr (Q/s)^k from eigenvalues
  double max_identity_gap = 0.0;    ///< max over trials |total - spectral_total|
  double s1_exact = 0.0;            ///< exact E[S1] from the C1 walks and E Q^j = p(1-p)^j + (1-p)(-p)^j
};

/// Monte Carlo over `trials` independent latent samples of the walk expansion of
/// (1/n) E tr (Q/s)^k, split into tree (C1) and non-tree (C2) walks.
TraceOracleReport brute_trace_oracle(std::size_t n, int d, double p, unsigned k, std::size_t trials,
                                     std::uint64_t seed, Regime regime = Regime::dense, unsigned threads = 1);

struct TreeMomentEstimate {
  double mean = 0.0;
  double se = 0.0;
  double expected = 0.0;  ///< [p(1-p)]^{|E|}
  std::size_t trials = 0;
  double tau = 0.0;
};

/// Monte Carlo estimate of E prod_{e in T} Q_e^2 for a tree T in G(., d, p).
/// Throws InvalidParameter if `tree` is not a tree.
TreeMomentEstimate tree_moment_check(const SimpleGraph& tree, int d, double p, std::size_t trials,
                                     std::uint64_t seed, unsigned threads = 1);

}  // namespace rgglab
