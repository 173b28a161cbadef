// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed below.
// Exit status is the number of failed criteria (0 when all pass). With --expect-fail a,b,... the
// status is 0 exactly when the failed set equals the listed one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rgglab/decomp.hpp"
#include "rgglab/graph_io.hpp"
#include "rgglab/lab.hpp"
#include "rgglab/spectral.hpp"
#include "rgglab/sphere.hpp"
#include "rgglab/walks.hpp"

using namespace rgglab;
using Rational = boost::multiprecision::cpp_rational;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

unsigned threads() { return default_thread_count(); }

// 1. d = 3 cap is (1 - tau) / 2, so tau = 1 - 2p.
Outcome tau_closed_form() {
  double worst = 0.0;
  for (double p : {0.01, 0.1, 0.25, 0.5}) worst = std::max(worst, std::abs(calibrate_tau(p, 3, 1e-10).tau - (1 - 2 * p)));
  return {worst <= 1e-9, fmt("max |tau - (1 - 2p)| = %.2e (limit 1e-9)", worst)};
}

// 2. Two-sided tau bound.
Outcome tau_bound() {
  double lo = 1e9, hi = -1e9;
  for (double p : {1e-4, 0.01, 0.1, 0.4}) {
    for (int d : {10, 100, 1000}) {
      const double r = calibrate_tau(p, d).tau * std::sqrt(d / std::log(1 / p));
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  return {lo >= 0.0 && hi <= 2.0, fmt("tau sqrt(d / log(1/p)) in [%.4f, %.4f] (limit [0, 2])", lo, hi)};
}

ExperimentConfig lsd_config(Generator g, int d, std::size_t trials) {
  ExperimentConfig c;
  c.experiment = Experiment::lsd;
  c.generator = g;
  c.n = 2500;
  c.d = d;
  c.trials = trials;
  c.seed = kSeed;
  c.threads = threads();
  return c;
}

// 3. One sample each of G(2500, 300, 0.01) and G(2500, 0.01): KS of A / sqrt(np(1-p)) to the
// semicircle <= 0.05; moments 2, 4, 6 of the centered Q / sqrt(np(1-p)) within 10% of (1, 2, 5).
Outcome semicircle_dense() {
  std::string detail;
  bool ok = true;
  for (Generator g : {Generator::geometric, Generator::erdos_renyi}) {
    ExperimentConfig c = lsd_config(g, 300, 1);
    c.p = 0.01;
    const RunReport r = run_experiment(c);
    const double ks = r.aggregates.at("ks_A").value;
    const double m2 = r.aggregates.at("moment_Q_2").value;
    const double m4 = r.aggregates.at("moment_Q_4").value;
    const double m6 = r.aggregates.at("moment_Q_6").value;
    const bool pass = ks <= 0.05 && std::abs(m2 - 1) <= 0.1 && std::abs(m4 - 2) <= 0.2 && std::abs(m6 - 5) <= 0.5;
    ok = ok && pass;
    detail += fmt("%s: KS %.4f, Q moments %.3f %.3f %.3f (raw A m6 %.2f); ",
                  g == Generator::geometric ? "geometric" : "ER", ks, m2, m4, m6, r.aggregates.at("moment_A_6").value);
  }
  return {ok, detail + "limits KS <= 0.05, moments within 10% of 1, 2, 5"};
}

// 4. 20 trials of G(2500, 100, 2.23/2500): trial-averaged moments of A / sqrt(alpha) within 3 SE
// of sum_l C_l alpha^{l-m}.
Outcome sparse_moments() {
  ExperimentConfig c = lsd_config(Generator::geometric, 100, 20);
  c.alpha = 2.23;
  c.regime = Regime::sparse;
  const RunReport r = run_experiment(c);
  bool ok = true;
  std::string detail;
  for (unsigned k : {2u, 4u, 6u}) {
    const Aggregate& a = r.aggregates.at("moment_A_" + std::to_string(k));
    const double ref = nu_alpha_moment(k, 2.23).value;
    const double z = (a.value - ref) / a.se;
    ok = ok && std::abs(z) <= 3.0;
    detail += fmt("k=%u: %.4f +- %.4f vs %.4f (%.1f SE, tree-walk count %.4f); ", k, a.value, a.se, ref, z,
                  sparse_tree_walk_moment(k, 2.23));
  }
  return {ok, detail + "limit 3 SE"};
}

// 5. E prod_{e in T} Q_e^2 = [p(1-p)]^{|E|}.
Outcome tree_moments() {
  const std::vector<std::pair<const char*, SimpleGraph>> trees{
      {"edge", SimpleGraph(2, {{0, 1}})},
      {"path3", SimpleGraph(4, {{0, 1}, {1, 2}, {2, 3}})},
      {"star4", SimpleGraph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}})},
  };
  bool ok = true;
  std::string detail;
  std::uint64_t seed = kSeed;
  for (const auto& [name, tree] : trees) {
    const TreeMomentEstimate e = tree_moment_check(tree, 100, 0.05, 1000000, seed++, threads());
    const double z = (e.mean - e.expected) / e.se;
    ok = ok && std::abs(z) <= 3.0;
    detail += fmt("%s %.4e vs %.4e (%.2f SE); ", name, e.mean, e.expected, z);
  }
  return {ok, detail + "limit 3 SE"};
}

// 6. (a - p)^k = alpha_k (a - p) + beta_k exactly, with alpha_k in [0, 1] and |beta_k| <= 2p(1-p).
Outcome multiplicity() {
  std::size_t checks = 0;
  bool ok = true;
  for (Rational p : {Rational(1, 10000), Rational(1, 1000), Rational(1, 100), Rational(1, 20), Rational(1, 10),
                     Rational(1, 4), Rational(1, 3), Rational(2, 5), Rational(1, 2)}) {
    for (unsigned k = 1; k <= 20; ++k) {
      const auto c = multiplicity_reduce<Rational>(k, p);
      for (int a : {0, 1}) {
        const Rational q = Rational(a) - p;
        ok = ok && integer_power<Rational>(q, k) == c.alpha * q + c.beta;
        ++checks;
      }
      ok = ok && c.alpha >= 0 && c.alpha <= 1 && abs(c.beta) <= 2 * p * (1 - p);
    }
  }
  return {ok, fmt("%zu exact identities over k <= 20, p in (0, 1/2] with range checks", checks)};
}

// 7. Every connected labelled graph on at most 7 vertices.
Outcome decompositions() {
  std::size_t graphs = 0, two_ec = 0;
  std::string failure;
  for (std::size_t n = 1; n <= 7 && failure.empty(); ++n) {
    std::vector<Edge> pairs;
    for (Vertex a = 0; a < n; ++a) {
      for (Vertex b = a + 1; b < n; ++b) pairs.push_back({a, b});
    }
    // Bitmask oracle: vertices reachable from 0 using the edges in `mask`.
    auto reach = [&](std::uint32_t mask) {
      std::uint32_t seen = 1, frontier = 1;
      while (frontier) {
        std::uint32_t next = 0;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
          if (!(mask >> i & 1u)) continue;
          const std::uint32_t a = 1u << pairs[i].u, b = 1u << pairs[i].v;
          if (frontier & a) next |= b;
          if (frontier & b) next |= a;
        }
        frontier = next & ~seen;
        seen |= next;
      }
      return seen;
    };
    const std::uint32_t all = (1u << n) - 1;
    for (std::uint32_t mask = 0; mask < (1u << pairs.size()) && failure.empty(); ++mask) {
      if (reach(mask) != all) continue;
      ++graphs;
      std::vector<Edge> edges;
      std::vector<std::size_t> bit_of;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (mask >> i & 1u) {
          edges.push_back(pairs[i]);
          bit_of.push_back(i);
        }
      }
      const SimpleGraph g(n, edges);
      const BlockCutTree t = block_cut_tree(g);
      bool any_bridge = false;
      for (std::size_t id = 0; id < edges.size(); ++id) {
        const bool oracle = reach(mask & ~(1u << bit_of[id])) != all;
        any_bridge = any_bridge || oracle;
        if (t.is_bridge[id] != oracle) failure = fmt("bridge mismatch n=%zu mask=%u", n, mask);
      }
      std::vector<int> owner(edges.size(), 0);
      for (const auto& piece : t.two_edge_connected_components) {
        for (auto id : piece.edges) owner[id] += t.is_bridge[id] ? 100 : 1;
      }
      for (const auto& piece : t.bridge_components) {
        for (auto id : piece.edges) owner[id] += t.is_bridge[id] ? 1 : 100;
      }
      for (int o : owner) {
        if (o != 1) failure = fmt("edge partition broken n=%zu mask=%u", n, mask);
      }
      if (!any_bridge && !edges.empty()) {
        ++two_ec;
        const EarDecomposition d = ear_decomposition(g, 0);
        if (d.ears.size() != edges.size() - n + 1) failure = fmt("ear count n=%zu mask=%u", n, mask);
        const EarValidation v = validate_ears(g, d);
        if (!v.valid) failure = fmt("invalid ears n=%zu mask=%u: %s", n, mask, v.violation.c_str());
      }
    }
  }
  const std::string fixtures = RGGLAB_FIXTURES;
  const SimpleGraph four_ears(read_edge_list_file(fixtures + "/four_ears.edges"));
  const SimpleGraph two_junctions(read_edge_list_file(fixtures + "/two_junctions.edges"));
  const EarDecomposition listed{0, {{{0, 1, 2, 3, 0}}, {{1, 4, 5, 6, 3}}, {{3, 10, 6}}, {{4, 7, 8, 9, 6}}}};
  const bool four_ears_ok = ear_decomposition(four_ears, 0).ears.size() == 4 && validate_ears(four_ears, listed).valid;
  const bool two_junctions_ok = block_cut_tree(two_junctions).junctions == std::vector<Vertex>{1, 7};
  if (!four_ears_ok) failure += " four-ear fixture failed;";
  if (!two_junctions_ok) failure += " junction fixture failed;";
  return {failure.empty(), fmt("%zu connected graphs, %zu two-edge-connected; fixtures %s %s", graphs, two_ec,
                               four_ears_ok ? "ok" : "FAIL", two_junctions_ok ? "ok" : "FAIL") +
                               (failure.empty() ? "" : "; " + failure)};
}

// 8. Bucket counts of closed walks by (e, b, g) against n^{e+1-g} k^{2(k-b+g)}.
Outcome counting_bound() {
  double worst = 0.0;
  std::size_t buckets = 0;
  for (auto [n, k] : {std::pair<std::size_t, unsigned>{5, 6}, {4, 8}}) {
    for (const auto& [key, count] : count_walks_by_stats(n, k)) {
      worst = std::max(worst, static_cast<double>(count) / walk_count_bound(n, k, key));
      ++buckets;
    }
  }
  return {worst <= 1.0, fmt("%zu buckets, max count / bound = %.3e (limit 1)", buckets, worst)};
}

// 9. Walk expansion vs spectral trace, and tree part vs its exact finite-n value.
Outcome trace_oracle() {
  const TraceOracleReport r = brute_trace_oracle(8, 500, 0.2, 4, 10000, kSeed, Regime::dense, threads());
  const double gap = std::abs(r.total.mean - r.spectral_total.mean);
  const double z1 = (r.s1.mean - r.s1_exact) / r.s1.se;
  const bool ok = gap <= 4 * r.spectral_total.se && std::abs(z1) <= 4.0;
  return {ok, fmt("total %.6f vs spectral %.6f (gap %.1e, 4 SE = %.1e); S1 %.5f vs exact %.5f (%.2f SE)", r.total.mean,
                  r.spectral_total.mean, gap, 4 * r.spectral_total.se, r.s1.mean, r.s1_exact, z1)};
}

// 10. Triangle closing and its decay with d.
Outcome triangles() {
  const CycleEstimate a = estimate_cycle_probability(200, 0.05, 3, 10000000, kSeed, threads());
  const CycleEstimate b = estimate_cycle_probability(800, 0.05, 3, 10000000, kSeed + 1, threads());
  const double z = (a.estimate - a.reference) / a.se;
  const double ea = std::abs(a.estimate - a.reference), eb = std::abs(b.estimate - b.reference);
  return {z >= 3.0 && eb < ea, fmt("d=200: %.4e vs p^3 %.4e (%.1f SE); |excess| d=800 %.3e < d=200 %.3e", a.estimate,
                                   a.reference, z, eb, ea)};
}

// 11. lambda(A) / sqrt(np) and the log-log slope over n in {500, 1000, 2000, 4000}, d = 2np.
Outcome second_eigenvalue_sweep() {
  ExperimentConfig c;
  c.experiment = Experiment::second_eig_sweep;
  c.sweep_n = {500, 1000, 2000, 4000};
  c.p = 0.02;
  c.d_per_np = 2.0;
  c.seed = kSeed;
  c.threads = threads();
  const RunReport r = run_experiment(c);
  std::string ratios;
  bool ok = true;
  for (const auto& row : r.per_trial) {
    const double ratio = row.at("ratio").get<double>();
    ok = ok && ratio >= 1.5 && ratio <= 4.0;
    ratios += fmt("%.2f ", ratio);
  }
  const double slope = r.aggregates.at("loglog_slope").value;
  ok = ok && slope >= 0.4 && slope <= 0.6;
  return {ok, "lambda/sqrt(np) = " + ratios + fmt("(limit [1.5, 4]); slope %.3f (limit [0.4, 0.6])", slope)};
}

// 12. Rank-one update moves the empirical spectral CDF by at most 1/n.
Outcome rank_inequality() {
  const std::size_t n = 500;
  const double p = 0.05;
  const Adjacency a = geometric_graph(sample_unit_vectors(n, 100, kSeed), calibrate_tau(p, 100), threads());
  const Eigen::MatrixXd dense = a.dense();
  const auto ea = eigenvalues_symmetric(dense);
  const auto eb = eigenvalues_symmetric(dense - p * Eigen::MatrixXd::Ones(n, n));
  const double sup = ecdf_sup_distance(ea, eb);
  return {sup <= 1.0 / n + 1e-6, fmt("sup |F_A - F_(A-pJ)| = %.6f (limit %.6f)", sup, 1.0 / n + 1e-6)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) != "--expect-fail") continue;
    std::stringstream list(argv[i + 1]);
    for (std::string item; std::getline(list, item, ',');) expected.insert(std::stoi(item));
  }

  struct Criterion {
    int id;
    const char* name;
    double time_limit;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "tau calibration, d=3 closed form", 1, tau_closed_form},
      {2, "two-sided tau bound", 5, tau_bound},
      {3, "semicircle at n=2500 (geometric and ER)", 300, semicircle_dense},
      {4, "sparse moments vs nu_alpha, n=2500, alpha=2.23", 600, sparse_moments},
      {5, "tree moment identity", 60, tree_moments},
      {6, "multiplicity reduction", 1, multiplicity},
      {7, "bridges, block-cut tree and ears on all graphs <= 7 vertices", 120, decompositions},
      {8, "closed-walk counting bound", 120, counting_bound},
      {9, "trace-oracle consistency", 300, trace_oracle},
      {10, "triangle probability", 300, triangles},
      {11, "second-eigenvalue sweep", 900, second_eigenvalue_sweep},
      {12, "rank inequality", 30, rank_inequality},
  };
  int failed = 0;
  std::set<int> failed_ids;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.time_limit;
    const bool pass = o.passed && in_time;
    failed += pass ? 0 : 1;
    if (!pass) failed_ids.insert(c.id);
    std::printf("%s %2d %s: %s; %.1f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                seconds, c.time_limit, in_time ? "" : " TOO SLOW");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  if (!expected.empty()) {
    const bool match = failed_ids == expected;
    std::printf("expected failures %s\n", match ? "match" : "do not match");
    return match ? 0 : 1;
  }
  return failed;
}
