#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace rgglab {

/// All eigenvalues of a dense symmetric matrix, ascending.
/// Throws InvalidParameter when |M - M^T| exceeds 1e-12 (relative to the largest entry).
std::vector<double> eigenvalues_symmetric(const Eigen::MatrixXd& m);

struct Histogram {
  std::vector<double> edges;          ///< bins + 1 edges
  std::vector<std::size_t> counts;
  std::size_t below = 0;              ///< values < edges.front()
  std::size_t above = 0;              ///< values > edges.back()
  std::size_t total = 0;              ///< all values, including out-of-range ones

  std::size_t bins() const noexcept { return counts.size(); }
  /// counts[i] / (total * width): integrates to the in-range fraction.
  double density(std::size_t i) const;
};

/// Histogram of eigs / scale with `bins` equal bins on [lo, hi]; the last bin is closed.
Histogram esd_histogram(std::span<const double> eigs, double scale, std::size_t bins = 61, double lo = -3.0,
                        double hi = 3.0);

double semicircle_cdf(double x);

/// sup_x |F_n(x) - F(x)| for the empirical CDF of eigs / scale, using both one-sided limits
/// at every sample point.
double ks_distance(std::span<const double> eigs, double scale, const std::function<double(double)>& reference_cdf);

/// sup_x |F_a(x) - F_b(x)| between two empirical CDFs.
double ecdf_sup_distance(std::span<const double> a, std::span<const double> b);

struct SpectralSummary {
  std::vector<double> eigenvalues;    ///< ascending
  double scale = 1.0;                 ///< histogram and moments refer to eigenvalues / scale
  Histogram esd;
  std::map<unsigned, double> moments;
  double lambda_second = 0.0;         ///< unscaled
};

/// Eigenvalues, ESD histogram and the moments 1..max_moment on the given scale.
SpectralSummary summarize_spectrum(const Eigen::MatrixXd& m, double scale, unsigned max_moment = 6);
SpectralSummary summarize_eigenvalues(std::vector<double> eigenvalues, double scale, unsigned max_moment = 6);

/// (1/n) sum (lambda_i / scale)^k. Throws InvalidParameter for k = 0 or an empty spectrum.
double empirical_moment(std::span<const double> eigs, unsigned k, double scale);
double empirical_moment(const SpectralSummary& summary, unsigned k, double scale);

/// max(|lambda_2|, |lambda_n|) with lambda_1 >= ... >= lambda_n; input order is irrelevant.
/// Throws InvalidParameter for fewer than two values.
double second_eigenvalue(std::span<const double> eigs);

struct PowerIterationResult {
  double norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Operator norm of a symmetric matrix by power iteration on M^2.
PowerIterationResult spectral_norm_power(const Eigen::MatrixXd& m, std::uint64_t seed, double rel_tol = 1e-10,
                                         std::size_t max_iterations = 5000);

}  // namespace rgglab
