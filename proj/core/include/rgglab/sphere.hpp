#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rgglab/random.hpp"

namespace rgglab {

/// n latent positions on the unit sphere S^{d-1}, one per row of an n x d matrix.
class UnitVectorSet {
 public:
  /// Takes ownership of `rows`; every row must already have unit norm (1e-12 relative).
  explicit UnitVectorSet(Eigen::MatrixXd rows);

  std::size_t n() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  int d() const noexcept { return static_cast<int>(data_.cols()); }
  const Eigen::MatrixXd& data() const noexcept { return data_; }
  Eigen::VectorXd row(std::size_t i) const { return data_.row(static_cast<Eigen::Index>(i)).transpose(); }

 private:
  Eigen::MatrixXd data_;
};

/// Threshold tau paired with the cap measure p it was calibrated to in dimension d.
struct CapParams {
  double tau = 0.0;
  double p = 0.5;
  int d = 2;
  double calibration_error = 0.0;  ///< |cap_probability(tau, d) - p| at return
};

/// n i.i.d. uniform points on S^{d-1}. Row i normalizes d standard normals drawn from
/// the stream derive_seed(seed, i), so the result does not depend on batching.
UnitVectorSet sample_unit_vectors(std::size_t n, int d, std::uint64_t seed);

/// P(<u, v> >= tau) for independent uniform u, v on S^{d-1}.
///
/// Computed as the normalized integral of sin^{d-2}(theta) over [0, arccos tau] with
/// adaptive Gauss-Legendre quadrature; the Beta normalizer is handled in log space so
/// large d does not underflow. Absolute accuracy ~1e-13, relative accuracy for tiny caps.
double cap_probability(double tau, int d);

/// Bisection on the monotone map tau -> cap_probability(tau, d) until both the bracket
/// width and |cap - p| are <= tol. Throws CalibrationFailure with the last bracket when
/// the iteration cap is hit.
CapParams calibrate_tau(double p, int d, double tol = 1e-12);

/// Draws from the uniform distribution on the cap {y : <x, y> >= tau}.
///
/// The polar angle theta = arccos <x, y> has density proportional to sin^{d-2}(theta)
/// on [0, arccos tau]. It is drawn exactly: a cell of a fine theta-grid is chosen with its
/// exact mass, then theta is accepted or rejected inside the cell against the cell maximum.
/// The remaining direction is uniform on the sphere orthogonal to x.
class CapSampler {
 public:
  explicit CapSampler(const CapParams& cap);

  const CapParams& cap() const noexcept { return cap_; }

  /// Inner product <x, y> of a cap draw around any fixed x.
  double sample_inner_product(Engine& rng) const;

  /// Full cap draw around unit vector x (x.size() must equal cap.d).
  Eigen::VectorXd sample(const Eigen::VectorXd& x, Engine& rng) const;

 private:
  double sample_angle(Engine& rng) const;
  double log_density(double theta) const;

  CapParams cap_;
  double theta_max_;
  std::vector<double> cell_edges_;
  std::vector<double> cumulative_mass_;
  std::vector<double> cell_log_max_;
};

/// One cap draw around x with a fresh sampler seeded from `seed`.
Eigen::VectorXd sample_cap(const Eigen::VectorXd& x, const CapParams& cap, std::uint64_t seed);

/// k vectors whose inner products with each other and with the coordinate vectors
/// e_1..e_pinned have exactly the joint law of k i.i.d. uniform points on S^{d-1}.
///
/// When pinned + k < d the vectors live in R^{pinned + k}: the pinned coordinates are plain
/// normals and the rest is the Bartlett factor of a Wishart(d - pinned, I_k) matrix, so a
/// tuple costs O(k^2) instead of O(k d). Otherwise the vectors are sampled in R^d directly.
Eigen::MatrixXd sample_embedded_vectors(std::size_t k, int d, std::size_t pinned, Engine& rng);

}  // namespace rgglab
