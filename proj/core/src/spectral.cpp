#include "rgglab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "rgglab/errors.hpp"
#include "rgglab/random.hpp"
#include "rgglab/stats.hpp"

namespace rgglab {

std::vector<double> eigenvalues_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InvalidParameter("eigenvalues_symmetric: matrix is not square");
  if (m.rows() == 0) return {};
  const double magnitude = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * magnitude) {
    throw InvalidParameter("eigenvalues_symmetric: matrix is not symmetric (max |M - M^T| = " +
                           std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("eigenvalues_symmetric: eigensolver did not converge");
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + m.rows());
  std::sort(out.begin(), out.end());
  return out;
}

double Histogram::density(std::size_t i) const {
  if (total == 0) return 0.0;
  const double width = edges[i + 1] - edges[i];
  return static_cast<double>(counts[i]) / (static_cast<double>(total) * width);
}

Histogram esd_histogram(std::span<const double> eigs, double scale, std::size_t bins, double lo, double hi) {
  if (bins < 1) throw InvalidParameter("esd_histogram: bins must be >= 1");
  if (!(lo < hi)) throw InvalidParameter("esd_histogram: need lo < hi");
  if (!(scale > 0.0)) throw InvalidParameter("esd_histogram: scale must be positive");
  Histogram h;
  h.edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  h.total = eigs.size();
  for (double raw : eigs) {
    const double x = raw / scale;
    if (x < lo) {
      ++h.below;
    } else if (x > hi) {
      ++h.above;
    } else {
      auto bin = static_cast<std::size_t>((x - lo) / width);
      bin = std::min(bin, bins - 1);
      // Floating division can land one bin off at an edge.
      if (bin > 0 && x < h.edges[bin]) --bin;
      if (bin + 1 < bins && x >= h.edges[bin + 1]) ++bin;
      ++h.counts[bin];
    }
  }
  return h;
}

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) + std::asin(x / 2.0) / std::numbers::pi;
}

double ks_distance(std::span<const double> eigs, double scale, const std::function<double(double)>& reference_cdf) {
  if (eigs.empty()) throw InvalidParameter("ks_distance: empty spectrum");
  if (!(scale > 0.0)) throw InvalidParameter("ks_distance: scale must be positive");
  std::vector<double> x(eigs.begin(), eigs.end());
  for (double& v : x) v /= scale;
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < x.size();) {
    std::size_t j = i;
    while (j < x.size() && x[j] == x[i]) ++j;
    const double f = reference_cdf(x[i]);
    sup = std::max({sup, std::abs(static_cast<double>(i) / n - f), std::abs(static_cast<double>(j) / n - f)});
    i = j;
  }
  return sup;
}

double ecdf_sup_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidParameter("ecdf_sup_distance: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double sup = 0.0;
  while (i < x.size() || j < y.size()) {
    double t;
    if (j == y.size() || (i < x.size() && x[i] <= y[j])) {
      t = x[i];
    } else {
      t = y[j];
    }
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    sup = std::max(sup, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return sup;
}

double empirical_moment(std::span<const double> eigs, unsigned k, double scale) {
  if (k == 0) throw InvalidParameter("empirical_moment: k must be >= 1");
  if (eigs.empty()) throw InvalidParameter("empirical_moment: empty spectrum");
  if (!(scale > 0.0)) throw InvalidParameter("empirical_moment: scale must be positive");
  std::vector<double> powers(eigs.size());
  for (std::size_t i = 0; i < eigs.size(); ++i) powers[i] = std::pow(eigs[i] / scale, static_cast<double>(k));
  return pairwise_sum(powers) / static_cast<double>(eigs.size());
}

double empirical_moment(const SpectralSummary& summary, unsigned k, double scale) {
  return empirical_moment(summary.eigenvalues, k, scale);
}

double second_eigenvalue(std::span<const double> eigs) {
  if (eigs.size() < 2) throw InvalidParameter("second_eigenvalue: need at least two eigenvalues");
  std::vector<double> v(eigs.begin(), eigs.end());
  std::sort(v.begin(), v.end(), std::greater<>());
  return std::max(std::abs(v[1]), std::abs(v.back()));
}

SpectralSummary summarize_eigenvalues(std::vector<double> eigenvalues, double scale, unsigned max_moment) {
  std::sort(eigenvalues.begin(), eigenvalues.end());
  SpectralSummary s;
  s.scale = scale;
  s.esd = esd_histogram(eigenvalues, scale);
  for (unsigned k = 1; k <= max_moment; ++k) s.moments[k] = empirical_moment(eigenvalues, k, scale);
  if (eigenvalues.size() >= 2) s.lambda_second = second_eigenvalue(eigenvalues);
  s.eigenvalues = std::move(eigenvalues);
  return s;
}

SpectralSummary summarize_spectrum(const Eigen::MatrixXd& m, double scale, unsigned max_moment) {
  return summarize_eigenvalues(eigenvalues_symmetric(m), scale, max_moment);
}

PowerIterationResult spectral_norm_power(const Eigen::MatrixXd& m, std::uint64_t seed, double rel_tol,
                                         std::size_t max_iterations) {
  if (m.rows() != m.cols() || m.rows() == 0) throw InvalidParameter("spectral_norm_power: need a nonempty square matrix");
  Engine rng = make_engine(seed, 0);
  std::normal_distribution<double> normal;
  Eigen::VectorXd x(m.rows());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
  x.normalize();
  PowerIterationResult r;
  double previous = 0.0;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    Eigen::VectorXd y = m * (m * x);
    const double norm_sq = y.norm();
    r.iterations = it;
    if (norm_sq == 0.0) {
      r.norm = 0.0;
      r.converged = true;
      return r;
    }
    x = y / norm_sq;
    r.norm = std::sqrt(norm_sq);
    if (it > 1 && std::abs(r.norm - previous) <= rel_tol * r.norm) {
      r.converged = true;
      break;
    }
    previous = r.norm;
  }
  return r;
}

}  // namespace rgglab
