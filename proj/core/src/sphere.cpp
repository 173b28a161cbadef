#include "rgglab/sphere.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "rgglab/errors.hpp"

namespace rgglab {
namespace {

constexpr int kGaussOrder = 15;

struct GaussLegendre {
  std::array<double, kGaussOrder> nodes{};
  std::array<double, kGaussOrder> weights{};
};

// Nodes and weights on [-1, 1] by Newton iteration on P_n.
GaussLegendre make_gauss_legendre() {
  GaussLegendre rule;
  const int n = kGaussOrder;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule = make_gauss_legendre();
  return rule;
}

template <class F>
double gauss_on(F&& f, double a, double b) {
  const auto& rule = gauss_legendre();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (int i = 0; i < kGaussOrder; ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return s * half;
}

template <class F>
double adaptive_gauss(F&& f, double a, double b, double whole, double abs_tol, double rel_tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = gauss_on(f, a, m);
  const double right = gauss_on(f, m, b);
  const double refined = left + right;
  if (depth <= 0 || std::abs(refined - whole) <= std::max(abs_tol, rel_tol * std::abs(refined))) {
    return refined;
  }
  const double half_tol = std::max(0.5 * abs_tol, 1e-300);
  return adaptive_gauss(f, a, m, left, half_tol, rel_tol, depth - 1) +
         adaptive_gauss(f, m, b, right, half_tol, rel_tol, depth - 1);
}

// log of the integral of sin^{d-2} over [0, pi] = log B(1/2, (d-1)/2).
double log_sphere_normalizer(int d) {
  return 0.5 * std::log(std::numbers::pi) + std::lgamma(0.5 * (d - 1)) - std::lgamma(0.5 * d);
}

// Mass of the polar angle on [a, b] (0 <= a <= b <= pi), normalized.
double angle_mass(double a, double b, int d, double log_norm) {
  if (b <= a) return 0.0;
  if (d == 2) return (b - a) / std::numbers::pi;
  const double power = d - 2.0;
  auto density = [power, log_norm](double theta) {
    const double s = std::sin(theta);
    return s > 0.0 ? std::exp(power * std::log(s) - log_norm) : 0.0;
  };
  // exp((d-2) log sin) carries relative rounding noise of order d * eps; asking for less
  // would keep the recursion splitting forever.
  const double rel_tol = std::max(1e-14, 8.0 * power * std::numeric_limits<double>::epsilon());
  const double whole = gauss_on(density, a, b);
  return adaptive_gauss(density, a, b, whole, 1e-16, rel_tol, 30);
}

void require_dimension(int d) {
  if (d < 2) throw InvalidParameter("dimension d must be >= 2, got " + std::to_string(d));
}

}  // namespace

UnitVectorSet::UnitVectorSet(Eigen::MatrixXd rows) : data_(std::move(rows)) {
  if (data_.rows() < 1) throw InvalidParameter("UnitVectorSet needs at least one vector");
  require_dimension(static_cast<int>(data_.cols()));
  for (Eigen::Index i = 0; i < data_.rows(); ++i) {
    const double norm = data_.row(i).norm();
    if (!(std::abs(norm - 1.0) <= 1e-12)) {
      std::ostringstream msg;
      msg << "row " << i << " has norm " << norm << ", expected 1";
      throw InvalidParameter(msg.str());
    }
  }
}

UnitVectorSet sample_unit_vectors(std::size_t n, int d, std::uint64_t seed) {
  if (n == 0) throw InvalidParameter("sample_unit_vectors: n must be >= 1");
  require_dimension(d);
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(n), d);
  std::normal_distribution<double> normal;
  for (std::size_t i = 0; i < n; ++i) {
    Engine rng = make_engine(seed, i);
    const auto r = static_cast<Eigen::Index>(i);
    for (int j = 0; j < d; ++j) rows(r, j) = normal(rng);
    const double norm = rows.row(r).norm();
    rows.row(r) /= norm;
  }
  return UnitVectorSet(std::move(rows));
}

double cap_probability(double tau, int d) {
  require_dimension(d);
  if (!(tau >= -1.0 && tau <= 1.0)) {
    throw InvalidParameter("cap_probability: |tau| must be <= 1");
  }
  if (tau < 0.0) return 1.0 - cap_probability(-tau, d);
  if (tau == 1.0) return 0.0;
  const double theta = std::acos(tau);
  return std::clamp(angle_mass(0.0, theta, d, log_sphere_normalizer(d)), 0.0, 1.0);
}

CapParams calibrate_tau(double p, int d, double tol) {
  require_dimension(d);
  if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("calibrate_tau: p must lie in (0, 1)");
  if (!(tol > 0.0)) throw InvalidParameter("calibrate_tau: tol must be positive");

  constexpr int kMaxIterations = 200;
  // cap(0) = 1/2, so the sign of tau is known up front; p = 1/2 gives tau = 0 exactly.
  double lo = p <= 0.5 ? 0.0 : -1.0;
  double hi = p >= 0.5 ? 0.0 : 1.0;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double value = cap_probability(mid, d);
    const double err = std::abs(value - p);
    if (err <= tol && hi - lo <= tol) {
      return CapParams{mid, p, d, err};
    }
    if (value > p) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon()) break;
  }
  std::ostringstream msg;
  msg << "calibrate_tau(p=" << p << ", d=" << d << ", tol=" << tol
      << ") did not converge; last bracket [" << lo << ", " << hi << "]";
  throw CalibrationFailure(msg.str(), lo, hi);
}

CapSampler::CapSampler(const CapParams& cap) : cap_(cap), theta_max_(0.0) {
  require_dimension(cap.d);
  if (!(cap.tau >= -1.0 && cap.tau < 1.0)) {
    throw InvalidParameter("CapSampler: tau must lie in [-1, 1)");
  }
  theta_max_ = std::acos(cap.tau);
  const std::size_t cells = std::max<std::size_t>(1024, 2 * static_cast<std::size_t>(cap.d));
  const double log_norm = log_sphere_normalizer(cap.d);
  cell_edges_.resize(cells + 1);
  cumulative_mass_.resize(cells + 1);
  cell_log_max_.resize(cells);
  cumulative_mass_[0] = 0.0;
  for (std::size_t i = 0; i <= cells; ++i) {
    cell_edges_[i] = theta_max_ * static_cast<double>(i) / static_cast<double>(cells);
  }
  cell_edges_[cells] = theta_max_;
  for (std::size_t i = 0; i < cells; ++i) {
    const double a = cell_edges_[i], b = cell_edges_[i + 1];
    cumulative_mass_[i + 1] = cumulative_mass_[i] + angle_mass(a, b, cap.d, log_norm);
    double m = std::max(log_density(a), log_density(b));
    if (a < std::numbers::pi / 2 && b > std::numbers::pi / 2) m = std::max(m, log_density(std::numbers::pi / 2));
    cell_log_max_[i] = m;
  }
}

double CapSampler::log_density(double theta) const {
  if (cap_.d == 2) return 0.0;
  const double s = std::sin(theta);
  return s > 0.0 ? (cap_.d - 2.0) * std::log(s) : -std::numeric_limits<double>::infinity();
}

double CapSampler::sample_angle(Engine& rng) const {
  const double total = cumulative_mass_.back();
  for (;;) {
    const double u = uniform01(rng) * total;
    auto it = std::upper_bound(cumulative_mass_.begin(), cumulative_mass_.end(), u);
    std::size_t cell = static_cast<std::size_t>(std::distance(cumulative_mass_.begin(), it));
    cell = std::clamp<std::size_t>(cell, 1, cell_log_max_.size()) - 1;
    const double a = cell_edges_[cell], b = cell_edges_[cell + 1];
    if (!(cumulative_mass_[cell + 1] > cumulative_mass_[cell])) continue;
    // Rejection inside the cell keeps the draw exact.
    for (int attempt = 0; attempt < 64; ++attempt) {
      const double theta = a + (b - a) * uniform01(rng);
      const double accept = uniform01(rng);
      if (accept > 0.0 && std::log(accept) <= log_density(theta) - cell_log_max_[cell]) return theta;
    }
  }
}

double CapSampler::sample_inner_product(Engine& rng) const { return std::cos(sample_angle(rng)); }

Eigen::VectorXd CapSampler::sample(const Eigen::VectorXd& x, Engine& rng) const {
  if (x.size() != cap_.d) throw InvalidParameter("CapSampler::sample: dimension mismatch");
  if (!(std::abs(x.norm() - 1.0) <= 1e-10)) throw InvalidParameter("CapSampler::sample: x is not a unit vector");
  const double theta = sample_angle(rng);
  std::normal_distribution<double> normal;
  Eigen::VectorXd w(cap_.d);
  double wn = 0.0;
  do {
    for (int j = 0; j < cap_.d; ++j) w[j] = normal(rng);
    w -= w.dot(x) * x;
    wn = w.norm();
  } while (wn < 1e-300);
  w /= wn;
  Eigen::VectorXd y = std::cos(theta) * x + std::sin(theta) * w;
  return y / y.norm();
}

Eigen::VectorXd sample_cap(const Eigen::VectorXd& x, const CapParams& cap, std::uint64_t seed) {
  if (x.size() != cap.d) throw InvalidParameter("sample_cap: cap dimension does not match x");
  if (!(std::abs(x.norm() - 1.0) <= 1e-10)) throw InvalidParameter("sample_cap: x is not a unit vector");
  CapSampler sampler(cap);
  Engine rng(seed);
  return sampler.sample(x, rng);
}

Eigen::MatrixXd sample_embedded_vectors(std::size_t k, int d, std::size_t pinned, Engine& rng) {
  require_dimension(d);
  if (k == 0) throw InvalidParameter("sample_embedded_vectors: k must be >= 1");
  std::normal_distribution<double> normal;
  const auto kk = static_cast<Eigen::Index>(k);
  const std::size_t width = pinned + k;
  if (width >= static_cast<std::size_t>(d)) {
    Eigen::MatrixXd out(kk, d);
    for (Eigen::Index i = 0; i < kk; ++i) {
      for (int j = 0; j < d; ++j) out(i, j) = normal(rng);
      out.row(i) /= out.row(i).norm();
    }
    return out;
  }
  const auto pp = static_cast<Eigen::Index>(pinned);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(kk, static_cast<Eigen::Index>(width));
  const double dof = static_cast<double>(d) - static_cast<double>(pinned);
  for (Eigen::Index i = 0; i < kk; ++i) {
    for (Eigen::Index j = 0; j < pp; ++j) out(i, j) = normal(rng);
    for (Eigen::Index j = 0; j < i; ++j) out(i, pp + j) = normal(rng);
    std::chi_squared_distribution<double> chi2(dof - static_cast<double>(i));
    out(i, pp + i) = std::sqrt(chi2(rng));
    out.row(i) /= out.row(i).norm();
  }
  return out;
}

}  // namespace rgglab
