#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <gtest/gtest.h>

#include "rgglab/errors.hpp"
#include "rgglab/sphere.hpp"

using namespace rgglab;

namespace {

// Independent route: the squared coordinate of a uniform point is Beta(1/2, (d-1)/2).
double cap_by_incomplete_beta(double tau, int d) {
  const double half = 0.5 * boost::math::ibeta((d - 1) / 2.0, 0.5, 1.0 - tau * tau);
  return tau >= 0 ? half : 1.0 - half;
}

double ks_against(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    sup = std::max({sup, std::abs(f - i / n), std::abs((i + 1) / n - f)});
  }
  return sup;
}

}  // namespace

TEST(UnitVectorSet, RejectsBadInput) {
  Eigen::MatrixXd ok(2, 3);
  ok << 1, 0, 0, 0, 0.6, 0.8;
  EXPECT_NO_THROW(UnitVectorSet{ok});
  Eigen::MatrixXd off = ok;
  off(1, 1) = 0.7;
  EXPECT_THROW(UnitVectorSet{off}, InvalidParameter);
  EXPECT_THROW(UnitVectorSet{Eigen::MatrixXd(0, 3)}, InvalidParameter);
  Eigen::MatrixXd flat(1, 1);
  flat << 1;
  EXPECT_THROW(UnitVectorSet{flat}, InvalidParameter);
}

TEST(SampleUnitVectors, UnitNormAndRowStable) {
  const UnitVectorSet a = sample_unit_vectors(5, 7, 99);
  const UnitVectorSet b = sample_unit_vectors(10, 7, 99);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(a.data().row(i).norm(), 1.0, 1e-12);
    EXPECT_EQ(a.data().row(i), b.data().row(i));
  }
  EXPECT_NE(sample_unit_vectors(5, 7, 100).data().row(0), a.data().row(0));
}

TEST(CapProbability, ClosedForms) {
  EXPECT_DOUBLE_EQ(cap_probability(0.0, 10), 0.5);
  EXPECT_EQ(cap_probability(1.0, 10), 0.0);
  EXPECT_NEAR(cap_probability(-1.0, 10), 1.0, 1e-15);
  // S^2: cap area is (1 - tau) / 2.
  for (double t : {-0.9, -0.3, 0.1, 0.5, 0.99}) EXPECT_NEAR(cap_probability(t, 3), (1 - t) / 2, 1e-13);
  // Circle: arccos(tau) / pi.
  EXPECT_NEAR(cap_probability(0.2, 2), 0.435905783151025, 1e-13);
  EXPECT_THROW(cap_probability(1.5, 10), InvalidParameter);
  EXPECT_THROW(cap_probability(0.5, 1), InvalidParameter);
}

TEST(CapProbability, MatchesFrozenReferenceValues) {
  // Regularized incomplete beta values computed offline with scipy.special.betainc.
  EXPECT_NEAR(cap_probability(0.3, 10), 0.1850415611410339, 1e-12);
  EXPECT_NEAR(cap_probability(0.1, 100), 0.15987423706965065, 1e-12);
  EXPECT_NEAR(cap_probability(0.05, 1000), 0.056945704569040925, 1e-12);
  EXPECT_NEAR(cap_probability(0.7, 4), 0.09406020218709366, 1e-12);
  EXPECT_NEAR(cap_probability(-0.4, 7), 0.83692, 1e-5);
}

TEST(CapProbability, MatchesIncompleteBetaOnGrid) {
  for (int d : {2, 3, 4, 5, 10, 37, 100, 300, 1000, 5000}) {
    for (double t : {-0.95, -0.5, -0.05, 0.0, 0.01, 0.1, 0.25, 0.5, 0.8, 0.999}) {
      const double ref = cap_by_incomplete_beta(t, d);
      EXPECT_NEAR(cap_probability(t, d), ref, 1e-12 + 1e-9 * ref) << "d=" << d << " tau=" << t;
    }
  }
}

TEST(CapProbability, MonotoneAndSymmetric) {
  for (int d : {3, 20, 400}) {
    double prev = 1.0;
    for (double t = -0.99; t < 1.0; t += 0.01) {
      const double c = cap_probability(t, d);
      EXPECT_LE(c, prev + 1e-15);
      EXPECT_NEAR(cap_probability(-t, d), 1.0 - c, 1e-13);
      prev = c;
    }
  }
}

TEST(CalibrateTau, FrozenReferenceValues) {
  // Roots of the incomplete-beta cap equation found offline with scipy brentq.
  EXPECT_NEAR(calibrate_tau(0.01, 300).tau, 0.13404053290020973, 1e-10);
  EXPECT_NEAR(calibrate_tau(0.05, 200).tau, 0.11635, 5e-5);
  EXPECT_NEAR(calibrate_tau(0.05, 800).tau, 0.05816, 5e-5);
  EXPECT_NEAR(calibrate_tau(0.1, 100).tau, 0.12859, 5e-5);
  EXPECT_NEAR(calibrate_tau(2.23 / 2500, 100).tau, 0.30713, 5e-5);
}

TEST(CalibrateTau, InvariantsOnGrid) {
  for (int d : {2, 3, 10, 100, 1000}) {
    for (double p : {1e-4, 0.01, 0.1, 0.3, 0.5, 0.7, 0.99}) {
      const CapParams c = calibrate_tau(p, d, 1e-12);
      EXPECT_LE(std::abs(cap_probability(c.tau, d) - p), 1e-12);
      EXPECT_LE(c.calibration_error, 1e-12);
      EXPECT_GE(c.tau, -1.0);
      EXPECT_LE(c.tau, 1.0);
      if (p <= 0.5) EXPECT_GE(c.tau, 0.0) << "p=" << p << " d=" << d;
    }
  }
  EXPECT_EQ(calibrate_tau(0.5, 50).tau, 0.0);
}

TEST(CalibrateTau, Errors) {
  EXPECT_THROW(calibrate_tau(0.0, 10), InvalidParameter);
  EXPECT_THROW(calibrate_tau(1.0, 10), InvalidParameter);
  EXPECT_THROW(calibrate_tau(0.1, 1), InvalidParameter);
  try {
    calibrate_tau(0.1, 10, 1e-30);
    FAIL() << "expected CalibrationFailure";
  } catch (const CalibrationFailure& e) {
    EXPECT_LT(e.bracket_lo(), e.bracket_hi());
    EXPECT_LE(cap_probability(e.bracket_hi(), 10), 0.1);
    EXPECT_GE(cap_probability(e.bracket_lo(), 10), 0.1);
  }
}

TEST(CapSampler, InnerProductLawIsConditionalCap) {
  for (auto [p, d] : {std::pair{0.1, 100}, std::pair{0.01, 20}, std::pair{0.5, 5}, std::pair{0.9, 30}}) {
    const CapParams cap = calibrate_tau(p, d);
    const CapSampler sampler(cap);
    Engine rng = make_engine(5, static_cast<std::uint64_t>(d));
    std::vector<double> t(20000);
    for (auto& x : t) {
      x = sampler.sample_inner_product(rng);
      ASSERT_GE(x, cap.tau);
      ASSERT_LE(x, 1.0);
    }
    const double ks = ks_against(t, [&](double x) { return (p - cap_probability(x, d)) / p; });
    EXPECT_LT(ks, 0.015) << "p=" << p << " d=" << d;
  }
}

TEST(CapSampler, FullDrawLiesInCap) {
  const CapParams cap = calibrate_tau(0.05, 40);
  const CapSampler sampler(cap);
  Engine rng = make_engine(3, 0);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(40);
  x(3) = 0.6;
  x(7) = 0.8;
  Eigen::VectorXd orth_sum = Eigen::VectorXd::Zero(40);
  for (int i = 0; i < 5000; ++i) {
    const Eigen::VectorXd y = sampler.sample(x, rng);
    ASSERT_NEAR(y.norm(), 1.0, 1e-12);
    ASSERT_GE(x.dot(y), cap.tau - 1e-12);
    orth_sum += y - x.dot(y) * x;
  }
  EXPECT_LT(orth_sum.norm() / 5000, 0.03);
  EXPECT_THROW(sampler.sample(Eigen::VectorXd::Ones(39).normalized(), rng), InvalidParameter);
  const Eigen::VectorXd once = sample_cap(x, cap, 11);
  EXPECT_EQ(once, sample_cap(x, cap, 11));
}

TEST(EmbeddedVectors, PairLawMatchesSphere) {
  for (int d : {4, 10, 200}) {
    Engine rng = make_engine(8, static_cast<std::uint64_t>(d));
    std::vector<double> t, pinned_coord;
    for (int i = 0; i < 20000; ++i) {
      const Eigen::MatrixXd v = sample_embedded_vectors(2, d, 1, rng);
      ASSERT_NEAR(v.row(0).norm(), 1.0, 1e-12);
      t.push_back(v.row(0).dot(v.row(1)));
      pinned_coord.push_back(v(1, 0));
    }
    const auto cdf = [d](double x) { return 1.0 - cap_probability(x, d); };
    EXPECT_LT(ks_against(t, cdf), 0.015) << "d=" << d;
    EXPECT_LT(ks_against(pinned_coord, cdf), 0.015) << "d=" << d;
  }
}

TEST(EmbeddedVectors, TripleCorrelationIsInverseSquareDimension) {
  // E <u1,u2><u2,u3><u3,u1> = tr((I/d)^3) = 1/d^2 for independent uniform points.
  for (int d : {3, 10}) {
    Engine rng = make_engine(9, static_cast<std::uint64_t>(d));
    double sum = 0.0;
    const int trials = 200000;
    for (int i = 0; i < trials; ++i) {
      const Eigen::MatrixXd v = sample_embedded_vectors(3, d, 0, rng);
      sum += v.row(0).dot(v.row(1)) * v.row(1).dot(v.row(2)) * v.row(2).dot(v.row(0));
    }
    EXPECT_NEAR(sum / trials, 1.0 / (d * d), 0.1 / (d * d)) << "d=" << d;
  }
}
