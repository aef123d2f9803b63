#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "generators.hpp"
#include "oracles.hpp"
#include "tdesign/bounds.hpp"
#include "tdesign/interp.hpp"

using namespace tdesign;

TEST(Eta, Endpoints) {
  EXPECT_EQ(eta(0.0), 0.0);
  EXPECT_EQ(eta(1.0), 0.0);
  EXPECT_NEAR(eta(1.0 / std::numbers::e), 1.0 / std::numbers::e, 1e-16);
}

TEST(Eta, OutsideUnitIntervalThrows) {
  EXPECT_THROW(eta(-1e-3), Error);
  EXPECT_THROW(eta(1.0 + 1e-12), Error);
  EXPECT_THROW(eta(std::nan("")), Error);
}

TEST(Eta, DerivativesMatchFiniteDifferences) {
  for (double x : {0.1, 0.37, 0.8}) {
    for (int j = 1; j <= 5; ++j) {
      const auto lower = [j](double y) { return eta_derivative<double>(j - 1, y); };
      EXPECT_NEAR(eta_derivative<double>(j, x), oracle::derivative(lower, x, 1e-5), 1e-5 * std::pow(x, -j)) << j;
    }
  }
}

TEST(Hermite, DegreeOneIsZero) {
  const auto p = hermite_lower_polynomial(1, {});
  ASSERT_EQ(p.coeffs.size(), 1u);
  EXPECT_EQ(p.coeffs[0], 0.0);
  EXPECT_EQ(verify_lower_bound(p, 101), 0.0);
}

TEST(Hermite, DegreeTwoClosedForm) {
  const auto p = hermite_lower_polynomial(2, {2.0 / 3.0});
  EXPECT_NEAR(p.coeffs[0], 1.0 - std::log(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(p.coeffs[0], 1.4054651081081644, 1e-15);
  EXPECT_NEAR(p.coeffs[1], -1.5, 1e-15);
  for (double x1 : {0.1, 0.25, 0.9}) {
    const auto q = hermite_lower_polynomial(2, {x1});
    EXPECT_NEAR(q.coeffs[0], 1.0 - std::log(x1), 1e-14);
    EXPECT_NEAR(q.coeffs[1], -1.0 / x1, 1e-12);
  }
}

TEST(Hermite, WrongKnotCount) {
  try {
    hermite_lower_polynomial(2, {0.3, 0.7});
    FAIL() << "expected knot count error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_argument);
    EXPECT_NE(std::string(e.what()).find("wrong knot count"), std::string::npos);
  }
  EXPECT_THROW(hermite_lower_polynomial(5, {0.3}), Error);
  EXPECT_THROW(hermite_lower_polynomial(0, {}), Error);
}

TEST(Hermite, CoincidentKnotsAreSingular) {
  try {
    hermite_lower_polynomial(4, {0.4, 0.4});
    FAIL() << "expected singular system";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::singular_system);
  }
  EXPECT_THROW(hermite_lower_polynomial(4, {0.4, 0.4 + 1e-9}), Error);
  EXPECT_THROW(hermite_lower_polynomial(3, {1.0 - 1e-9}), Error);
}

TEST(Hermite, KnotsOutsideOrUnsortedRejected) {
  EXPECT_THROW(hermite_lower_polynomial(2, {0.0}), Error);
  EXPECT_THROW(hermite_lower_polynomial(2, {1.0}), Error);
  EXPECT_THROW(hermite_lower_polynomial(4, {0.7, 0.3}), Error);
}

TEST(Evaluate, Examples) {
  EXPECT_EQ(evaluate_polynomial(hermite_lower_polynomial(1, {}), 0.42), 0.0);
  LowerPolynomial linear;
  linear.t = 1;
  linear.coeffs = {1.0};
  EXPECT_EQ(evaluate_polynomial(linear, 0.5), 0.5);
  const auto p = hermite_lower_polynomial(2, {2.0 / 3.0});
  EXPECT_NEAR(evaluate_polynomial(p, 2.0 / 3.0), eta(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(evaluate_polynomial(p, 2.0 / 3.0), 0.27031, 1e-5);
}

TEST(VerifyLowerBound, ClosedFormKnots) {
  EXPECT_LE(verify_lower_bound(hermite_lower_polynomial(2, {2.0 / 3.0}), 10001), 1e-12);
  const auto knots = optimal_knots_closed_form(2, 5);
  EXPECT_LE(verify_lower_bound(hermite_lower_polynomial(5, knots), 10001), 1e-12);
  EXPECT_THROW(verify_lower_bound(hermite_lower_polynomial(1, {}), 1), Error);
}

TEST(VerifyLowerBound, DetectsPolynomialAboveEta) {
  LowerPolynomial p;
  p.t = 1;
  p.coeffs = {0.1};
  EXPECT_NEAR(verify_lower_bound(p, 11), 0.1, 1e-15);
}

// Randomized: Hermite conditions, p(1) = 0 for odd t, and p <= eta.
class HermiteProperty : public ::testing::TestWithParam<int> {};

TEST_P(HermiteProperty, RandomKnots) {
  const int t = GetParam();
  std::mt19937_64 rng(100 + static_cast<unsigned>(t));
  for (int trial = 0; trial < 50; ++trial) {
    const auto knots = gen::random_knots(t, rng);
    const auto p = hermite_lower_polynomial(t, knots);
    for (double x : knots) {
      EXPECT_NEAR(evaluate_polynomial(p, x), eta(x), 1e-10) << "t=" << t << " x=" << x;
      EXPECT_NEAR(evaluate_derivative(p, x), eta_derivative(1, x), 1e-10) << "t=" << t << " x=" << x;
    }
    if (t % 2 == 1) EXPECT_NEAR(evaluate_polynomial(p, 1.0), 0.0, 1e-10);
    EXPECT_EQ(evaluate_polynomial(p, 0.0), 0.0);
    EXPECT_LE(verify_lower_bound(p, 10001), 1e-10) << "t=" << t;
    EXPECT_GE(p.condition_number, 1.0);
  }
}

TEST_P(HermiteProperty, DerivativeMatchesFiniteDifference) {
  const int t = GetParam();
  std::mt19937_64 rng(7 + static_cast<unsigned>(t));
  const auto p = hermite_lower_polynomial(t, gen::random_knots(t, rng));
  for (double x : {0.2, 0.5, 0.8}) {
    EXPECT_NEAR(evaluate_derivative(p, x), oracle::derivative([&](double y) { return evaluate_polynomial(p, y); }, x, 1e-6),
                1e-6);
  }
}

INSTANTIATE_TEST_SUITE_P(Degrees, HermiteProperty, ::testing::Range(1, 9));
