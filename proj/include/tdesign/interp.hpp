#pragma once

// Hermite polynomial lower bounds on eta(x) = -x ln x over [0, 1].
//
// A degree-t polynomial p(x) = sum_{k=1..t} a_k x^k with no constant term
// (so p(0) = eta(0)) that matches eta in value and slope at floor(t/2)
// interior knots, plus p(1) = 0 when t is odd. Every derivative of eta of
// order j >= 2 has sign (-1)^{j-1}, which makes the interpolation remainder
// non-negative on [0, 1], hence p <= eta.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tdesign/error.hpp"

namespace tdesign {

/// Knots closer than this to each other or to the ends of [0, 1] are
/// rejected as numerically coincident.
inline constexpr double kMinKnotGap = 1e-6;
/// Reciprocal-condition floor of the confluent Vandermonde system.
inline constexpr double kMinReciprocalCondition = 1e-16;

inline double eta(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(Errc::invalid_argument, "eta is defined on [0, 1]");
  return x == 0.0 ? 0.0 : -x * std::log(x);
}

/// j-th derivative of eta at x > 0: j=0 value, j=1 -ln x - 1, and
/// (-1)^{j-1} (j-2)! x^{1-j} for j >= 2.
template <class Scalar = double>
Scalar eta_derivative(int j, Scalar x) {
  using std::log;
  using std::pow;
  if (j == 0) return x == Scalar(0) ? Scalar(0) : -x * log(x);
  if (j == 1) return -log(x) - Scalar(1);
  Scalar fact = 1;
  for (int i = 2; i <= j - 2; ++i) fact *= i;
  const Scalar sign = (j % 2 == 0) ? Scalar(-1) : Scalar(1);
  return sign * fact * pow(x, Scalar(1 - j));
}

struct LowerPolynomial {
  int t = 0;
  std::vector<double> coeffs;  // a_1 .. a_t; the constant term is zero
  std::vector<double> knots;
  double condition_number = 1.0;
};

inline void validate_knots(int t, std::span<const double> knots) {
  if (t < 1) throw Error(Errc::invalid_argument, "polynomial degree must be >= 1");
  if (static_cast<int>(knots.size()) != t / 2) {
    throw Error(Errc::invalid_argument, "wrong knot count: degree " + std::to_string(t) + " needs " +
                                            std::to_string(t / 2) + " knots, got " + std::to_string(knots.size()));
  }
  double prev = 0.0;
  for (double x : knots) {
    if (!(x > 0.0 && x < 1.0)) throw Error(Errc::invalid_argument, "knots must lie in the open interval (0, 1)");
    if (x < prev) throw Error(Errc::invalid_argument, "knots must be strictly increasing");
    if (x - prev < kMinKnotGap) throw Error(Errc::singular_system, "singular system: knots closer than 1e-6");
    prev = x;
  }
  if (!knots.empty() && 1.0 - prev < kMinKnotGap) {
    throw Error(Errc::singular_system, "singular system: knot closer than 1e-6 to the endpoint");
  }
}

/// Solves the confluent Vandermonde system for a_1..a_t in precision
/// `Scalar`. Rows: value and slope at each knot, then p(1) = 0 if t is odd.
template <class Scalar>
std::vector<Scalar> hermite_coefficients(int t, std::span<const double> knots, double* condition_number = nullptr) {
  validate_knots(t, knots);
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Matrix system = Matrix::Zero(t, t);
  Vector rhs = Vector::Zero(t);
  int row = 0;
  for (double knot : knots) {
    const Scalar x = knot;
    Scalar power = 1;  // x^{k-1}
    for (int k = 1; k <= t; ++k) {
      system(row, k - 1) = power * x;
      system(row + 1, k - 1) = Scalar(k) * power;
      power *= x;
    }
    rhs(row) = eta_derivative<Scalar>(0, x);
    rhs(row + 1) = eta_derivative<Scalar>(1, x);
    row += 2;
  }
  if (t % 2 == 1) {
    system.row(row).setOnes();
    rhs(row) = 0;
  }
  Eigen::PartialPivLU<Matrix> lu(system);
  const double rcond = static_cast<double>(lu.rcond());
  if (!(rcond > kMinReciprocalCondition)) {
    throw Error(Errc::singular_system, "singular system: reciprocal condition " + std::to_string(rcond));
  }
  if (condition_number != nullptr) *condition_number = 1.0 / rcond;
  const Vector solution = lu.solve(rhs);
  return std::vector<Scalar>(solution.data(), solution.data() + t);
}

inline LowerPolynomial hermite_lower_polynomial(int t, std::span<const double> knots) {
  LowerPolynomial poly;
  poly.t = t;
  poly.knots.assign(knots.begin(), knots.end());
  const auto coeffs = hermite_coefficients<long double>(t, knots, &poly.condition_number);
  poly.coeffs.assign(coeffs.begin(), coeffs.end());
  return poly;
}

inline LowerPolynomial hermite_lower_polynomial(int t, std::initializer_list<double> knots) {
  return hermite_lower_polynomial(t, std::span<const double>(knots.begin(), knots.size()));
}

/// Horner evaluation of sum_k a_k x^k.
inline double evaluate_polynomial(const LowerPolynomial& poly, double x) {
  double acc = 0.0;
  for (auto it = poly.coeffs.rbegin(); it != poly.coeffs.rend(); ++it) acc = acc * x + *it;
  return acc * x;
}

inline double evaluate_derivative(const LowerPolynomial& poly, double x) {
  double acc = 0.0;
  for (std::size_t k = poly.coeffs.size(); k >= 1; --k) acc = acc * x + static_cast<double>(k) * poly.coeffs[k - 1];
  return acc;
}

/// max over a uniform grid of n_samples points on [0, 1] of p(x) - eta(x).
/// The polynomial is a certified lower bound when this is <= 1e-10.
inline double verify_lower_bound(const LowerPolynomial& poly, int n_samples) {
  if (n_samples < 2) throw Error(Errc::invalid_argument, "need at least two samples");
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    const double x = (i == n_samples - 1) ? 1.0 : static_cast<double>(i) / (n_samples - 1);
    worst = std::max(worst, evaluate_polynomial(poly, x) - eta(x));
  }
  return worst;
}

}  // namespace tdesign
