#pragma once

// Finite-dimensional quantum primitives: pure states, effects, POVMs,
// pure-state ensembles, Born-rule statistics and the symmetric-subspace
// projector.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tdesign/error.hpp"

namespace tdesign {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Eigenvalue slack used for positivity and `pi <= 1` checks.
inline constexpr double kPsdTolerance = 1e-10;
/// Max-entry slack for operator identities such as completeness.
inline constexpr double kMatrixTolerance = 1e-10;
/// Upper limit on d^k for tensor-power constructions.
inline constexpr std::size_t kDefaultDimensionCap = 1024;

struct PureState {
  ComplexVector amplitudes;
  double norm_sq = 0.0;

  int dim() const { return static_cast<int>(amplitudes.size()); }
};

/// Normalizes `amplitudes` to unit length.
inline PureState make_pure_state(ComplexVector amplitudes) {
  if (amplitudes.size() < 1) throw Error(Errc::degenerate_state, "degenerate state: empty vector");
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(Errc::degenerate_state, "degenerate state: zero or non-finite vector");
  }
  amplitudes /= norm;
  const double norm_sq = amplitudes.squaredNorm();
  return PureState{std::move(amplitudes), norm_sq};
}

inline PureState make_pure_state(std::initializer_list<Complex> amplitudes) {
  ComplexVector v(static_cast<Eigen::Index>(amplitudes.size()));
  Eigen::Index i = 0;
  for (const auto& a : amplitudes) v(i++) = a;
  return make_pure_state(std::move(v));
}

struct Effect {
  ComplexMatrix matrix;
  double trace = 0.0;
};

inline Effect make_effect(ComplexMatrix matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() < 1) {
    throw Error(Errc::invalid_argument, "effect must be a non-empty square matrix");
  }
  const double tr = matrix.trace().real();
  return Effect{std::move(matrix), tr};
}

/// weight * |psi><psi|
inline Effect rank_one_effect(const PureState& state, double weight) {
  return make_effect(weight * state.amplitudes * state.amplitudes.adjoint());
}

struct Povm {
  int dim = 0;
  std::vector<Effect> effects;

  std::size_t size() const { return effects.size(); }
};

/// Checks shapes only; positivity and completeness are reported by
/// `validate_povm`.
inline Povm make_povm(std::vector<Effect> effects) {
  if (effects.empty()) throw Error(Errc::invalid_argument, "POVM needs at least one effect");
  const auto dim = effects.front().matrix.rows();
  for (const auto& e : effects) {
    if (e.matrix.rows() != dim || e.matrix.cols() != dim) {
      throw Error(Errc::dimension_mismatch, "POVM effects must share one square dimension");
    }
  }
  return Povm{static_cast<int>(dim), std::move(effects)};
}

inline Povm make_povm(const std::vector<ComplexMatrix>& matrices) {
  std::vector<Effect> effects;
  effects.reserve(matrices.size());
  for (const auto& m : matrices) effects.push_back(make_effect(m));
  return make_povm(std::move(effects));
}

struct EnsembleMember {
  PureState state;
  double weight = 0.0;
};

struct Ensemble {
  int dim = 0;
  std::vector<EnsembleMember> members;

  std::size_t size() const { return members.size(); }
};

/// Weights must be non-negative and sum to one within 1e-10.
inline Ensemble make_ensemble(std::vector<EnsembleMember> members) {
  if (members.empty()) throw Error(Errc::invalid_argument, "ensemble needs at least one member");
  const int dim = members.front().state.dim();
  double total = 0.0;
  for (const auto& m : members) {
    if (m.state.dim() != dim) throw Error(Errc::dimension_mismatch, "ensemble states must share one dimension");
    if (!(m.weight >= 0.0)) throw Error(Errc::invalid_argument, "ensemble weights must be non-negative");
    if (std::abs(m.state.norm_sq - 1.0) > 1e-12) {
      throw Error(Errc::invalid_argument, "ensemble states must be normalized");
    }
    total += m.weight;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw Error(Errc::invalid_argument, "ensemble weights must sum to one (got " + std::to_string(total) + ")");
  }
  return Ensemble{dim, std::move(members)};
}

/// sum_x w_x |psi_x><psi_x|
inline ComplexMatrix average_state(const Ensemble& ensemble) {
  ComplexMatrix rho = ComplexMatrix::Zero(ensemble.dim, ensemble.dim);
  for (const auto& m : ensemble.members) {
    rho += m.weight * m.state.amplitudes * m.state.amplitudes.adjoint();
  }
  return rho;
}

/// <psi|M|psi>, real part; M is assumed Hermitian.
inline double expectation(const PureState& state, const ComplexMatrix& m) {
  return state.amplitudes.dot(m * state.amplitudes).real();
}

struct JointDistribution {
  RealMatrix probs;  // n_inputs x n_outcomes
  RealVector row_marginals;
  RealVector col_marginals;
};

/// p(x, y) = w_x <psi_x|pi_y|psi_x>
inline JointDistribution born_joint(const Ensemble& ensemble, const Povm& povm) {
  if (ensemble.dim != povm.dim) throw Error(Errc::dimension_mismatch, "ensemble and POVM dimensions differ");
  const auto n_in = static_cast<Eigen::Index>(ensemble.size());
  const auto n_out = static_cast<Eigen::Index>(povm.size());
  JointDistribution joint;
  joint.probs.resize(n_in, n_out);
  for (Eigen::Index x = 0; x < n_in; ++x) {
    const auto& member = ensemble.members[static_cast<std::size_t>(x)];
    for (Eigen::Index y = 0; y < n_out; ++y) {
      const double p = member.weight * expectation(member.state, povm.effects[static_cast<std::size_t>(y)].matrix);
      joint.probs(x, y) = std::max(p, 0.0);
    }
  }
  joint.row_marginals = joint.probs.rowwise().sum();
  joint.col_marginals = joint.probs.colwise().sum().transpose();
  return joint;
}

/// Eigenvalues of (M + M^dagger)/2 in ascending order.
inline RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

/// Square root of a positive-semidefinite matrix; negative round-off
/// eigenvalues are clamped to zero.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  const RealVector roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.cast<Complex>().asDiagonal() * solver.eigenvectors().adjoint();
}

inline double max_abs_entry(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

struct PovmValidation {
  double max_psd_violation = 0.0;    // max(0, -lambda_min) over effects
  double max_upper_violation = 0.0;  // max(0, lambda_max - 1) over effects
  double max_hermitian_residual = 0.0;
  double completeness_residual = 0.0;  // max-entry |sum pi_y - 1|
  double trace_residual = 0.0;         // |sum Tr pi_y - d|

  bool ok(double tol = kPsdTolerance) const {
    return max_psd_violation <= tol && max_upper_violation <= tol && max_hermitian_residual <= tol &&
           completeness_residual <= tol && trace_residual <= tol;
  }
};

inline PovmValidation validate_povm(const Povm& povm) {
  PovmValidation report;
  ComplexMatrix total = ComplexMatrix::Zero(povm.dim, povm.dim);
  double trace_sum = 0.0;
  for (const auto& e : povm.effects) {
    report.max_hermitian_residual = std::max(report.max_hermitian_residual, max_abs_entry(e.matrix - e.matrix.adjoint()));
    const RealVector ev = hermitian_eigenvalues(e.matrix);
    report.max_psd_violation = std::max(report.max_psd_violation, -ev.minCoeff());
    report.max_upper_violation = std::max(report.max_upper_violation, ev.maxCoeff() - 1.0);
    total += e.matrix;
    trace_sum += e.trace;
  }
  report.completeness_residual = max_abs_entry(total - ComplexMatrix::Identity(povm.dim, povm.dim));
  report.trace_residual = std::abs(trace_sum - povm.dim);
  return report;
}

/// d^k, or 0 when it exceeds `cap`.
inline std::size_t checked_power(int d, int k, std::size_t cap) {
  std::size_t n = 1;
  for (int i = 0; i < k; ++i) {
    n *= static_cast<std::size_t>(d);
    if (n > cap) return 0;
  }
  return n;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Projector onto the symmetric subspace of (C^d)^{(x)k}, i.e. the average of
/// all k! permutation operators. Entry (i, j) is non-zero exactly when the
/// digit strings of i and j are rearrangements of each other; its value is
/// prod(m_c!)/k! where m_c counts the occurrences of digit c.
inline ComplexMatrix symmetric_projector(int d, int k, std::size_t cap = kDefaultDimensionCap) {
  if (d < 1 || k < 1) throw Error(Errc::invalid_argument, "symmetric_projector needs d >= 1 and k >= 1");
  const std::size_t n = checked_power(d, k, cap);
  if (n == 0) throw Error(Errc::dimension_cap, "dimension cap exceeded: d^k > " + std::to_string(cap));

  // Occupation counts per basis index; equal counts <=> same multiset.
  std::vector<std::vector<int>> counts(n, std::vector<int>(static_cast<std::size_t>(d), 0));
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rest = i;
    for (int pos = 0; pos < k; ++pos) {
      ++counts[i][rest % static_cast<std::size_t>(d)];
      rest /= static_cast<std::size_t>(d);
    }
  }
  auto factorial = [](int m) {
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
  };
  const double k_fact = factorial(k);

  ComplexMatrix p = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double stabilizer = 1.0;
    for (int c : counts[i]) stabilizer *= factorial(c);
    const double value = stabilizer / k_fact;
    for (std::size_t j = 0; j < n; ++j) {
      if (counts[i] == counts[j]) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
    }
  }
  return p;
}

/// Effects rho^{1/2} pi_y rho^{1/2}. They sum to rho rather than to the
/// identity, so `sub_povm` is set whenever rho differs from 1.
struct DistortedEffects {
  int dim = 0;
  std::vector<Effect> effects;
  bool sub_povm = true;
};

inline DistortedEffects distort_povm(const Povm& povm, const ComplexMatrix& rho) {
  if (rho.rows() != povm.dim || rho.cols() != povm.dim) {
    throw Error(Errc::dimension_mismatch, "density operator and POVM dimensions differ");
  }
  if (max_abs_entry(rho - rho.adjoint()) > kMatrixTolerance) {
    throw Error(Errc::invalid_argument, "density operator is not Hermitian");
  }
  if (hermitian_eigenvalues(rho).minCoeff() < -kPsdTolerance) {
    throw Error(Errc::invalid_argument, "density operator is not positive semidefinite");
  }
  if (std::abs(rho.trace().real() - 1.0) > kMatrixTolerance) {
    throw Error(Errc::invalid_argument, "density operator must have unit trace");
  }
  const ComplexMatrix root = psd_sqrt(rho);
  DistortedEffects out;
  out.dim = povm.dim;
  out.effects.reserve(povm.size());
  for (const auto& e : povm.effects) out.effects.push_back(make_effect(root * e.matrix * root));
  out.sub_povm = max_abs_entry(rho - ComplexMatrix::Identity(povm.dim, povm.dim)) > kMatrixTolerance;
  return out;
}

/// Haar-random pure state: normalized vector of i.i.d. standard complex
/// Gaussians.
template <class Rng>
PureState haar_random_state(int d, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    ComplexVector v(d);
    for (int i = 0; i < d; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      v(i) = Complex(re, im);
    }
    if (v.norm() > 1e-300) return make_pure_state(std::move(v));
  }
}

}  // namespace tdesign
