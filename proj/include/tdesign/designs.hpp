#pragma once

// Concrete t-design POVMs (computational basis, the three Platonic qubit
// measurements, the Hesse qutrit SIC), antipodal ensembles, and numerical
// design-order certification against the symmetric-subspace moments.

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "tdesign/numeric.hpp"
#include "tdesign/qcore.hpp"

namespace tdesign {

/// Residual tolerance for the moment identity; looser than kMatrixTolerance
/// because tensor powers accumulate round-off in k.
inline constexpr double kDesignTolerance = 1e-9;

using BlochVector = std::array<double, 3>;

/// Qubit pure state whose Bloch vector is `n` (|n| = 1).
inline PureState bloch_state(const BlochVector& n) {
  const double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  const double x = n[0] / norm, y = n[1] / norm, z = n[2] / norm;
  // (1 + z, x + iy) has Bloch vector n; near the south pole use (x - iy, 1 - z).
  if (z > -0.5) return make_pure_state({Complex(1.0 + z, 0.0), Complex(x, y)});
  return make_pure_state({Complex(x, -y), Complex(1.0 - z, 0.0)});
}

/// Bloch vector of a qubit effect, n_i = Tr[pi sigma_i] / Tr[pi].
inline BlochVector bloch_vector(const Effect& effect) {
  const auto& m = effect.matrix;
  const double tr = effect.trace;
  return {2.0 * m(1, 0).real() / tr, 2.0 * m(1, 0).imag() / tr, (m(0, 0).real() - m(1, 1).real()) / tr};
}

inline Povm qubit_povm_from_bloch(const std::vector<BlochVector>& directions) {
  const double weight = 2.0 / static_cast<double>(directions.size());
  std::vector<Effect> effects;
  effects.reserve(directions.size());
  for (const auto& n : directions) effects.push_back(rank_one_effect(bloch_state(n), weight));
  return make_povm(std::move(effects));
}

inline Povm basis_povm(int d) {
  if (d < 1) throw Error(Errc::invalid_argument, "basis_povm needs d >= 1");
  std::vector<Effect> effects;
  for (int i = 0; i < d; ++i) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    m(i, i) = 1.0;
    effects.push_back(make_effect(std::move(m)));
  }
  return make_povm(std::move(effects));
}

/// SIC POVM: Bloch vectors on a regular tetrahedron, weight 1/2 each.
inline Povm tetrahedron_povm() {
  const double s = 1.0 / std::sqrt(3.0);
  return qubit_povm_from_bloch({{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}});
}

/// Complete set of qubit MUBs: Bloch vectors +-x, +-y, +-z, weight 1/3 each.
inline Povm octahedron_povm() {
  return qubit_povm_from_bloch({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}});
}

/// Bloch vectors on a regular icosahedron (cyclic permutations of
/// (0, +-1, +-g)), weight 1/6 each.
inline Povm icosahedron_povm() {
  const double g = std::numbers::phi;
  std::vector<BlochVector> dirs;
  for (double a : {1.0, -1.0}) {
    for (double b : {g, -g}) {
      dirs.push_back({0.0, a, b});
      dirs.push_back({a, b, 0.0});
      dirs.push_back({b, 0.0, a});
    }
  }
  return qubit_povm_from_bloch(dirs);
}

/// Weyl-Heisenberg orbit X^j Z^k |f> of the fiducial f = (0, 1, -1)/sqrt(2),
/// each effect weighted 1/3.
inline Povm qutrit_sic_povm() {
  constexpr int d = 3;
  const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / d);
  ComplexVector fiducial(d);
  fiducial << 0.0, 1.0, -1.0;
  std::vector<Effect> effects;
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      ComplexVector v(d);
      for (int m = 0; m < d; ++m) {
        // (X^j Z^k f)_{m} = omega^{k (m - j)} f_{m - j}
        const int src = ((m - j) % d + d) % d;
        v(m) = std::pow(omega, k * src) * fiducial(src);
      }
      effects.push_back(rank_one_effect(make_pure_state(std::move(v)), 1.0 / d));
    }
  }
  return make_povm(std::move(effects));
}

/// For a qubit POVM of rank-one effects, the ensemble of states with
/// reversed Bloch vectors weighted Tr[pi_x]/2, so <psi_x|pi_x|psi_x> = 0.
inline Ensemble antipodal_ensemble(const Povm& povm) {
  if (povm.dim != 2) throw Error(Errc::invalid_argument, "antipodal_ensemble needs a qubit POVM");
  std::vector<EnsembleMember> members;
  for (const auto& e : povm.effects) {
    if (!(e.trace > 0.0) || std::abs(hermitian_eigenvalues(e.matrix)(0)) > kPsdTolerance) {
      throw Error(Errc::invalid_argument, "antipodal_ensemble needs rank-one effects");
    }
    const auto n = bloch_vector(e);
    members.push_back({bloch_state({-n[0], -n[1], -n[2]}), e.trace / 2.0});
  }
  return make_ensemble(std::move(members));
}

/// C_k = sum_y <psi|pi_y|psi>^k / Tr[pi_y]^{k-1}
inline double index_of_coincidence(const Povm& povm, const PureState& state, int k) {
  if (k < 1) throw Error(Errc::invalid_argument, "index of coincidence needs k >= 1");
  if (state.dim() != povm.dim) throw Error(Errc::dimension_mismatch, "state and POVM dimensions differ");
  if (std::abs(state.norm_sq - 1.0) > 1e-12) throw Error(Errc::invalid_argument, "state must have unit norm");
  double c = 0.0;
  for (const auto& e : povm.effects) {
    if (e.trace <= 0.0) continue;
    const double p = expectation(state, e.matrix);
    c += std::pow(p, k) / std::pow(e.trace, k - 1);
  }
  return c;
}

/// Coincidence index shared by every k-design: d / binom(d-1+k, k).
inline double design_coincidence(int d, int k) { return d / binomial(d - 1 + k, k); }

/// max-entry | sum_y pi_y^{(x)k} / Tr[pi_y]^{k-1} - d binom(d-1+k,k)^{-1} P_sym |
inline double design_residual(const Povm& povm, int k, std::size_t cap = kDefaultDimensionCap) {
  if (k < 1) throw Error(Errc::invalid_argument, "design order must be >= 1");
  const std::size_t n = checked_power(povm.dim, k, cap);
  if (n == 0) throw Error(Errc::dimension_cap, "dimension cap exceeded: d^k > " + std::to_string(cap));
  const auto size = static_cast<Eigen::Index>(n);
  ComplexMatrix moment = ComplexMatrix::Zero(size, size);
  for (const auto& e : povm.effects) {
    if (e.trace <= 0.0) continue;
    ComplexMatrix power = e.matrix;
    for (int j = 1; j < k; ++j) power = kron(power, e.matrix);
    moment += power / std::pow(e.trace, k - 1);
  }
  moment -= design_coincidence(povm.dim, k) * symmetric_projector(povm.dim, k, cap);
  return max_abs_entry(moment);
}

struct DesignCheckReport {
  int claimed_t = 0;
  double tolerance = kDesignTolerance;
  std::map<int, double> per_k_residual;
  std::map<int, bool> verdict;

  bool passed() const {
    for (const auto& [k, ok] : verdict) {
      if (!ok) return false;
    }
    return !verdict.empty();
  }

  std::optional<int> first_failure() const {
    for (const auto& [k, ok] : verdict) {
      if (!ok) return k;
    }
    return std::nullopt;
  }
};

inline DesignCheckReport check_t_design(const Povm& povm, int t, double tolerance = kDesignTolerance,
                                        std::size_t cap = kDefaultDimensionCap) {
  if (t < 1) throw Error(Errc::invalid_argument, "design order must be >= 1");
  if (checked_power(povm.dim, t, cap) == 0) {
    throw Error(Errc::dimension_cap, "dimension cap exceeded: d^t > " + std::to_string(cap));
  }
  DesignCheckReport report;
  report.claimed_t = t;
  report.tolerance = tolerance;
  for (int k = 1; k <= t; ++k) {
    const double r = design_residual(povm, k, cap);
    report.per_k_residual[k] = r;
    report.verdict[k] = r <= tolerance;
  }
  return report;
}

/// Largest t <= t_max such that every k <= t passes; 0 if not even a
/// (normalized) 1-design.
inline int design_order(const Povm& povm, int t_max, double tolerance = kDesignTolerance,
                        std::size_t cap = kDefaultDimensionCap) {
  if (t_max < 1) throw Error(Errc::invalid_argument, "t_max must be >= 1");
  int order = 0;
  for (int k = 1; k <= t_max; ++k) {
    if (design_residual(povm, k, cap) > tolerance) break;
    order = k;
  }
  return order;
}

}  // namespace tdesign
