#pragma once

// Test-only reference computations. Each one takes a route independent of
// the library code it is used to check.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "tdesign/qcore.hpp"

namespace oracle {

using tdesign::ComplexMatrix;

/// (1/k!) sum over every permutation operator on (C^d)^{(x)k}.
inline ComplexMatrix permutation_average(int d, int k) {
  int n = 1;
  for (int i = 0; i < k; ++i) n *= d;
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  int count = 0;
  do {
    for (int col = 0; col < n; ++col) {
      std::vector<int> digits(static_cast<std::size_t>(k));
      int rest = col;
      for (int p = 0; p < k; ++p) {
        digits[static_cast<std::size_t>(p)] = rest % d;
        rest /= d;
      }
      int row = 0, scale = 1;
      for (int p = 0; p < k; ++p) {
        row += digits[static_cast<std::size_t>(perm[static_cast<std::size_t>(p)])] * scale;
        scale *= d;
      }
      sum(row, col) += 1.0;
    }
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum / static_cast<double>(count);
}

/// H(X) + H(Y) - H(X, Y) of a joint probability table.
inline double mutual_information_by_entropies(const std::vector<std::vector<double>>& joint) {
  auto h = [](double p) { return p > 0.0 ? -p * std::log(p) : 0.0; };
  std::vector<double> px(joint.size(), 0.0), py(joint.front().size(), 0.0);
  double hxy = 0.0;
  for (std::size_t x = 0; x < joint.size(); ++x) {
    for (std::size_t y = 0; y < joint[x].size(); ++y) {
      px[x] += joint[x][y];
      py[y] += joint[x][y];
      hxy += h(joint[x][y]);
    }
  }
  double hx = 0.0, hy = 0.0;
  for (double p : px) hx += h(p);
  for (double p : py) hy += h(p);
  return hx + hy - hxy;
}

/// Joint table w_x |<psi_x|phi_y>|^2 c_y computed from raw amplitudes of
/// rank-one effects c_y |phi_y><phi_y|.
inline std::vector<std::vector<double>> joint_from_vectors(const std::vector<tdesign::ComplexVector>& states,
                                                           const std::vector<double>& weights,
                                                           const std::vector<tdesign::ComplexVector>& effect_vectors,
                                                           const std::vector<double>& effect_weights) {
  std::vector<std::vector<double>> joint(states.size(), std::vector<double>(effect_vectors.size()));
  for (std::size_t x = 0; x < states.size(); ++x) {
    for (std::size_t y = 0; y < effect_vectors.size(); ++y) {
      std::complex<double> amp = 0.0;
      for (Eigen::Index i = 0; i < states[x].size(); ++i) amp += std::conj(effect_vectors[y](i)) * states[x](i);
      joint[x][y] = weights[x] * effect_weights[y] * std::norm(amp);
    }
  }
  return joint;
}

/// Central finite difference of f at x.
template <class F>
double derivative(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracle
