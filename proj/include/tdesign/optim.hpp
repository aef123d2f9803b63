#pragma once

// Small derivative-free minimizers: Nelder-Mead simplex, golden-section line
// search and compass pattern search. All minimize; callers negate to
// maximize. Non-finite objective values are treated as +infinity.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace tdesign::optim {

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

template <class F>
double safe_call(F& f, const Eigen::VectorXd& x) {
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace detail

struct NelderMeadOptions {
  double initial_step = 0.1;
  double f_tolerance = 1e-12;
  double x_tolerance = 1e-10;
  int max_evaluations = 20000;
};

template <class F>
MinimizeResult nelder_mead(F&& f, const Eigen::VectorXd& start, const NelderMeadOptions& opts = {}) {
  const auto n = start.size();
  std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(n + 1), start);
  std::vector<double> values(static_cast<std::size_t>(n + 1));
  MinimizeResult result;
  for (Eigen::Index i = 0; i < n; ++i) simplex[static_cast<std::size_t>(i + 1)](i) += opts.initial_step;
  for (std::size_t i = 0; i < simplex.size(); ++i) values[i] = detail::safe_call(f, simplex[i]);
  result.evaluations = static_cast<int>(simplex.size());

  std::vector<std::size_t> order(simplex.size());
  while (result.evaluations < opts.max_evaluations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];

    double diameter = 0.0;
    for (const auto& v : simplex) diameter = std::max(diameter, (v - simplex[best]).lpNorm<Eigen::Infinity>());
    if (values[worst] - values[best] <= opts.f_tolerance && diameter <= opts.x_tolerance) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i != worst) centroid += simplex[i];
    }
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd reflected = centroid + (centroid - simplex[worst]);
    const double f_reflected = detail::safe_call(f, reflected);
    ++result.evaluations;
    if (f_reflected < values[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[worst]);
      const double f_expanded = detail::safe_call(f, expanded);
      ++result.evaluations;
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < values[worst];
    const Eigen::VectorXd contracted =
        outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
    const double f_contracted = detail::safe_call(f, contracted);
    ++result.evaluations;
    if (f_contracted < std::min(f_reflected, values[worst])) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
      values[i] = detail::safe_call(f, simplex[i]);
      ++result.evaluations;
    }
  }
  const auto it = std::min_element(values.begin(), values.end());
  result.x = simplex[static_cast<std::size_t>(it - values.begin())];
  result.value = *it;
  return result;
}

struct LineResult {
  double x = 0.0;
  double value = std::numeric_limits<double>::infinity();
};

/// Golden-section minimization of a unimodal f on [lo, hi].
template <class F>
LineResult golden_section(F&& f, double lo, double hi, double tolerance = 1e-12, int max_iterations = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto call = [&](double x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = call(c), fd = call(d);
  for (int i = 0; i < max_iterations && (b - a) > tolerance; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = call(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = call(d);
    }
  }
  return fc <= fd ? LineResult{c, fc} : LineResult{d, fd};
}

struct PatternSearchOptions {
  double initial_step = 0.05;
  double step_floor = 1e-9;
  double shrink = 0.5;
  int max_evaluations = 200000;
};

/// Compass search: probe +-step along each axis, accept any improvement,
/// shrink the step when no probe improves, stop below `step_floor`.
template <class F>
MinimizeResult pattern_search(F&& f, const Eigen::VectorXd& start, const PatternSearchOptions& opts = {}) {
  MinimizeResult result;
  result.x = start;
  result.value = detail::safe_call(f, start);
  result.evaluations = 1;
  double step = opts.initial_step;
  while (step >= opts.step_floor && result.evaluations < opts.max_evaluations) {
    bool improved = false;
    for (Eigen::Index i = 0; i < start.size(); ++i) {
      for (double dir : {1.0, -1.0}) {
        Eigen::VectorXd probe = result.x;
        probe(i) += dir * step;
        const double v = detail::safe_call(f, probe);
        ++result.evaluations;
        if (v < result.value) {
          result.x = std::move(probe);
          result.value = v;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= opts.shrink;
  }
  result.converged = step < opts.step_floor;
  return result;
}

}  // namespace tdesign::optim
