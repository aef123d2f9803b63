#pragma once

// Upper bounds W_t(d) on the informational power of d-dimensional t-design
// POVMs.
//
// For knots x_1 < ... < x_m in (0, 1), m = floor(t/2), let p be the Hermite
// lower polynomial of eta from interp.hpp. Then
//
//   W <= ln d - d * sum_{k=1..t} a_k / binom(d+k-1, k),
//
// and the tightest such bound minimizes the right-hand side over the knots.
// Closed forms exist for t = 1..5 and t = infinity (the subentropy value).

#include <cmath>
#include <compare>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tdesign/error.hpp"
#include "tdesign/interp.hpp"
#include "tdesign/numeric.hpp"
#include "tdesign/optim.hpp"

namespace tdesign {

/// Design order: a positive integer or infinity (the Haar-uniform limit).
class DesignOrder {
 public:
  constexpr explicit DesignOrder(int t) : t_(t) {}

  static constexpr DesignOrder infinity() { return DesignOrder(kInfinite); }

  /// Accepts a positive integer or one of "inf", "infinity", "oo".
  static DesignOrder parse(std::string_view text) {
    if (text == "inf" || text == "infinity" || text == "oo" || text == "Inf") return infinity();
    int value = 0;
    if (text.empty()) throw Error(Errc::invalid_argument, "empty design order");
    for (char c : text) {
      if (c < '0' || c > '9') throw Error(Errc::invalid_argument, "bad design order: " + std::string(text));
      value = value * 10 + (c - '0');
      if (value > 1000000) throw Error(Errc::invalid_argument, "design order too large");
    }
    if (value < 1) throw Error(Errc::invalid_argument, "design order must be >= 1");
    return DesignOrder(value);
  }

  constexpr bool is_infinite() const { return t_ == kInfinite; }

  int value() const {
    if (is_infinite()) throw Error(Errc::invalid_argument, "infinite design order has no integer value");
    return t_;
  }

  std::string to_string() const { return is_infinite() ? "inf" : std::to_string(t_); }

  constexpr auto operator<=>(const DesignOrder&) const = default;

 private:
  static constexpr int kInfinite = std::numeric_limits<int>::max();
  int t_;
};

enum class BoundSource { closed_form, numeric_optimum, asymptote };

inline std::string to_string(BoundSource s) {
  switch (s) {
    case BoundSource::closed_form:
      return "closed_form";
    case BoundSource::numeric_optimum:
      return "numeric_optimum";
    case BoundSource::asymptote:
      return "asymptote";
  }
  return "unknown";
}

struct BoundResult {
  int d = 0;
  DesignOrder t{1};
  double value_nats = 0.0;
  std::vector<double> knots;
  BoundSource source = BoundSource::closed_form;
};

inline void require_dimension(int d, int min_d = 2) {
  if (d < min_d) throw Error(Errc::invalid_argument, "dimension must be >= " + std::to_string(min_d));
}

/// ln d - d sum_k a_k / binom(d+k-1, k) for the Hermite polynomial through
/// `knots`. The linear solve and the moment sum run in extended precision.
inline double bound_from_knots(int d, int t, std::span<const double> knots) {
  require_dimension(d);
  const auto coeffs = hermite_coefficients<long double>(t, knots);
  long double moment = 0.0L;
  for (int k = 1; k <= t; ++k) moment += coeffs[static_cast<std::size_t>(k - 1)] / binomial_ld(d + k - 1, k);
  return static_cast<double>(std::log(static_cast<long double>(d)) - d * moment);
}

inline double bound_from_knots(int d, int t, std::initializer_list<double> knots) {
  return bound_from_knots(d, t, std::span<const double>(knots.begin(), knots.size()));
}

/// Analytic minimizing knots for t = 2..5, ascending.
inline std::vector<double> optimal_knots_closed_form(int d, int t) {
  require_dimension(d);
  const double dd = d;
  switch (t) {
    case 2:
      return {2.0 / (dd + 1.0)};
    case 3:
      return {2.0 / (dd + 2.0)};
    case 4: {
      const double r = std::sqrt(3.0 * dd * (dd + 2.0));
      const double den = dd * dd + 5.0 * dd + 6.0;
      return {(3.0 * dd + 6.0 - r) / den, (3.0 * dd + 6.0 + r) / den};
    }
    case 5: {
      const double r = std::sqrt(3.0 * (dd * dd + 4.0 * dd + 3.0));
      const double den = dd * dd + 7.0 * dd + 12.0;
      return {(3.0 * dd + 9.0 - r) / den, (3.0 * dd + 9.0 + r) / den};
    }
    default:
      throw Error(Errc::no_closed_form, "analytic knots exist only for t in 2..5");
  }
}

/// ln d - sum_{n=2..d} 1/n
inline double subentropy_bound(int d) {
  require_dimension(d, 1);
  double harmonic = 0.0;
  for (int n = d; n >= 2; --n) harmonic += 1.0 / n;
  return std::log(static_cast<double>(d)) - harmonic;
}

inline bool has_closed_form(DesignOrder t) { return t.is_infinite() || t.value() <= 5; }

inline BoundResult closed_form_bound(int d, DesignOrder t) {
  require_dimension(d);
  BoundResult out{d, t, 0.0, {}, BoundSource::closed_form};
  if (t.is_infinite()) {
    out.value_nats = subentropy_bound(d);
    return out;
  }
  const double x = d;
  switch (t.value()) {
    case 1:
      out.value_nats = std::log(x);
      return out;
    case 2:
      out.value_nats = std::log(2.0 * x / (x + 1.0));
      break;
    case 3:
      out.value_nats = std::log(2.0 * x / (x + 2.0)) + 2.0 * std::log((x + 2.0) / 2.0) / (x * (x + 1.0));
      break;
    case 4: {
      const double r = std::sqrt(3.0 * x * (x + 2.0));
      out.value_nats = 0.5 * std::log(6.0 * x * x / ((x + 2.0) * (x + 3.0))) +
                       (x - 3.0) * r / (6.0 * x * (x + 1.0)) * std::log((2.0 * x + 3.0 - r) / (x + 3.0));
      break;
    }
    case 5: {
      const double r = std::sqrt(3.0 * (x + 1.0) * (x + 3.0));
      const double first = (x - 1.0) * (x + 3.0) * (x * x + 2.0 * x + 4.0) /
                           (2.0 * x * (x + 1.0) * (x + 1.0) * (x + 2.0)) * std::log(6.0 / ((x + 3.0) * (x + 4.0)));
      const double second = std::sqrt(x + 3.0) * (x - 1.0) * (x * x - 2.0 * x - 12.0) /
                            (2.0 * std::sqrt(3.0) * x * std::pow(x + 1.0, 1.5) * (x + 2.0)) *
                            std::log((2.0 * x + 5.0 - r) / (x + 4.0));
      out.value_nats = std::log(x) + first + second;
      break;
    }
    default:
      throw Error(Errc::no_closed_form, "no closed form for t = " + t.to_string() + "; use optimize_knots");
  }
  out.knots = optimal_knots_closed_form(d, t.value());
  return out;
}

/// lim_{d -> inf} W_t(d).
inline double asymptote(DesignOrder t) {
  if (t.is_infinite()) return 1.0 - kEulerGamma;
  switch (t.value()) {
    case 1:
      throw Error(Errc::divergent, "divergent (ln d unbounded)");
    case 2:
    case 3:
      return std::numbers::ln2;
    case 4:
    case 5:
      return std::log(6.0) / 2.0 + std::log(2.0 - std::sqrt(3.0)) / (2.0 * std::sqrt(3.0));
    default:
      throw Error(Errc::no_closed_form, "no known asymptote for t = " + t.to_string());
  }
}

struct KnotSearchOptions {
  unsigned long long seed = 0;
  int restarts = 10;
  double tolerance = 1e-12;
};

namespace detail {

// Knots from unconstrained log-gap coordinates: the m+1 gaps between
// 0, x_1, ..., x_m, 1 are softmax(0, u_1, ..., u_m).
inline std::vector<double> knots_from_log_gaps(const Eigen::VectorXd& u) {
  const auto m = u.size();
  Eigen::VectorXd logits(m + 1);
  logits(0) = 0.0;
  logits.tail(m) = u;
  const double shift = logits.maxCoeff();
  const Eigen::VectorXd w = (logits.array() - shift).exp();
  const double total = w.sum();
  std::vector<double> knots(static_cast<std::size_t>(m));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    acc += w(i) / total;
    knots[static_cast<std::size_t>(i)] = acc;
  }
  return knots;
}

inline Eigen::VectorXd log_gaps_from_knots(std::span<const double> knots) {
  const auto m = static_cast<Eigen::Index>(knots.size());
  Eigen::VectorXd u(m);
  const double first_gap = knots.front();
  for (Eigen::Index i = 0; i < m; ++i) {
    const double next = (i + 1 < m) ? knots[static_cast<std::size_t>(i + 1)] : 1.0;
    u(i) = std::log((next - knots[static_cast<std::size_t>(i)]) / first_gap);
  }
  return u;
}

}  // namespace detail

/// Tightest bound over the knots. Nelder-Mead restarts in log-gap
/// coordinates (seeded at the analytic knots when t <= 5, otherwise at
/// equispaced knots), followed by coordinate-wise golden-section refinement.
inline BoundResult optimize_knots(int d, int t, const KnotSearchOptions& opts = {}) {
  require_dimension(d);
  if (t < 1 || t > 8) throw Error(Errc::invalid_argument, "optimize_knots supports 1 <= t <= 8");
  BoundResult out{d, DesignOrder(t), std::log(static_cast<double>(d)), {}, BoundSource::numeric_optimum};
  const int m = t / 2;
  if (m == 0) return out;

  auto objective_at = [&](std::span<const double> knots) {
    try {
      return bound_from_knots(d, t, knots);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  auto objective = [&](const Eigen::VectorXd& u) { return objective_at(detail::knots_from_log_gaps(u)); };

  std::vector<double> seed_knots;
  if (t <= 5) {
    seed_knots = optimal_knots_closed_form(d, t);
  } else {
    for (int i = 1; i <= m; ++i) seed_knots.push_back(static_cast<double>(i) / (m + 1));
  }
  const Eigen::VectorXd seed_u = detail::log_gaps_from_knots(seed_knots);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> jitter(0.0, 0.5);
  optim::NelderMeadOptions nm;
  nm.f_tolerance = opts.tolerance;
  nm.x_tolerance = 1e-9;
  nm.initial_step = 0.2;

  std::vector<double> best_knots;
  double best_value = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    Eigen::VectorXd start = seed_u;
    if (r > 0) {
      for (Eigen::Index i = 0; i < start.size(); ++i) start(i) += jitter(rng);
    }
    const auto res = optim::nelder_mead(objective, start, nm);
    if (res.value < best_value) {
      best_value = res.value;
      best_knots = detail::knots_from_log_gaps(res.x);
    }
  }
  if (!std::isfinite(best_value)) {
    throw Error(Errc::optimizer_failure, "knot optimizer found no admissible ordered knots for d = " +
                                             std::to_string(d) + ", t = " + std::to_string(t) + " after " +
                                             std::to_string(opts.restarts) + " restarts");
  }

  // Coordinate-wise golden-section sweeps inside the ordering constraints.
  for (int sweep = 0; sweep < 50; ++sweep) {
    const double before = best_value;
    for (int i = 0; i < m; ++i) {
      const double lo = (i == 0 ? 0.0 : best_knots[static_cast<std::size_t>(i - 1)]) + 2 * kMinKnotGap;
      const double hi = (i + 1 == m ? 1.0 : best_knots[static_cast<std::size_t>(i + 1)]) - 2 * kMinKnotGap;
      if (!(lo < hi)) continue;
      std::vector<double> trial = best_knots;
      const auto line = optim::golden_section(
          [&](double x) {
            trial[static_cast<std::size_t>(i)] = x;
            return objective_at(trial);
          },
          lo, hi, 1e-13);
      if (line.value <= best_value) {
        best_value = line.value;
        best_knots[static_cast<std::size_t>(i)] = line.x;
      }
    }
    if (before - best_value <= opts.tolerance) break;
  }

  out.value_nats = best_value;
  out.knots = std::move(best_knots);
  return out;
}

/// Closed form when one exists, otherwise the numeric optimum.
inline BoundResult best_bound(int d, DesignOrder t, const KnotSearchOptions& opts = {}) {
  if (has_closed_form(t)) return closed_form_bound(d, t);
  return optimize_knots(d, t.value(), opts);
}

}  // namespace tdesign
