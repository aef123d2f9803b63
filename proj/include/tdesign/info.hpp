#pragma once

// Mutual information of (ensemble, POVM) pairs, a best-effort search for the
// informational power of a POVM, and tightness reports comparing the two
// against the design bounds.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "tdesign/bounds.hpp"
#include "tdesign/designs.hpp"
#include "tdesign/optim.hpp"
#include "tdesign/qcore.hpp"

namespace tdesign {

/// Returned by relative_entropy when p has support where q vanishes.
inline constexpr double kInfiniteDivergence = std::numeric_limits<double>::infinity();

inline bool is_infinite_divergence(double v) { return v == kInfiniteDivergence; }

/// D(p || q) = sum p ln(p / q) in nats, with 0 ln(0/q) = 0.
inline double relative_entropy(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(Errc::dimension_mismatch, "relative_entropy: length mismatch");
  double sum_p = 0.0, sum_q = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) throw Error(Errc::invalid_argument, "relative_entropy: negative probability");
    sum_p += p[i];
    sum_q += q[i];
  }
  if (std::abs(sum_p - 1.0) > 1e-10 || std::abs(sum_q - 1.0) > 1e-10) {
    throw Error(Errc::invalid_argument, "relative_entropy: distributions must sum to one");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return kInfiniteDivergence;
    d += p[i] * std::log(p[i] / q[i]);
  }
  return d;
}

/// I(X;Y) = D(p_xy || p_x p_y) for p_xy = w_x <psi_x|pi_y|psi_x>.
inline double mutual_information(const Ensemble& ensemble, const Povm& povm) {
  const JointDistribution joint = born_joint(ensemble, povm);
  const auto n_in = joint.probs.rows(), n_out = joint.probs.cols();
  std::vector<double> p, q;
  p.reserve(static_cast<std::size_t>(n_in * n_out));
  q.reserve(p.capacity());
  const double total = joint.probs.sum();
  for (Eigen::Index x = 0; x < n_in; ++x) {
    for (Eigen::Index y = 0; y < n_out; ++y) {
      p.push_back(joint.probs(x, y) / total);
      q.push_back(joint.row_marginals(x) * joint.col_marginals(y) / (total * total));
    }
  }
  return std::max(0.0, relative_entropy(p, q));
}

struct InfoSearchSettings {
  unsigned long long seed = 0;
  int restarts = 32;
  int max_outer_iterations = 15;
  int blahut_arimoto_iterations = 500;
  int random_probes = 4;
  double capacity_gap = 1e-11;
  double polish_step_floor = 1e-9;
  int polish_max_evaluations = 40000;
  int max_dim = 4;
  int threads = 0;  // 0: hardware concurrency
};

struct InfoSearchResult {
  Ensemble ensemble;
  double value_nats = 0.0;
};

namespace detail {

// Outcome distribution <psi|pi_y|psi> of one input state.
inline std::vector<double> outcome_row(const Povm& povm, const ComplexVector& psi) {
  std::vector<double> row(povm.size());
  for (std::size_t y = 0; y < povm.size(); ++y) {
    row[y] = std::max(0.0, psi.dot(povm.effects[y].matrix * psi).real());
  }
  return row;
}

inline double divergence_to(const std::vector<double>& row, const std::vector<double>& q) {
  double d = 0.0;
  for (std::size_t y = 0; y < row.size(); ++y) {
    if (row[y] <= 0.0) continue;
    if (q[y] <= 0.0) return kInfiniteDivergence;
    d += row[y] * std::log(row[y] / q[y]);
  }
  return d;
}

inline ComplexVector vector_from_reals(const Eigen::VectorXd& v, Eigen::Index offset, int d) {
  ComplexVector psi(d);
  for (int i = 0; i < d; ++i) psi(i) = Complex(v(offset + 2 * i), v(offset + 2 * i + 1));
  return psi;
}

inline void reals_from_vector(const ComplexVector& psi, Eigen::VectorXd& v, Eigen::Index offset) {
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    v(offset + 2 * i) = psi(i).real();
    v(offset + 2 * i + 1) = psi(i).imag();
  }
}

// Pool of candidate input states with Blahut-Arimoto weights.
struct CandidatePool {
  std::vector<ComplexVector> states;
  std::vector<std::vector<double>> rows;
  std::vector<double> weights;

  void add(const Povm& povm, ComplexVector psi) {
    psi.normalize();
    rows.push_back(outcome_row(povm, psi));
    states.push_back(std::move(psi));
    weights.push_back(0.0);
  }

  std::vector<double> output(std::size_t n_out) const {
    std::vector<double> q(n_out, 0.0);
    for (std::size_t x = 0; x < states.size(); ++x) {
      for (std::size_t y = 0; y < n_out; ++y) q[y] += weights[x] * rows[x][y];
    }
    return q;
  }

  // Blahut-Arimoto on the fixed pool; returns the mutual information.
  double blahut_arimoto(std::size_t n_out, int iterations, double gap) {
    const std::size_t n = states.size();
    double positive = 0.0;
    for (double w : weights) positive += w;
    if (positive <= 0.0) {
      std::fill(weights.begin(), weights.end(), 1.0 / static_cast<double>(n));
    } else {
      // Fresh candidates get a small share so they can grow.
      for (double& w : weights) w = 0.9 * w / positive + 0.1 / static_cast<double>(n);
    }
    std::vector<double> div(n);
    double info = 0.0;
    for (int it = 0; it < iterations; ++it) {
      const auto q = output(n_out);
      double max_div = -kInfiniteDivergence;
      info = 0.0;
      for (std::size_t x = 0; x < n; ++x) {
        div[x] = divergence_to(rows[x], q);
        info += weights[x] * div[x];
        max_div = std::max(max_div, div[x]);
      }
      if (max_div - info <= gap) break;
      double z = 0.0;
      for (std::size_t x = 0; x < n; ++x) {
        weights[x] *= std::exp(div[x] - max_div);
        z += weights[x];
      }
      for (double& w : weights) w /= z;
    }
    return info;
  }

  // Folds states with fidelity above `fidelity` into the heavier one.
  void merge_duplicates(double fidelity) {
    std::vector<std::size_t> order(states.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
    std::vector<bool> absorbed(states.size(), false);
    for (std::size_t i = 0; i < order.size(); ++i) {
      const std::size_t a = order[i];
      if (absorbed[a]) continue;
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        const std::size_t b = order[j];
        if (absorbed[b] || std::norm(states[a].dot(states[b])) <= fidelity) continue;
        weights[a] += weights[b];
        weights[b] = 0.0;
        absorbed[b] = true;
      }
    }
  }

  void drop_below(double threshold) {
    std::size_t keep = 0;
    for (std::size_t x = 0; x < states.size(); ++x) {
      if (weights[x] < threshold) continue;
      if (keep != x) {
        states[keep] = std::move(states[x]);
        rows[keep] = std::move(rows[x]);
        weights[keep] = weights[x];
      }
      ++keep;
    }
    states.resize(keep);
    rows.resize(keep);
    weights.resize(keep);
  }
};

// Merges near-identical states and keeps the `cap` heaviest members.
inline Ensemble compact_ensemble(const CandidatePool& pool, std::size_t cap, int d) {
  std::vector<std::size_t> order(pool.states.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pool.weights[a] > pool.weights[b]; });
  std::vector<ComplexVector> kept;
  std::vector<double> weights;
  for (std::size_t idx : order) {
    if (pool.weights[idx] <= 0.0) continue;
    bool merged = false;
    for (std::size_t j = 0; j < kept.size(); ++j) {
      if (std::norm(kept[j].dot(pool.states[idx])) > 1.0 - 1e-5) {
        weights[j] += pool.weights[idx];
        merged = true;
        break;
      }
    }
    if (!merged) {
      kept.push_back(pool.states[idx]);
      weights.push_back(pool.weights[idx]);
    }
  }
  if (kept.empty()) {
    ComplexVector e = ComplexVector::Zero(d);
    e(0) = 1.0;
    kept.push_back(e);
    weights.push_back(1.0);
  }
  if (kept.size() > cap) {
    // Re-sort after merging; weights may have changed order.
    std::vector<std::size_t> idx(kept.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
    idx.resize(cap);
    std::vector<ComplexVector> k2;
    std::vector<double> w2;
    for (auto i : idx) {
      k2.push_back(kept[i]);
      w2.push_back(weights[i]);
    }
    kept = std::move(k2);
    weights = std::move(w2);
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<EnsembleMember> members;
  for (std::size_t j = 0; j < kept.size(); ++j) members.push_back({make_pure_state(kept[j]), weights[j] / total});
  return make_ensemble(std::move(members));
}

inline Ensemble ensemble_from_params(const Eigen::VectorXd& v, std::size_t n, int d) {
  const Eigen::Index stride = 2 * d;
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = v(static_cast<Eigen::Index>(n) * stride + static_cast<Eigen::Index>(j));
    total += s * s;
  }
  if (!(total > 0.0)) throw Error(Errc::degenerate_state, "all ensemble weights vanished");
  std::vector<EnsembleMember> members;
  members.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = v(static_cast<Eigen::Index>(n) * stride + static_cast<Eigen::Index>(j));
    members.push_back({make_pure_state(vector_from_reals(v, static_cast<Eigen::Index>(j) * stride, d)), s * s / total});
  }
  return Ensemble{d, std::move(members)};
}

// One restart: column generation around Blahut-Arimoto, then a compass
// search polish of the compacted (<= d^2 member) ensemble.
template <class Rng>
InfoSearchResult search_restart(const Povm& povm, const InfoSearchSettings& settings, Rng& rng) {
  const int d = povm.dim;
  const std::size_t n_out = povm.size();
  const std::size_t cap = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);

  CandidatePool pool;
  for (std::size_t i = 0; i < 2 * cap; ++i) pool.add(povm, haar_random_state(d, rng).amplitudes);

  optim::NelderMeadOptions nm;
  nm.initial_step = 0.2;
  nm.f_tolerance = 1e-14;
  nm.x_tolerance = 1e-9;
  nm.max_evaluations = 4000;

  for (int outer = 0; outer < settings.max_outer_iterations; ++outer) {
    const double info = pool.blahut_arimoto(n_out, settings.blahut_arimoto_iterations, settings.capacity_gap);
    pool.merge_duplicates(1.0 - 1e-8);
    pool.drop_below(1e-10);
    const auto q = pool.output(n_out);
    auto neg_divergence = [&](const Eigen::VectorXd& v) {
      ComplexVector psi = vector_from_reals(v, 0, d);
      const double norm = psi.norm();
      if (!(norm > 1e-12)) return kInfiniteDivergence;
      psi /= norm;
      return -divergence_to(outcome_row(povm, psi), q);
    };

    std::vector<ComplexVector> starts;
    for (std::size_t x = 0; x < pool.states.size(); ++x) {
      if (pool.weights[x] > 1e-6 && starts.size() < 2 * cap) starts.push_back(pool.states[x]);
    }
    for (int i = 0; i < settings.random_probes; ++i) starts.push_back(haar_random_state(d, rng).amplitudes);

    double best_divergence = -kInfiniteDivergence;
    for (const auto& s : starts) {
      Eigen::VectorXd v(2 * d);
      reals_from_vector(s, v, 0);
      const auto res = optim::nelder_mead(neg_divergence, v, nm);
      if (!std::isfinite(res.value)) continue;
      best_divergence = std::max(best_divergence, -res.value);
      pool.add(povm, vector_from_reals(res.x, 0, d));
    }
    // Max divergence to the output distribution upper-bounds the capacity.
    if (best_divergence - info <= settings.capacity_gap) break;
  }
  pool.blahut_arimoto(n_out, settings.blahut_arimoto_iterations, settings.capacity_gap);

  Ensemble compact = compact_ensemble(pool, cap, d);
  const std::size_t n = compact.size();
  Eigen::VectorXd params(static_cast<Eigen::Index>(n) * (2 * d + 1));
  for (std::size_t j = 0; j < n; ++j) {
    reals_from_vector(compact.members[j].state.amplitudes, params, static_cast<Eigen::Index>(j) * 2 * d);
    params(static_cast<Eigen::Index>(n) * 2 * d + static_cast<Eigen::Index>(j)) = std::sqrt(compact.members[j].weight);
  }
  auto neg_info = [&](const Eigen::VectorXd& v) {
    try {
      return -mutual_information(ensemble_from_params(v, n, d), povm);
    } catch (const Error&) {
      return kInfiniteDivergence;
    }
  };
  optim::PatternSearchOptions ps;
  ps.initial_step = 1e-3;
  ps.step_floor = settings.polish_step_floor;
  ps.max_evaluations = settings.polish_max_evaluations;
  const auto polished = optim::pattern_search(neg_info, params, ps);

  InfoSearchResult out{compact, mutual_information(compact, povm)};
  if (std::isfinite(polished.value)) {
    Ensemble candidate = ensemble_from_params(polished.x, n, d);
    const double value = mutual_information(candidate, povm);
    if (value > out.value_nats) out = InfoSearchResult{std::move(candidate), value};
  }
  return out;
}

}  // namespace detail

/// Best-found informational power of `povm`: a lower bound on the true
/// supremum, attained by the returned ensemble of at most d^2 pure states.
/// Restarts are seeded from (settings.seed, restart index), so the result is
/// deterministic.
inline InfoSearchResult maximize_mutual_information(const Povm& povm, const InfoSearchSettings& settings = {}) {
  if (povm.dim > settings.max_dim) {
    throw Error(Errc::dimension_cap, "maximize_mutual_information supports d <= " + std::to_string(settings.max_dim));
  }
  if (settings.restarts < 1) throw Error(Errc::invalid_argument, "need at least one restart");
  auto run = [&](int r) {
    std::seed_seq seq{static_cast<unsigned long long>(settings.seed), static_cast<unsigned long long>(r)};
    std::mt19937_64 rng(seq);
    return detail::search_restart(povm, settings, rng);
  };
  const int workers = std::max(
      1, std::min(settings.restarts, settings.threads > 0 ? settings.threads
                                                          : static_cast<int>(std::thread::hardware_concurrency())));
  std::vector<std::optional<InfoSearchResult>> results(static_cast<std::size_t>(settings.restarts));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < settings.restarts; r = next++) results[static_cast<std::size_t>(r)] = run(r);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  // Reduction in restart order keeps the result independent of scheduling.
  InfoSearchResult best = std::move(*results.front());
  for (std::size_t r = 1; r < results.size(); ++r) {
    if (results[r]->value_nats > best.value_nats) best = std::move(*results[r]);
  }
  return best;
}

/// Largest normalized overlap <psi_x|pi_y|psi_x>/Tr[pi_y] after matching each
/// member with its least-overlapping effect; zero for antipodal ensembles.
inline double matched_overlap(const Ensemble& ensemble, const Povm& povm) {
  double worst = 0.0;
  for (const auto& m : ensemble.members) {
    double least = std::numeric_limits<double>::infinity();
    for (const auto& e : povm.effects) {
      if (e.trace > 0.0) least = std::min(least, expectation(m.state, e.matrix) / e.trace);
    }
    worst = std::max(worst, least);
  }
  return worst;
}

struct TightnessReport {
  std::string povm_label;
  int d = 0;
  int design_t = 0;
  double bound_nats = 0.0;
  double achieved_nats = 0.0;
  double gap = 0.0;
  std::string method;  // "antipodal" or "search"
};

inline bool is_rank_one_qubit(const Povm& povm) {
  if (povm.dim != 2) return false;
  for (const auto& e : povm.effects) {
    if (!(e.trace > 0.0) || std::abs(hermitian_eigenvalues(e.matrix)(0)) > kPsdTolerance) return false;
  }
  return true;
}

/// Compares the t-design bound with the information actually reached: the
/// antipodal ensemble for rank-one qubit POVMs, the ensemble search otherwise.
inline TightnessReport tightness_report(const Povm& povm, int t, const std::string& label,
                                        const InfoSearchSettings& settings = {}) {
  const auto check = check_t_design(povm, t);
  if (!check.passed()) {
    throw Error(Errc::not_a_design, "not a t-design: " + label + " fails the moment check at k = " +
                                        std::to_string(check.first_failure().value_or(0)));
  }
  TightnessReport report;
  report.povm_label = label;
  report.d = povm.dim;
  report.design_t = t;
  report.bound_nats = best_bound(povm.dim, DesignOrder(t), KnotSearchOptions{settings.seed}).value_nats;
  if (is_rank_one_qubit(povm)) {
    report.achieved_nats = mutual_information(antipodal_ensemble(povm), povm);
    report.method = "antipodal";
  } else {
    report.achieved_nats = maximize_mutual_information(povm, settings).value_nats;
    report.method = "search";
  }
  report.gap = report.bound_nats - report.achieved_nats;
  return report;
}

}  // namespace tdesign
