#pragma once

// JSON encodings of POVMs, ensembles, polynomials and reports.
//
//   POVM      {"dim": d, "effects": [M_1, M_2, ...]}
//   Ensemble  {"dim": d, "states": [v_1, v_2, ...], "weights": [w_1, ...]}
//
// Matrices are row-major nested arrays and every complex entry is a
// two-element array [re, im]. Doubles are written in shortest round-trip
// form, so parsing reproduces them bit for bit.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "tdesign/bounds.hpp"
#include "tdesign/designs.hpp"
#include "tdesign/info.hpp"
#include "tdesign/interp.hpp"
#include "tdesign/qcore.hpp"

namespace tdesign {

using Json = nlohmann::json;

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& what) { throw Error(Errc::parse_error, "malformed JSON: " + what); }

inline Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    parse_fail("complex entries must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline int dim_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer()) parse_fail("missing integer \"dim\"");
  const int dim = j["dim"].get<int>();
  if (dim < 1) parse_fail("\"dim\" must be positive");
  return dim;
}

}  // namespace detail

inline Json to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

inline Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const Json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) detail::parse_fail("matrix must have dim rows");
  ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) detail::parse_fail("matrix rows must have dim entries");
    for (int c = 0; c < dim; ++c) m(r, c) = detail::complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

inline ComplexVector vector_from_json(const Json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) detail::parse_fail("state vectors must have dim entries");
  ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = detail::complex_from_json(j[static_cast<std::size_t>(i)]);
  return v;
}

inline Json to_json(const Povm& povm) {
  Json effects = Json::array();
  for (const auto& e : povm.effects) effects.push_back(to_json(e.matrix));
  return Json{{"dim", povm.dim}, {"effects", std::move(effects)}};
}

inline Povm povm_from_json(const Json& j) {
  const int dim = detail::dim_from_json(j);
  if (!j.contains("effects") || !j["effects"].is_array() || j["effects"].empty()) {
    detail::parse_fail("missing non-empty \"effects\" array");
  }
  std::vector<ComplexMatrix> matrices;
  for (const auto& e : j["effects"]) matrices.push_back(matrix_from_json(e, dim));
  return make_povm(matrices);
}

inline Json to_json(const Ensemble& ensemble) {
  Json states = Json::array();
  Json weights = Json::array();
  for (const auto& m : ensemble.members) {
    states.push_back(to_json(m.state.amplitudes));
    weights.push_back(m.weight);
  }
  return Json{{"dim", ensemble.dim}, {"states", std::move(states)}, {"weights", std::move(weights)}};
}

inline Ensemble ensemble_from_json(const Json& j) {
  const int dim = detail::dim_from_json(j);
  if (!j.contains("states") || !j["states"].is_array() || !j.contains("weights") || !j["weights"].is_array()) {
    detail::parse_fail("ensemble needs \"states\" and \"weights\" arrays");
  }
  const auto& states = j["states"];
  const auto& weights = j["weights"];
  if (states.size() != weights.size() || states.empty()) detail::parse_fail("\"states\" and \"weights\" lengths differ");
  std::vector<EnsembleMember> members;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!weights[i].is_number()) detail::parse_fail("weights must be numbers");
    members.push_back({make_pure_state(vector_from_json(states[i], dim)), weights[i].get<double>()});
  }
  return make_ensemble(std::move(members));
}

inline Json to_json(const LowerPolynomial& poly) {
  return Json{{"t", poly.t}, {"coeffs", poly.coeffs}, {"knots", poly.knots}};
}

inline Json design_order_json(DesignOrder t) {
  return t.is_infinite() ? Json("inf") : Json(t.value());
}

inline Json to_json(const BoundResult& r) {
  return Json{{"d", r.d},
              {"t", design_order_json(r.t)},
              {"value_nats", r.value_nats},
              {"value_bits", nats_to_bits(r.value_nats)},
              {"knots", r.knots},
              {"source", to_string(r.source)}};
}

inline Json to_json(const DesignCheckReport& report) {
  Json residuals = Json::object();
  Json verdicts = Json::object();
  for (const auto& [k, r] : report.per_k_residual) residuals[std::to_string(k)] = r;
  for (const auto& [k, ok] : report.verdict) verdicts[std::to_string(k)] = ok;
  return Json{{"claimed_t", report.claimed_t},
              {"tolerance", report.tolerance},
              {"per_k_residual", std::move(residuals)},
              {"verdict", std::move(verdicts)},
              {"passed", report.passed()}};
}

inline Json to_json(const PovmValidation& v) {
  return Json{{"max_psd_violation", v.max_psd_violation},
              {"max_upper_violation", v.max_upper_violation},
              {"max_hermitian_residual", v.max_hermitian_residual},
              {"completeness_residual", v.completeness_residual},
              {"trace_residual", v.trace_residual},
              {"ok", v.ok()}};
}

inline Json to_json(const TightnessReport& r) {
  return Json{{"povm_label", r.povm_label}, {"d", r.d},
              {"design_t", r.design_t},     {"bound_nats", r.bound_nats},
              {"achieved_nats", r.achieved_nats}, {"gap", r.gap},
              {"method", r.method}};
}

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(Errc::parse_error, std::string("malformed JSON: ") + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str());
}

}  // namespace tdesign
