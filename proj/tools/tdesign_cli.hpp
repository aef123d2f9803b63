#pragma once

// Command-line front end. Exit codes: 0 success, 2 argument error,
// 3 parse error, 4 validation or design failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tdesign/tdesign.hpp"

namespace tdesign::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitValidation = 4;

inline int exit_code_for(Errc code) {
  switch (code) {
    case Errc::parse_error:
      return kExitParse;
    case Errc::not_a_design:
      return kExitValidation;
    default:
      return kExitUsage;
  }
}

/// %.17g, the form used for every CSV float.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct NamedPovm {
  std::string label;
  Povm povm;
};

/// Built-in POVM names: basis:<d>, tetrahedron, octahedron, icosahedron,
/// qutrit-sic. Anything else is read as a JSON POVM file.
inline NamedPovm resolve_povm(const std::string& name) {
  if (name == "tetrahedron") return {name, tetrahedron_povm()};
  if (name == "octahedron") return {name, octahedron_povm()};
  if (name == "icosahedron") return {name, icosahedron_povm()};
  if (name == "qutrit-sic") return {name, qutrit_sic_povm()};
  if (name.rfind("basis:", 0) == 0) {
    const std::string digits = name.substr(6);
    if (digits.empty() || digits.size() > 4 || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
      throw Error(Errc::invalid_argument, "bad basis dimension in " + name);
    }
    const int d = std::stoi(digits);
    if (d < 1) throw Error(Errc::invalid_argument, "basis dimension must be >= 1");
    return {name, basis_povm(d)};
  }
  if (!std::filesystem::is_regular_file(name)) {
    throw Error(Errc::invalid_argument, "unknown POVM name and no such file: " + name);
  }
  return {std::filesystem::path(name).filename().string(), povm_from_json(read_json_file(name))};
}

/// "2,4,8" and "2..16" style integer lists.
inline std::vector<int> parse_dimensions(const std::vector<std::string>& tokens) {
  std::set<int> out;
  auto to_int = [](const std::string& s) {
    if (s.empty() || s.size() > 9 || !std::all_of(s.begin(), s.end(), ::isdigit)) {
      throw Error(Errc::invalid_argument, "bad dimension: " + s);
    }
    return std::stoi(s);
  };
  for (const auto& tok : tokens) {
    const auto dots = tok.find("..");
    if (dots == std::string::npos) {
      out.insert(to_int(tok));
    } else {
      const int lo = to_int(tok.substr(0, dots));
      const int hi = to_int(tok.substr(dots + 2));
      if (hi < lo || hi - lo > 100000) throw Error(Errc::invalid_argument, "bad dimension range: " + tok);
      for (int d = lo; d <= hi; ++d) out.insert(d);
    }
  }
  for (int d : out) {
    if (d < 2) throw Error(Errc::invalid_argument, "dimensions must be >= 2");
  }
  return {out.begin(), out.end()};
}

inline std::vector<DesignOrder> parse_orders(const std::vector<std::string>& tokens) {
  std::set<DesignOrder> out;
  for (const auto& tok : tokens) {
    const auto t = DesignOrder::parse(tok);
    if (!t.is_infinite() && t.value() > 8) throw Error(Errc::invalid_argument, "t must be in 1..8 or inf");
    out.insert(t);
  }
  return {out.begin(), out.end()};
}

enum class Unit { nat, bit };

inline double in_unit(double nats, Unit unit) { return unit == Unit::bit ? nats_to_bits(nats) : nats; }

inline std::string csv_header() { return "d,t,W_nats,W_bits,asymptote_nats,source"; }

struct TableRow {
  BoundResult bound;
  std::optional<double> asymptote_nats;
};

inline std::vector<TableRow> compute_table(const std::vector<int>& dims, const std::vector<DesignOrder>& orders,
                                           unsigned long long seed) {
  std::vector<TableRow> rows;
  for (int d : dims) {
    for (auto t : orders) {
      TableRow row{best_bound(d, t, KnotSearchOptions{seed}), std::nullopt};
      if (t.is_infinite() || (t.value() >= 2 && t.value() <= 5)) row.asymptote_nats = asymptote(t);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline std::string csv_line(const TableRow& row) {
  const auto& b = row.bound;
  return std::to_string(b.d) + "," + b.t.to_string() + "," + format_double(b.value_nats) + "," +
         format_double(nats_to_bits(b.value_nats)) + "," +
         (row.asymptote_nats ? format_double(*row.asymptote_nats) : std::string()) + "," + to_string(b.source);
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Informational-power bounds for quantum t-designs", "tdesign"};
  app.require_subcommand(1);
  unsigned long long seed = 0;
  app.add_option("--seed", seed, "Seed for every stochastic routine")->capture_default_str();

  const std::map<std::string, Unit> unit_map{{"nat", Unit::nat}, {"bit", Unit::bit}};

  // bound
  auto* bound_cmd = app.add_subcommand("bound", "Upper bound W_t(d) for one (d, t)");
  int bound_d = 0;
  std::string bound_t;
  Unit bound_unit = Unit::nat;
  bool bound_numeric = false;
  bound_cmd->add_option("-d,--dim", bound_d, "Hilbert-space dimension (>= 2)")->required();
  bound_cmd->add_option("-t,--order", bound_t, "Design order: 1..8 or inf")->required();
  bound_cmd->add_option("--unit", bound_unit, "nat or bit")->transform(CLI::CheckedTransformer(unit_map));
  bound_cmd->add_flag("--numeric", bound_numeric, "Force numeric knot optimization");

  // table
  auto* table_cmd = app.add_subcommand("table", "Sweep of W_t(d) over dimensions and orders");
  std::vector<std::string> table_d, table_t{"1", "2", "3", "4", "5", "inf"};
  Unit table_unit = Unit::nat;
  std::string table_format = "csv";
  table_cmd->add_option("-d,--dims", table_d, "Dimensions, e.g. 2,4,8 or 2..64")->delimiter(',');
  table_cmd->add_option("-t,--orders", table_t, "Orders, e.g. 1,2,3,inf")->delimiter(',')->capture_default_str();
  table_cmd->add_option("--unit", table_unit, "Unit of the JSON \"W\" field")->transform(CLI::CheckedTransformer(unit_map));
  table_cmd->add_option("--format", table_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  // verify-design
  auto* verify_cmd = app.add_subcommand("verify-design", "Moment check of a POVM against t-design identities");
  std::string verify_name;
  int verify_tmax = 6;
  verify_cmd->add_option("povm", verify_name, "basis:<d>, tetrahedron, octahedron, icosahedron, qutrit-sic or a JSON file")
      ->required();
  verify_cmd->add_option("--tmax", verify_tmax, "Largest order to test")->check(CLI::Range(1, 64));

  // tightness
  auto* tight_cmd = app.add_subcommand("tightness", "Bound versus achieved information for a design POVM");
  std::string tight_name;
  std::optional<int> tight_t;
  int tight_restarts = 32;
  tight_cmd->add_option("povm", tight_name, "Built-in POVM name or JSON file")->required();
  tight_cmd->add_option("-t,--order", tight_t, "Design order (default: certified order up to 6)");
  tight_cmd->add_option("--restarts", tight_restarts, "Ensemble-search restarts")->check(CLI::Range(1, 100000));

  // mutinfo
  auto* mi_cmd = app.add_subcommand("mutinfo", "Mutual information of a serialized (ensemble, POVM) pair");
  std::string mi_ensemble, mi_povm;
  mi_cmd->add_option("ensemble", mi_ensemble, "Ensemble JSON file")->required();
  mi_cmd->add_option("povm", mi_povm, "POVM JSON file or built-in name")->required();

  // export
  auto* export_cmd = app.add_subcommand("export", "Print a built-in POVM (or its antipodal ensemble) as JSON");
  std::string export_name;
  bool export_antipodal = false;
  export_cmd->add_option("povm", export_name, "Built-in POVM name")->required();
  export_cmd->add_flag("--antipodal", export_antipodal, "Emit the antipodal qubit ensemble instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*bound_cmd) {
      const auto t = DesignOrder::parse(bound_t);
      if (!t.is_infinite() && t.value() > 8) throw Error(Errc::invalid_argument, "t must be in 1..8 or inf");
      BoundResult r;
      if (bound_numeric) {
        if (t.is_infinite()) throw Error(Errc::invalid_argument, "--numeric needs a finite t");
        r = optimize_knots(bound_d, t.value(), KnotSearchOptions{seed});
      } else {
        r = best_bound(bound_d, t, KnotSearchOptions{seed});
      }
      Json j = to_json(r);
      j["unit"] = bound_unit == Unit::bit ? "bit" : "nat";
      j["value"] = in_unit(r.value_nats, bound_unit);
      out << j.dump() << "\n";
      return kExitOk;
    }

    if (*table_cmd) {
      if (table_d.empty()) throw Error(Errc::invalid_argument, "empty dimension list");
      const auto dims = parse_dimensions(table_d);
      const auto orders = parse_orders(table_t);
      if (orders.empty()) throw Error(Errc::invalid_argument, "empty order list");
      const auto rows = compute_table(dims, orders, seed);
      if (table_format == "csv") {
        out << csv_header() << "\n";
        for (const auto& row : rows) out << csv_line(row) << "\n";
      } else {
        Json arr = Json::array();
        for (const auto& row : rows) {
          Json j = to_json(row.bound);
          j["W"] = in_unit(row.bound.value_nats, table_unit);
          j["unit"] = table_unit == Unit::bit ? "bit" : "nat";
          j["asymptote_nats"] = row.asymptote_nats ? Json(*row.asymptote_nats) : Json(nullptr);
          arr.push_back(std::move(j));
        }
        out << arr.dump(2) << "\n";
      }
      return kExitOk;
    }

    if (*verify_cmd) {
      const auto named = resolve_povm(verify_name);
      const auto validation = validate_povm(named.povm);
      Json j{{"povm", named.label},
             {"dim", named.povm.dim},
             {"n_effects", named.povm.size()},
             {"validation", to_json(validation)}};
      if (!validation.ok()) {
        out << j.dump(2) << "\n";
        err << "POVM failed validation\n";
        return kExitValidation;
      }
      const auto report = check_t_design(named.povm, verify_tmax);
      int order = 0;
      for (const auto& [k, ok] : report.verdict) {
        if (!ok) break;
        order = k;
      }
      j["tmax"] = verify_tmax;
      j["report"] = to_json(report);
      j["design_order"] = order;
      out << j.dump(2) << "\n";
      return kExitOk;
    }

    if (*tight_cmd) {
      const auto named = resolve_povm(tight_name);
      if (!validate_povm(named.povm).ok()) {
        err << "POVM failed validation\n";
        return kExitValidation;
      }
      int t = 0;
      if (tight_t) {
        t = *tight_t;
      } else {
        int t_max = 6;
        while (t_max > 1 && checked_power(named.povm.dim, t_max, kDefaultDimensionCap) == 0) --t_max;
        t = design_order(named.povm, t_max);
      }
      if (t < 1) throw Error(Errc::not_a_design, "not a t-design for any t >= 1");
      InfoSearchSettings settings;
      settings.seed = seed;
      settings.restarts = tight_restarts;
      out << to_json(tightness_report(named.povm, t, named.label, settings)).dump(2) << "\n";
      return kExitOk;
    }

    if (*mi_cmd) {
      const auto ensemble = ensemble_from_json(read_json_file(mi_ensemble));
      const auto named = resolve_povm(mi_povm);
      if (!validate_povm(named.povm).ok()) {
        err << "POVM failed validation\n";
        return kExitValidation;
      }
      const double mi = mutual_information(ensemble, named.povm);
      out << Json{{"dim", ensemble.dim},
                  {"n_inputs", ensemble.size()},
                  {"n_outcomes", named.povm.size()},
                  {"mutual_information_nats", mi},
                  {"mutual_information_bits", nats_to_bits(mi)}}
                 .dump(2)
          << "\n";
      return kExitOk;
    }

    if (*export_cmd) {
      const auto named = resolve_povm(export_name);
      out << (export_antipodal ? to_json(antipodal_ensemble(named.povm)) : to_json(named.povm)).dump() << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kExitUsage;
}

}  // namespace tdesign::cli
