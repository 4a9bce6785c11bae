#pragma once

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include <json.hpp>  // vendored single-header copy
#endif

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "grusslab/cpmaps.hpp"
#include "grusslab/norms.hpp"
#include "grusslab/stinespring.hpp"
#include "grusslab/sweep.hpp"

namespace grusslab {

using Json = nlohmann::json;  // std::map-backed: keys serialize sorted

// ---------------------------------------------------------------------------
// Matrix JSON: {"rows": r, "cols": c, "data": [[re, im], ...]} row-major.
// ---------------------------------------------------------------------------

inline Json matrix_to_json(const ComplexMatrix& a) {
  Json data = Json::array();
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      data.push_back(Json::array({a(i, j).real(), a(i, j).imag()}));
  return Json{{"rows", a.rows()}, {"cols", a.cols()}, {"data", std::move(data)}};
}

inline ComplexMatrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected a matrix object");
  for (const char* field : {"rows", "cols", "data"})
    if (!j.contains(field)) throw ConfigError(where + ": missing field '" + field + "'");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
    throw ConfigError(where + ": fields 'rows'/'cols' must be integers");
  const Index rows = j["rows"].get<Index>();
  const Index cols = j["cols"].get<Index>();
  if (rows < 0 || cols < 0) throw ConfigError(where + ": negative dimensions");
  const Json& data = j["data"];
  if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols)
    throw ConfigError(where + ": field 'data' must hold rows*cols = " +
                      std::to_string(rows * cols) + " entries");
  ComplexMatrix a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index jx = 0; jx < cols; ++jx) {
      const Json& entry = data[static_cast<std::size_t>(i * cols + jx)];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
          !entry[1].is_number())
        throw ConfigError(where + ": field 'data[" + std::to_string(i * cols + jx) +
                          "]' must be a [re, im] pair");
      a(i, jx) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  require_finite(a, where.c_str());
  return a;
}

// ---------------------------------------------------------------------------
// Map JSON: {"kind":"kraus",...} | {"kind":"choi",...} | {"kind":"reduction",...}
// ---------------------------------------------------------------------------

inline Json map_to_json(const PositiveMap& map) {
  if (const auto* k = map.get_if<KrausMap>()) {
    Json kraus = Json::array();
    for (const auto& op : k->kraus) kraus.push_back(matrix_to_json(op));
    return Json{{"kind", "kraus"}, {"m", k->input_dim}, {"n", k->output_dim},
                {"kraus", std::move(kraus)}};
  }
  if (const auto* c = map.get_if<ChoiMatrix>()) {
    return Json{{"kind", "choi"}, {"m", c->input_dim}, {"n", c->output_dim},
                {"C", matrix_to_json(c->c)}};
  }
  const auto& r = *map.get_if<ReductionMap>();
  return Json{{"kind", "reduction"}, {"d", r.dim}, {"normalize", r.normalized}};
}

inline PositiveMap map_from_json(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError(where + ": expected a map object with a 'kind' field");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "kraus") {
    for (const char* field : {"m", "n", "kraus"})
      if (!j.contains(field)) throw ConfigError(where + ": missing field '" + field + "'");
    KrausMap map{j["m"].get<Index>(), j["n"].get<Index>(), {}};
    if (!j["kraus"].is_array() || j["kraus"].empty())
      throw ConfigError(where + ": field 'kraus' must be a nonempty array");
    for (std::size_t i = 0; i < j["kraus"].size(); ++i)
      map.kraus.push_back(
          matrix_from_json(j["kraus"][i], where + ".kraus[" + std::to_string(i) + "]"));
    validate(map);
    return map;
  }
  if (kind == "choi") {
    for (const char* field : {"m", "n", "C"})
      if (!j.contains(field)) throw ConfigError(where + ": missing field '" + field + "'");
    ChoiMatrix choi{j["m"].get<Index>(), j["n"].get<Index>(),
                    matrix_from_json(j["C"], where + ".C")};
    if (choi.c.rows() != choi.input_dim * choi.output_dim || choi.c.rows() != choi.c.cols())
      throw ConfigError(where + ": field 'C' must be square of size m*n");
    return choi;
  }
  if (kind == "reduction") {
    for (const char* field : {"d", "normalize"})
      if (!j.contains(field)) throw ConfigError(where + ": missing field '" + field + "'");
    return reduction_map(j["d"].get<Index>(), j["normalize"].get<bool>());
  }
  throw ConfigError(where + ": unknown map kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Dilation JSON: {"m","n","r","V":Matrix,"minimal":bool}
// ---------------------------------------------------------------------------

inline Json dilation_to_json(const StinespringDilation& d) {
  return Json{{"m", d.input_dim}, {"n", d.output_dim}, {"r", d.multiplicity},
              {"V", matrix_to_json(d.v)}, {"minimal", d.minimal}};
}

inline StinespringDilation dilation_from_json(const Json& j, const std::string& where) {
  for (const char* field : {"m", "n", "r", "V", "minimal"})
    if (!j.contains(field)) throw ConfigError(where + ": missing field '" + field + "'");
  StinespringDilation d{j["m"].get<Index>(), j["n"].get<Index>(), j["r"].get<Index>(),
                        matrix_from_json(j["V"], where + ".V"), j["minimal"].get<bool>()};
  if (d.v.rows() != d.input_dim * d.multiplicity || d.v.cols() != d.output_dim)
    throw ConfigError(where + ": field 'V' must be (m*r) x n");
  return d;
}

// ---------------------------------------------------------------------------
// Reports, witnesses, sweep aggregates
// ---------------------------------------------------------------------------

inline Json report_to_json(const InequalityReport& r) {
  Json details(Json::value_t::object);
  for (const auto& [key, value] : r.details) details[key] = value;
  Json out{{"check_id", to_string(r.check_id)},
           {"gauge", r.gauge},
           {"lhs", r.lhs},
           {"rhs", r.rhs},
           {"slack", r.slack},
           {"satisfied", r.satisfied},
           {"tol", r.tol},
           {"seed", r.seed},
           {"digest", r.digest},
           {"dims", Json{{"m", r.m}, {"n", r.n}, {"k", r.k}, {"rank", r.rank}}},
           {"details", std::move(details)}};
  if (r.exploratory) out["exploratory"] = true;
  return out;
}

inline Json witness_to_json(const SweepWitness& w) {
  Json inputs(Json::value_t::object);
  for (const auto& [name, mat] : w.inputs) inputs[name] = matrix_to_json(mat);
  return Json{{"digest", w.digest}, {"check_id", to_string(w.check_id)}, {"seed", w.seed},
              {"inputs", std::move(inputs)}};
}

inline Json config_to_json(const CheckConfig& cfg) {
  Json gauges = Json::array();
  for (const auto& g : (cfg.gauges.empty() ? default_gauges() : cfg.gauges))
    gauges.push_back(to_string(g));
  Json checks = Json::array();
  for (CheckId id : cfg.checks) checks.push_back(to_string(id));
  return Json{{"m", cfg.m},       {"n", cfg.n},     {"rank", cfg.kraus_rank},
              {"trials", cfg.trials}, {"seed", cfg.seed}, {"gauges", std::move(gauges)},
              {"tol", cfg.tol},   {"checks", std::move(checks)}, {"eta", cfg.eta}};
}

inline Json aggregate_to_json(const SweepAggregate& agg) {
  Json min_slack(Json::value_t::object);
  for (const auto& [key, value] : agg.min_slack_by_check) min_slack[key] = value;
  Json by_check(Json::value_t::object);
  for (const auto& [key, value] : agg.violations_by_check) by_check[key] = value;
  Json violating = Json::array();
  for (const auto& r : agg.violating_reports) violating.push_back(report_to_json(r));
  Json errors = Json::array();
  for (const auto& e : agg.error_messages) errors.push_back(e);
  return Json{{"trials", agg.trials},
              {"violations", agg.violations},
              {"errors", agg.errors},
              {"min_slack_by_check", std::move(min_slack)},
              {"violations_by_check", std::move(by_check)},
              {"violating_reports", std::move(violating)},
              {"error_messages", std::move(errors)}};
}

// ---------------------------------------------------------------------------
// Run manifest. Timestamps are kept out of the serialized form on purpose:
// outputs must be byte-identical across re-runs and worker counts, so wall
// clock data goes to the console log instead.
// ---------------------------------------------------------------------------

struct RunManifest {
  std::vector<std::string> argv;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  Json config;  // resolved, excluding runtime-only knobs like thread count
  std::vector<std::string> outputs;
};

inline Json manifest_to_json(const RunManifest& m) {
  return Json{{"argv", m.argv}, {"seed", m.seed}, {"version", m.version},
              {"config", m.config}, {"outputs", m.outputs}};
}

// ---------------------------------------------------------------------------
// CSV: one row per report, identical columns to the JSON fields. Doubles are
// rendered with the same shortest round-trip writer as JSON.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string csv_number(double v) { return Json(v).dump(); }

}  // namespace detail

inline std::string reports_to_csv(const std::vector<InequalityReport>& reports) {
  std::ostringstream out;
  out << "check_id,gauge,lhs,rhs,slack,satisfied,tol,seed,m,n,k,rank,digest,details\n";
  for (const auto& r : reports) {
    out << to_string(r.check_id) << ',' << r.gauge << ',' << detail::csv_number(r.lhs) << ','
        << detail::csv_number(r.rhs) << ',' << detail::csv_number(r.slack) << ','
        << (r.satisfied ? "true" : "false") << ',' << detail::csv_number(r.tol) << ','
        << r.seed << ',' << r.m << ',' << r.n << ',' << r.k << ',' << r.rank << ','
        << r.digest << ',';
    bool first = true;
    for (const auto& [key, value] : r.details) {
      if (!first) out << ';';
      out << key << '=' << detail::csv_number(value);
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

inline void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Json parse_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("file '" + path + "': malformed JSON");
  return j;
}

}  // namespace grusslab
