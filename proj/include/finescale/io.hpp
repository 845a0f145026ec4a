#pragma once

// JSON / CSV encodings for specs and reports.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "finescale/energy.hpp"
#include "finescale/experiments.hpp"
#include "finescale/moments.hpp"
#include "finescale/selberg.hpp"
#include "finescale/sequences.hpp"
#include "finescale/statistics.hpp"

namespace finescale {

using Json = nlohmann::ordered_json;

// ---- specs ----------------------------------------------------------------

inline Json to_json(const ComponentSpec& spec) {
  struct Visitor {
    Json operator()(const Lacunary& s) const { return {{"kind", "Lacunary"}, {"a0", s.a0}, {"lambda", s.lambda}}; }
    Json operator()(const QuadraticReal& s) const {
      return {{"kind", "QuadraticReal"}, {"p2", s.p2}, {"p1", s.p1}, {"p0", s.p0}, {"shift", s.shift}};
    }
    Json operator()(const Power& s) const { return {{"kind", "Power"}, {"theta", s.theta}}; }
    Json operator()(const ConvexCumulative& s) const { return {{"kind", "ConvexCumulative"}, {"gaps", s.gaps}}; }
    Json operator()(const Explicit& s) const { return {{"kind", "Explicit"}, {"values", s.values}}; }
  };
  return std::visit(Visitor{}, spec);
}

inline Json to_json(const VectorSequenceSpec& spec) {
  Json comps = Json::array();
  for (const auto& c : spec.components) comps.push_back(to_json(c));
  return {{"r", spec.r()}, {"N", spec.N}, {"components", comps}};
}

namespace detail {

template <class T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorCode::InvalidSpec, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidSpec, std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T field_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? field<T>(j, key) : fallback;
}

}  // namespace detail

inline ComponentSpec component_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::InvalidSpec, "component must be an object");
  const auto kind = detail::field<std::string>(j, "kind");
  ComponentSpec spec;
  if (kind == "Lacunary") {
    spec = Lacunary{detail::field<double>(j, "a0"), detail::field<double>(j, "lambda")};
  } else if (kind == "QuadraticReal") {
    spec = QuadraticReal{detail::field<double>(j, "p2"), detail::field_or<double>(j, "p1", 0.0),
                         detail::field_or<double>(j, "p0", 0.0), detail::field_or<long long>(j, "shift", 0)};
  } else if (kind == "Power") {
    spec = Power{detail::field<double>(j, "theta")};
  } else if (kind == "ConvexCumulative") {
    spec = ConvexCumulative{detail::field<std::vector<double>>(j, "gaps")};
  } else if (kind == "Explicit") {
    spec = Explicit{detail::field<std::vector<double>>(j, "values")};
  } else {
    fail(ErrorCode::InvalidSpec, "unknown component kind '" + kind + "'");
  }
  validate(spec);
  return spec;
}

inline VectorSequenceSpec spec_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::InvalidSpec, "spec must be a JSON object");
  VectorSequenceSpec spec;
  spec.N = detail::field<long long>(j, "N");
  if (spec.N < 0) fail(ErrorCode::InvalidSpec, "N must be nonnegative");
  const auto& comps = j.contains("components") ? j.at("components") : Json();
  if (!comps.is_array() || comps.empty()) fail(ErrorCode::InvalidSpec, "components must be a nonempty array");
  for (const auto& c : comps) spec.components.push_back(component_from_json(c));
  const int r = detail::field_or<int>(j, "r", spec.r());
  if (r != spec.r())
    fail(ErrorCode::InvalidSpec, "r = " + std::to_string(r) + " but " + std::to_string(spec.r()) + " components given");
  return spec;
}

inline VectorSequenceSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidSpec, "cannot open spec file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidSpec, std::string("spec is not valid JSON: ") + e.what());
  }
  return spec_from_json(j);
}

// ---- reports ----------------------------------------------------------------

inline Json to_json(const PPCReport& r) {
  Json j = {{"N", r.N}, {"r", r.r}, {"s", r.s_grid}, {"r2", r.r2_values}, {"pair_counts", r.pair_counts},
            {"deviation", r.deviation}, {"relative_deviation", r.relative_deviation}, {"alpha", r.alpha}};
  j["seed"] = r.seed ? Json(*r.seed) : Json(nullptr);
  if (r.draw_index) j["draw"] = *r.draw_index;
  return j;
}

inline Json to_json(const EnergyReport& r) {
  return {{"N", r.N}, {"gamma", r.gamma}, {"count", r.count}, {"component", r.component_index},
          {"method", to_string(r.method)}};
}

inline Json to_json(const SandwichReport& r) {
  return {{"points", r.points},         {"max_violation", r.max_violation}, {"worst_x", r.worst_x},
          {"min_plus", r.min_plus},     {"integral_gap", r.integral_gap},   {"tolerance", kSandwichTolerance},
          {"pass", r.pass}};
}

inline Json to_json(const MomentReport& r) {
  Json j = {{"kind", to_string(r.kind)},
            {"estimate", r.estimate},
            {"std_error", r.std_error},
            {"n_samples", r.n_samples},
            {"N", r.N},
            {"r", r.r},
            {"s", r.s}};
  if (r.kind != MomentKind::ExpectationIndicator) {
    j["t"] = r.t;
    j["K"] = r.K;
    j["sign"] = to_string(r.sign);
    j["c0"] = r.c0;
  }
  j["target"] = r.target;
  j["bias_constant"] = r.bias_constant;
  j["alpha_source"] = r.quadrature ? "quadrature" : "monte_carlo";
  j["seed"] = r.seed ? Json(*r.seed) : Json(nullptr);
  return j;
}

inline Json to_json(const SlopeFit& f) {
  Json pts = Json::array();
  for (const auto& [x, y] : f.points) pts.push_back({x, y});
  return {{"exponent", f.exponent}, {"intercept", f.intercept}, {"r_squared", f.r_squared}, {"points", pts}};
}

inline Json to_json(const HypothesisVerdict& v) {
  Json comps = Json::array();
  for (const auto& c : v.components) {
    Json table = Json::array();
    for (const auto& [n, count] : c.table) table.push_back({n, count});
    Json cj = {{"component", c.component}, {"table", table}};
    if (c.fit) cj["fit"] = to_json(*c.fit);
    if (v.theorem == Theorem::T3) {
      cj["ratios"] = c.ratios;
      cj["median_ratio"] = c.median_ratio;
      cj["max_ratio"] = c.max_ratio;
    }
    cj["pass"] = c.pass;
    comps.push_back(cj);
  }
  Json j = {{"theorem", to_string(v.theorem)}, {"r", v.r}, {"fitted", v.fitted}, {"threshold", v.threshold},
            {"delta_margin", v.delta_margin}};
  if (v.theorem == Theorem::T3) {
    j["eta"] = v.eta;
    j["delta"] = v.delta;
  }
  j["grid"] = v.grid;
  j["components"] = comps;
  j["pass"] = v.pass;
  return j;
}

inline Json to_json(const SweepResult& s) {
  Json reports = Json::array();
  for (const auto& r : s.reports) reports.push_back(to_json(r));
  Json summary = Json::array();
  for (const auto& row : s.summary)
    summary.push_back({{"N", row.N},
                       {"median_deviation", row.median_deviation},
                       {"median_relative_deviation", row.median_relative_deviation}});
  return {{"reports", reports}, {"summary", summary}};
}

// ---- CSV ----------------------------------------------------------------------

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline std::string energy_csv(const std::vector<EnergyReport>& rows) {
  std::string out = "N,gamma,count\n";
  for (const auto& r : rows) out += std::to_string(r.N) + "," + format_double(r.gamma) + "," + std::to_string(r.count) + "\n";
  return out;
}

inline std::string coefficients_csv(const SelbergPolynomial& poly) {
  std::string out = "j,re,im\n";
  for (long long j = -poly.K; j <= poly.K; ++j) {
    const auto c = poly.coeff(j);
    out += std::to_string(j) + "," + format_double(c.real()) + "," + format_double(c.imag()) + "\n";
  }
  return out;
}

/// Reads an (N, ..., count) CSV: first column N, last column count, optional
/// header line. Accepts the energy table CSV as written above.
inline std::vector<std::pair<long long, double>> read_count_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidSpec, "cannot open table '" + path + "'");
  std::vector<std::pair<long long, double>> table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    const bool header = first;
    first = false;
    try {
      if (cells.size() < 2) throw std::invalid_argument("short row");
      table.emplace_back(std::stoll(cells.front()), std::stod(cells.back()));
    } catch (const std::exception&) {
      if (header) continue;
      fail(ErrorCode::InvalidSpec, "bad table row: " + line);
    }
  }
  return table;
}

}  // namespace finescale
