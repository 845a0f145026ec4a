#pragma once

// Command-line front end. Every subcommand writes one report
//   {"manifest": {...}, "results": {...}, "error": null | {...}}
// (or a CSV table for table-shaped results) and maps failures to exit codes:
// 0 ok, 1 usage / invalid input, 2 numeric or capacity guard, 3 failed check.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "finescale/energy.hpp"
#include "finescale/experiments.hpp"
#include "finescale/io.hpp"
#include "finescale/measure_mu.hpp"
#include "finescale/moments.hpp"
#include "finescale/selberg.hpp"
#include "finescale/sequences.hpp"
#include "finescale/statistics.hpp"

namespace finescale::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kGuard = 2, kCheckFailed = 3 };

struct Options {
  std::string spec_path;
  std::string out = "-";
  std::string format = "json";
  std::optional<long long> N;
  double gamma = 1.0;
  std::vector<double> s;
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string grid;
  std::string table;
  std::string gamma_rule = "const";
  std::string method = "fast";
  std::optional<int> component;
  std::vector<double> alpha;
  std::uint64_t draw = 0;
  std::string alpha_dist = "mu";
  double box_low = 1.0;
  double box_high = 2.0;
  std::optional<long long> jmax;
  std::uint64_t budget = 2'000'000'000;
  double delta_window = 0.0;
  std::optional<long long> K;
  long long t = 2;
  std::optional<int> r;
  std::size_t points = 100000;
  std::string sign = "plus";
  std::string kind = "indicator";
  bool quadrature = false;
  std::size_t nodes = 100000;
  double truncation = 50.0;
  std::uint64_t start = 0;
  int theorem = 2;
  double margin = 0.05;
  double eta = 0.1;
  double delta = 0.1;
  std::size_t alphas = 20;
};

struct Outcome {
  Json results = Json::object();
  std::optional<std::string> csv;
  int exit_code = kOk;
};

/// Parses "a,b,c" or "start:stop:step" (inclusive) into an ascending grid.
inline std::vector<long long> parse_grid(const std::string& text) {
  std::vector<long long> grid;
  if (text.empty()) return grid;
  try {
    if (text.find(':') != std::string::npos) {
      std::vector<long long> parts;
      std::istringstream in(text);
      for (std::string p; std::getline(in, p, ':');) parts.push_back(std::stoll(p));
      if (parts.size() != 3 || parts[2] <= 0) fail(ErrorCode::Usage, "grid range must be start:stop:step");
      for (long long v = parts[0]; v <= parts[1]; v += parts[2]) grid.push_back(v);
    } else {
      std::istringstream in(text);
      for (std::string p; std::getline(in, p, ',');) grid.push_back(std::stoll(p));
    }
  } catch (const std::logic_error&) {
    fail(ErrorCode::Usage, "cannot parse grid '" + text + "'");
  }
  return grid;
}

namespace detail {

inline VectorSequenceSpec require_spec(const Options& o) {
  if (o.spec_path.empty()) fail(ErrorCode::Usage, "--spec is required");
  auto spec = load_spec(o.spec_path);
  if (o.N) {
    if (*o.N < 0) fail(ErrorCode::Usage, "--N must be nonnegative");
    spec.N = *o.N;
  }
  return spec;
}

inline Sign parse_sign(const std::string& s) {
  if (s == "plus") return Sign::Plus;
  if (s == "minus") return Sign::Minus;
  fail(ErrorCode::Usage, "--sign must be plus or minus");
}

inline std::optional<AlphaBox> parse_alpha_dist(const Options& o) {
  if (o.alpha_dist == "mu") return std::nullopt;
  if (o.alpha_dist == "box") return AlphaBox{o.box_low, o.box_high};
  fail(ErrorCode::Usage, "--alpha-dist must be mu or box");
}

inline GammaSchedule parse_gamma(const Options& o) {
  if (o.gamma_rule == "const") return {GammaRule::Constant, o.gamma};
  if (o.gamma_rule == "inverse") return {GammaRule::InverseN, o.gamma};
  fail(ErrorCode::Usage, "--gamma-rule must be const or inverse");
}

inline std::vector<int> selected_components(const Options& o, const VectorSequenceSpec& spec) {
  if (o.component) {
    if (*o.component < 0 || *o.component >= spec.r()) fail(ErrorCode::Usage, "--component out of range");
    return {*o.component};
  }
  std::vector<int> all;
  for (int i = 0; i < spec.r(); ++i) all.push_back(i);
  return all;
}

inline std::vector<double> require_s(const Options& o) {
  if (o.s.empty()) fail(ErrorCode::Usage, "at least one --s is required");
  return o.s;
}

inline AlphaSource alpha_source(const Options& o, std::size_t default_samples) {
  if (o.quadrature) return QuadratureAlpha{o.truncation, o.nodes};
  return MonteCarloAlpha{MuSampler{o.seed, 0}, o.samples ? o.samples : default_samples, parse_alpha_dist(o)};
}

}  // namespace detail

// ---- subcommands ----------------------------------------------------------------

inline Outcome cmd_materialize(const Options& o) {
  const auto spec = detail::require_spec(o);
  const auto values = materialize(spec);
  Outcome out;
  Json comps = Json::array();
  for (int i = 0; i < spec.r(); ++i) {
    const auto& cs = spec.components[static_cast<std::size_t>(i)];
    const auto& cv = values[static_cast<std::size_t>(i)];
    Json c = {{"kind", kind_name(cs)}, {"values", cv.values}, {"min_gap", cv.min_gap},
              {"magnitude_max", cv.magnitude_max}};
    if (const auto gap = documented_gap(cs)) {
      c["growth_c"] = *gap;
      c["growth_ok"] = check_growth(cv.values, *gap);
    }
    if (const auto* lac = std::get_if<Lacunary>(&cs)) c["lacunary_ok"] = check_lacunary(cv.values, lac->lambda, 1e-12);
    if (cv.values.size() >= 3) c["convex_ok"] = check_convex(cv.values);
    comps.push_back(c);
  }
  out.results = {{"N", spec.N}, {"r", spec.r()}, {"components", comps}};
  if (o.format == "csv") {
    std::string csv = "n";
    for (int i = 0; i < spec.r(); ++i) csv += ",a" + std::to_string(i + 1);
    csv += "\n";
    for (std::size_t n = 0; n < values[0].values.size(); ++n) {
      csv += std::to_string(n);
      for (const auto& cv : values) csv += "," + format_double(cv.values[n]);
      csv += "\n";
    }
    out.csv = csv;
  }
  return out;
}

inline Outcome cmd_paircorr(const Options& o) {
  const auto spec = detail::require_spec(o);
  const auto s = detail::require_s(o);
  AlphaVector alpha;
  std::optional<std::uint64_t> seed;
  if (!o.alpha.empty()) {
    alpha.coords = o.alpha;
  } else {
    MuSampler sampler{o.seed, o.draw * static_cast<std::uint64_t>(spec.r())};
    const auto box = detail::parse_alpha_dist(o);
    alpha = box ? sample_alpha_box(sampler, spec.r(), *box) : sample_alpha(sampler, spec.r());
    seed = o.seed;
  }
  const auto proj = project_values(spec, alpha);
  PPCReport rep = pair_correlation(proj, spec.N, spec.r(), s);
  rep.alpha = alpha.coords;
  rep.seed = seed;
  if (seed) rep.draw_index = o.draw;
  Outcome out;
  out.results = to_json(rep);
  out.results["precision_bound"] = proj.precision_bound;
  return out;
}

inline Outcome cmd_energy(const Options& o) {
  const auto spec = detail::require_spec(o);
  const auto grid = parse_grid(o.grid);
  std::vector<EnergyReport> rows;
  for (int i : detail::selected_components(o, spec)) {
    const auto& cs = spec.components[static_cast<std::size_t>(i)];
    if (!grid.empty()) {
      if (o.method != "fast") fail(ErrorCode::Usage, "energy tables use the fast method");
      for (auto rep : energy_table(cs, grid, detail::parse_gamma(o), o.threads, i)) rows.push_back(rep);
    } else {
      const auto values = materialize(cs, spec.N);
      const double gamma = detail::parse_gamma(o).at(static_cast<long long>(values.size()));
      EnergyReport rep;
      if (o.method == "fast")
        rep = additive_energy(values.values, gamma);
      else if (o.method == "brute")
        rep = additive_energy_bruteforce(values.values, gamma);
      else
        fail(ErrorCode::Usage, "--method must be fast or brute");
      rep.component_index = i;
      rows.push_back(rep);
    }
  }
  Outcome out;
  Json list = Json::array();
  for (const auto& r : rows) list.push_back(to_json(r));
  if (rows.size() == 1) out.results = to_json(rows.front());
  out.results["rows"] = list;
  if (o.format == "csv") {
    if (spec.r() == 1 || o.component) {
      out.csv = energy_csv(rows);
    } else {
      std::string csv = "N,gamma,count,component\n";
      for (const auto& r : rows)
        csv += std::to_string(r.N) + "," + format_double(r.gamma) + "," + std::to_string(r.count) + "," +
               std::to_string(r.component_index) + "\n";
      out.csv = csv;
    }
  }
  return out;
}

inline Outcome cmd_thm1(const Options& o) {
  const auto spec = detail::require_spec(o);
  const long long jmax = o.jmax ? *o.jmax : std::llround(lattice_normalizer(spec.N, spec.r()));
  const std::uint64_t count = thm1_count(spec, Thm1Config{jmax, o.budget});
  const double lattice = std::pow(static_cast<double>(spec.N + 1), spec.r());
  const auto pairs = static_cast<std::uint64_t>(lattice * (lattice - 1.0));
  Outcome out;
  out.results = {{"N", spec.N}, {"r", spec.r()},          {"jmax", jmax},
                 {"count", count}, {"ordered_pairs", pairs}, {"diagonal_lower_bound", pairs * static_cast<std::uint64_t>(jmax)}};
  return out;
}

inline Json coefficient_check(const SelbergPolynomial& p) {
  const double w = p.half_width;
  const double inv = 1.0 / static_cast<double>(p.K + 1);
  const double expected = 2.0 * w + (p.sign == Sign::Plus ? inv : -inv);
  double excess = -INFINITY;
  double max_imag = 0.0;
  for (long long j = 1; j <= p.K; ++j) {
    const auto c = p.coeff(j);
    const double bound = std::min(2.0 * w, 1.0 / (std::numbers::pi * static_cast<double>(j))) + inv;
    excess = std::max(excess, std::abs(c) - bound);
    max_imag = std::max(max_imag, std::abs(c.imag()));
  }
  return {{"sign", to_string(p.sign)},
          {"c0", p.coeffs[0].real()},
          {"c0_expected", expected},
          {"c0_error", std::abs(p.coeffs[0].real() - expected)},
          {"max_coefficient_excess", excess},
          {"coefficient_bound_ok", excess <= 0.0},
          {"max_imaginary", max_imag}};
}

inline Outcome cmd_selberg(const Options& o) {
  double delta = o.delta_window;
  long long K = 0;
  if (delta <= 0.0) {
    if (!o.N || !o.r) fail(ErrorCode::Usage, "give --delta or both --N and --r");
    delta = lattice_normalizer(*o.N, *o.r);
  }
  if (o.K) {
    K = *o.K;
  } else {
    if (!o.N || !o.r) fail(ErrorCode::Usage, "give --K or both --N and --r");
    K = selberg_degree(*o.N, *o.r, o.t);
  }
  const double s = o.s.empty() ? 1.0 : o.s.front();
  const auto plus = build_selberg(s, delta, K, Sign::Plus);
  const auto minus = build_selberg(s, delta, K, Sign::Minus);
  const auto sandwich = verify_sandwich(minus, plus, o.points, o.threads);
  Outcome out;
  const Json pc = coefficient_check(plus), mc = coefficient_check(minus);
  const bool pass = sandwich.pass && pc["coefficient_bound_ok"].get<bool>() && mc["coefficient_bound_ok"].get<bool>();
  out.results = {{"s", s},          {"delta", delta}, {"half_width", plus.half_width}, {"K", K},
                 {"plus", pc},      {"minus", mc},    {"sandwich", to_json(sandwich)},  {"pass", pass}};
  if (o.format == "csv") out.csv = coefficients_csv(detail::parse_sign(o.sign) == Sign::Plus ? plus : minus);
  out.exit_code = pass ? kOk : kCheckFailed;
  return out;
}

inline Outcome cmd_mu_sample(const Options& o) {
  const std::size_t n = o.samples ? o.samples : 1000;
  const auto draws = sample_mu_many(o.seed, o.start, n, o.threads);
  Outcome out;
  Json cf = Json::array();
  for (double u : {0.25, 0.5, 0.75, 1.0, 1.5}) {
    const auto c = empirical_charfn(draws, u);
    cf.push_back({{"u", u}, {"re", c.real()}, {"im", c.imag()}, {"triangle", mu_charfn(u)}});
  }
  out.results = {{"seed", o.seed}, {"start", o.start}, {"count", n}, {"charfn", cf}, {"samples", draws}};
  if (o.format == "csv") {
    std::string csv = "index,x\n";
    for (std::size_t k = 0; k < n; ++k) csv += std::to_string(o.start + k) + "," + format_double(draws[k]) + "\n";
    out.csv = csv;
  }
  return out;
}

inline Outcome cmd_expectation(const Options& o) {
  const auto spec = detail::require_spec(o);
  const double s = detail::require_s(o).front();
  MomentReport rep;
  if (o.kind == "indicator")
    rep = indicator_expectation(spec, s, detail::alpha_source(o, 100), o.threads);
  else if (o.kind == "selberg")
    rep = selberg_expectation(spec, s, o.t, detail::alpha_source(o, 100), o.threads, detail::parse_sign(o.sign));
  else
    fail(ErrorCode::Usage, "--kind must be indicator or selberg");
  Outcome out;
  out.results = to_json(rep);
  return out;
}

inline Outcome cmd_variance(const Options& o) {
  const auto spec = detail::require_spec(o);
  const double s = detail::require_s(o).front();
  const auto rep = variance_estimate(spec, s, o.t, detail::alpha_source(o, 100), o.threads, detail::parse_sign(o.sign));
  Outcome out;
  out.results = to_json(rep);
  return out;
}

inline Outcome cmd_slope(const Options& o) {
  Outcome out;
  if (!o.table.empty()) {
    const auto table = read_count_table(o.table);
    out.results = to_json(fit_exponent(table));
    return out;
  }
  const auto spec = detail::require_spec(o);
  const auto grid = parse_grid(o.grid);
  if (grid.empty()) fail(ErrorCode::Usage, "slope needs --table or --spec with --grid");
  Json fits = Json::array();
  for (int i : detail::selected_components(o, spec)) {
    std::vector<std::pair<long long, double>> table;
    for (const auto& rep : energy_table(spec.components[static_cast<std::size_t>(i)], grid, detail::parse_gamma(o),
                                        o.threads, i))
      table.emplace_back(rep.N, static_cast<double>(rep.count));
    Json f = to_json(fit_exponent(table));
    f["component"] = i;
    fits.push_back(f);
  }
  out.results = {{"fits", fits}};
  return out;
}

inline Outcome cmd_verify(const Options& o) {
  Theorem theorem;
  switch (o.theorem) {
    case 1: theorem = Theorem::T1; break;
    case 2: theorem = Theorem::T2; break;
    case 3: theorem = Theorem::T3; break;
    default: fail(ErrorCode::Usage, "--theorem must be 1, 2 or 3");
  }
  HypothesisParams params;
  params.delta_margin = o.margin;
  params.eta = o.eta;
  params.delta = o.delta;
  params.jmax = o.jmax.value_or(0);
  params.thm1_budget = o.budget;
  params.threads = o.threads;

  HypothesisVerdict verdict;
  if (!o.table.empty()) {
    if (!o.r) fail(ErrorCode::Usage, "--table needs --r");
    verdict.theorem = theorem;
    verdict.r = *o.r;
    verdict.delta_margin = params.delta_margin;
    verdict.eta = params.eta;
    verdict.delta = params.delta;
    verdict.threshold = theorem == Theorem::T1   ? 4.0 * *o.r
                        : theorem == Theorem::T2 ? thm2_threshold(*o.r)
                                                 : params.ratio_bound;
    auto cv = judge_table(theorem, read_count_table(o.table), verdict.threshold, params);
    for (const auto& row : cv.table) verdict.grid.push_back(row.first);
    verdict.fitted = theorem == Theorem::T3 ? cv.max_ratio / cv.median_ratio : cv.fit->exponent;
    verdict.pass = cv.pass;
    verdict.components.push_back(std::move(cv));
  } else {
    const auto spec = detail::require_spec(o);
    const auto grid = parse_grid(o.grid);
    if (grid.empty()) fail(ErrorCode::Usage, "verify needs --grid (or --table)");
    verdict = check_hypotheses(spec, theorem, grid, params);
  }
  Outcome out;
  out.results = to_json(verdict);
  out.exit_code = verdict.pass ? kOk : kCheckFailed;
  return out;
}

inline Outcome cmd_sweep(const Options& o) {
  const auto spec = detail::require_spec(o);
  const auto s = detail::require_s(o);
  auto grid = parse_grid(o.grid);
  if (grid.empty()) grid.push_back(spec.N);
  const auto result = ppc_sweep(spec, grid, s, o.alphas, MuSampler{o.seed, 0}, o.threads, detail::parse_alpha_dist(o));
  Outcome out;
  out.results = to_json(result);
  return out;
}

// ---- driver --------------------------------------------------------------------

namespace detail {

inline bool uses_seed(const std::string& cmd) {
  return cmd == "paircorr" || cmd == "mu-sample" || cmd == "expectation" || cmd == "variance" || cmd == "sweep";
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& stdout_stream) {
  if (path == "-") {
    stdout_stream << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::Usage, "cannot write '" + path + "'");
  f << text;
}

}  // namespace detail

/// Runs one CLI invocation. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Options o;
  o.threads = default_threads();

  CLI::App app{"finescale: pair correlation, additive energy and moment experiments"};
  app.require_subcommand(1);

  std::map<std::string, CLI::App*> subs;
  auto add = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--out", o.out, "output file, - for stdout");
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--threads", o.threads, "worker threads, 0 = all (default $FINESCALE_THREADS or 1)");
    subs[name] = sub;
    return sub;
  };
  auto spec_opts = [&](CLI::App* sub) {
    sub->add_option("--spec", o.spec_path, "sequence spec JSON");
    sub->add_option("--N", o.N, "override the spec's N");
  };

  auto* materialize_cmd = add("materialize", "evaluate component sequences");
  spec_opts(materialize_cmd);

  auto* paircorr = add("paircorr", "pair correlation R_2(s) for one alpha");
  spec_opts(paircorr);
  paircorr->add_option("--s", o.s, "window parameter (repeatable)");
  paircorr->add_option("--alpha", o.alpha, "explicit alpha coordinates")->delimiter(',');
  paircorr->add_option("--seed", o.seed, "seed for drawing alpha");
  paircorr->add_option("--draw", o.draw, "draw index for the seeded alpha");
  paircorr->add_option("--alpha-dist", o.alpha_dist, "mu or box");

  auto* energy = add("energy", "additive energy counts");
  spec_opts(energy);
  energy->add_option("--gamma", o.gamma, "threshold in (0, 1]");
  energy->add_option("--gamma-rule", o.gamma_rule, "const or inverse (gamma = 1/N)");
  energy->add_option("--grid", o.grid, "N grid: a,b,c or start:stop:step");
  energy->add_option("--component", o.component, "component index");
  energy->add_option("--method", o.method, "fast or brute");

  auto* thm1 = add("thm1-count", "two-coefficient Diophantine inequality count");
  spec_opts(thm1);
  thm1->add_option("--jmax", o.jmax, "coefficient range (default N^r)");
  thm1->add_option("--budget", o.budget, "max pairs^2 * Jmax");

  auto* selberg = add("selberg-check", "build and verify Selberg polynomials");
  selberg->add_option("--s", o.s, "window parameter");
  selberg->add_option("--delta", o.delta_window, "window scale Delta (half width s/Delta)");
  selberg->add_option("--K", o.K, "degree");
  selberg->add_option("--N", o.N, "N, for Delta = N^r and K = t N^r");
  selberg->add_option("--r", o.r, "r, for Delta = N^r and K = t N^r");
  selberg->add_option("--t", o.t, "degree multiplier");
  selberg->add_option("--points", o.points, "sandwich grid size");
  selberg->add_option("--sign", o.sign, "coefficients to export as CSV: plus or minus");

  auto* mu = add("mu-sample", "draw from the measure mu");
  mu->add_option("--samples", o.samples, "number of draws");
  mu->add_option("--seed", o.seed, "seed");
  mu->add_option("--start", o.start, "first counter position");

  auto moment_opts = [&](CLI::App* sub) {
    spec_opts(sub);
    sub->add_option("--s", o.s, "window parameter");
    sub->add_option("--samples", o.samples, "alpha draws");
    sub->add_option("--seed", o.seed, "seed");
    sub->add_option("--t", o.t, "degree multiplier, K = t N^r (capped at 10^4)");
    sub->add_option("--sign", o.sign, "plus or minus");
    sub->add_option("--alpha-dist", o.alpha_dist, "mu or box");
    sub->add_flag("--quadrature", o.quadrature, "deterministic quadrature over truncated mu");
    sub->add_option("--nodes", o.nodes, "quadrature nodes per axis");
    sub->add_option("--truncation", o.truncation, "quadrature truncation");
  };
  auto* expectation = add("expectation", "expected pair correlation under mu");
  moment_opts(expectation);
  expectation->add_option("--kind", o.kind, "indicator or selberg");
  auto* variance = add("variance", "variance of the Selberg pair sum under mu");
  moment_opts(variance);

  auto* slope = add("slope", "log-log exponent fit");
  spec_opts(slope);
  slope->add_option("--table", o.table, "CSV of N,count");
  slope->add_option("--grid", o.grid, "N grid");
  slope->add_option("--gamma", o.gamma, "threshold");
  slope->add_option("--gamma-rule", o.gamma_rule, "const or inverse");
  slope->add_option("--component", o.component, "component index");

  auto* verify = add("verify", "check a theorem's hypothesis on a grid");
  spec_opts(verify);
  verify->add_option("--theorem", o.theorem, "1, 2 or 3")->required();
  verify->add_option("--grid", o.grid, "N grid");
  verify->add_option("--table", o.table, "precomputed N,count CSV");
  verify->add_option("--r", o.r, "dimension for --table");
  verify->add_option("--margin", o.margin, "exponent margin delta");
  verify->add_option("--eta", o.eta, "eta (T3)");
  verify->add_option("--delta", o.delta, "delta (T3)");
  verify->add_option("--jmax", o.jmax, "Jmax for T1 (default N^r)");
  verify->add_option("--budget", o.budget, "T1 budget");

  auto* sweep = add("sweep", "PPC convergence sweep over N and alpha draws");
  spec_opts(sweep);
  sweep->add_option("--grid", o.grid, "N grid");
  sweep->add_option("--s", o.s, "window parameter (repeatable)");
  sweep->add_option("--alphas", o.alphas, "number of alpha draws");
  sweep->add_option("--seed", o.seed, "seed");
  sweep->add_option("--alpha-dist", o.alpha_dist, "mu or box");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) command = name;

  Json params = Json::object();
  for (const auto* opt : subs[command]->get_options()) {
    const std::string name = opt->get_name(false, true);
    if (opt->count() == 0 || name == "--out" || name == "--format" || name == "--threads" || name == "--help")
      continue;
    const auto results = opt->results();
    params[name.substr(2)] = results.size() == 1 ? Json(results.front()) : Json(results);
  }

  static const std::map<std::string, std::function<Outcome(const Options&)>> handlers = {
      {"materialize", cmd_materialize}, {"paircorr", cmd_paircorr},       {"energy", cmd_energy},
      {"thm1-count", cmd_thm1},         {"selberg-check", cmd_selberg},   {"mu-sample", cmd_mu_sample},
      {"expectation", cmd_expectation}, {"variance", cmd_variance},       {"slope", cmd_slope},
      {"verify", cmd_verify},           {"sweep", cmd_sweep}};

  const auto started = std::chrono::steady_clock::now();
  Outcome outcome;
  Json error = nullptr;
  int code = kOk;
  try {
    if (!o.spec_path.empty()) params["spec_content"] = to_json(load_spec(o.spec_path));
    outcome = handlers.at(command)(o);
    code = outcome.exit_code;
  } catch (const Error& e) {
    error = {{"code", to_string(e.code())}, {"message", e.what()}};
    code = is_guard(e.code()) ? kGuard : kUsage;
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    error = {{"code", "Internal"}, {"message", e.what()}};
    code = kGuard;
    err << "error: " << e.what() << "\n";
  }
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count();

  Json manifest = {{"tool_version", kToolVersion}, {"command", command}, {"params", params}};
  manifest["seed"] = detail::uses_seed(command) ? Json(o.seed) : Json(nullptr);
  manifest["threads"] = resolve_threads(o.threads);
  manifest["timing_ms"] = elapsed;

  try {
    if (error.is_null() && outcome.csv) {
      detail::write_output(o.out, *outcome.csv, out);
    } else {
      Json report = {{"manifest", manifest}, {"results", error.is_null() ? outcome.results : Json(nullptr)},
                     {"error", error}};
      detail::write_output(o.out, report.dump(2) + "\n", out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return code;
}

}  // namespace finescale::cli
