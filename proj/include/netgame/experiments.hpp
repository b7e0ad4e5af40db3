#pragma once

// Experiment configuration, the worked-example report, figure datasets and
// the simulation report behind the command-line tool.

#include "netgame/analysis.hpp"
#include "netgame/behavior.hpp"
#include "netgame/netsim.hpp"

#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace netgame {

using Json = nlohmann::ordered_json;

// ---- configuration ----------------------------------------------------------

inline std::vector<std::string> split_list(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t\r");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

// One `key = value` per line; `#` starts a comment.
inline std::map<std::string, std::string> parse_key_values(std::istream& is) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("config line " + std::to_string(lineno) + ": expected key = value");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

inline std::map<std::string, std::string> load_key_values(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open config file " + path);
  return parse_key_values(is);
}

struct ExperimentConfig {
  std::string preset = "example";
  std::vector<std::string> degrees{"4", "6"};
  std::vector<std::string> shares{"0.6", "0.4"};
  std::string etheta = "0.5";
  std::string alpha = "4";
  std::string cost = "6";
  std::vector<std::string> sigma{"0"};
  std::vector<std::string> d1{"2", "4", "8", "inf"};
  std::vector<std::string> eps{"0.5"};
  std::optional<int> grid;
  std::uint64_t seed = 1;
  int n = 100000;
  int trials = 20;
  bool exact = false;
  bool json = false;
  bool simple = false;
  bool dump_pi = false;
  std::string out;

  static ExperimentConfig preset_named(const std::string& name) {
    ExperimentConfig c;
    c.preset = name;
    if (name == "example") return c;
    if (name == "fig1") {
      c.degrees = {"2", "6"};
      c.shares = {"0.5", "0.5"};
      c.etheta = "1";
      c.alpha = "1.2";
      c.cost = "3.7";
      c.sigma = {"0", "0.5", "1"};
      c.eps = {"2"};
      return c;
    }
    throw Error("unknown preset '" + name + "' (known: example, fig1)");
  }

  // Preset first, then every key present in `kv` overrides it.
  static ExperimentConfig from_map(const std::map<std::string, std::string>& kv) {
    auto get = [&](const char* key) -> const std::string* {
      auto it = kv.find(key);
      return it == kv.end() ? nullptr : &it->second;
    };
    ExperimentConfig c = preset_named(get("preset") ? *get("preset") : std::string("example"));
    auto as_bool = [](const std::string& v) { return v.empty() || v == "1" || v == "true" || v == "yes" || v == "on"; };
    if (auto v = get("model")) {
      const auto colon = v->find(':');
      if (colon == std::string::npos) throw Error("--model expects DEGREES:SHARES, e.g. 4,6:0.6,0.4");
      c.degrees = split_list(v->substr(0, colon));
      c.shares = split_list(v->substr(colon + 1));
    }
    if (auto v = get("etheta")) c.etheta = *v;
    if (auto v = get("alpha")) c.alpha = *v;
    if (auto v = get("c")) c.cost = *v;
    if (auto v = get("sigma")) c.sigma = split_list(*v);
    if (auto v = get("d1")) c.d1 = split_list(*v);
    if (auto v = get("eps")) c.eps = split_list(*v);
    if (auto v = get("grid")) c.grid = std::stoi(*v);
    if (auto v = get("seed")) c.seed = std::stoull(*v);
    if (auto v = get("n")) c.n = std::stoi(*v);
    if (auto v = get("trials")) c.trials = std::stoi(*v);
    if (auto v = get("exact")) c.exact = as_bool(*v);
    if (auto v = get("json")) c.json = as_bool(*v);
    if (auto v = get("simple")) c.simple = as_bool(*v);
    if (auto v = get("dump-pi")) c.dump_pi = as_bool(*v);
    if (auto v = get("out")) c.out = *v;
    c.validate();
    return c;
  }

  std::vector<int> degree_list() const {
    std::vector<int> d;
    for (const auto& s : degrees) d.push_back(std::stoi(s));
    return d;
  }

  template <typename Scalar = double>
  DegreeModel<Scalar> model() const {
    std::vector<Scalar> s;
    for (const auto& v : shares) s.push_back(parse_number<Scalar>(v));
    return DegreeModel<Scalar>(degree_list(), std::move(s));
  }

  template <typename Scalar = double>
  GameParams<Scalar> params(const std::string& sigma_value) const {
    return GameParams<Scalar>(parse_number<Scalar>(etheta), parse_number<Scalar>(alpha), parse_number<Scalar>(cost),
                              parse_number<Scalar>(sigma_value));
  }

  template <typename Scalar = double>
  GameParams<Scalar> params() const {
    return params<Scalar>(sigma.empty() ? std::string("0") : sigma.front());
  }

  void validate() const {
    const auto m = model<double>();
    for (const auto& s : sigma) require_stable(m, params<double>(s));
    if (n < 2) throw Error("n must be at least 2");
    if (trials < 1) throw Error("trials must be positive");
    if (grid && *grid < 2) throw Error("grid must have at least two points");
  }

  Json to_json() const {
    Json j;
    j["preset"] = preset;
    j["degrees"] = degree_list();
    j["shares"] = shares;
    j["etheta"] = etheta;
    j["alpha"] = alpha;
    j["c"] = cost;
    j["sigma"] = sigma;
    j["d1"] = d1;
    j["eps"] = eps;
    if (grid) j["grid"] = *grid;
    j["seed"] = seed;
    j["n"] = n;
    j["trials"] = trials;
    j["exact"] = exact;
    j["simple"] = simple;
    return j;
  }
};

// ---- output -------------------------------------------------------------------

// Temp file + rename so readers never see a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write " + tmp.string());
    os << content;
    if (!os) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// Long-format curve row shared by every figure dataset.
struct CurveRow {
  std::string series;
  double parameter;
  std::string rule;
  std::optional<double> value;  // empty when the point was skipped
  std::string flags;

  friend bool operator==(const CurveRow&, const CurveRow&) = default;
};

inline constexpr const char* kCurveHeader = "series,parameter,rule,value,flags";

inline std::string curves_to_csv(const std::vector<CurveRow>& rows) {
  std::string out = std::string(kCurveHeader) + "\n";
  for (const auto& r : rows) {
    out += r.series + ',' + format_double(r.parameter) + ',' + r.rule + ',' + (r.value ? format_double(*r.value) : "") +
           ',' + r.flags + '\n';
  }
  return out;
}

inline Json curves_to_json(const std::vector<CurveRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["series"] = r.series;
    j["parameter"] = r.parameter;
    j["rule"] = r.rule;
    j["value"] = r.value ? Json(*r.value) : Json(nullptr);
    j["flags"] = r.flags;
    arr.push_back(std::move(j));
  }
  return arr;
}

inline std::vector<CurveRow> curves_from_csv(const std::string& csv) {
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  if (line != kCurveHeader) throw Error("unexpected curve header");
  std::vector<CurveRow> rows;
  while (std::getline(is, line)) {
    std::vector<std::string> f;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        f.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (f.size() != 5) throw Error("malformed curve row: " + line);
    CurveRow r{f[0], std::stod(f[1]), f[2], std::nullopt, f[4]};
    if (!f[3].empty()) r.value = std::stod(f[3]);
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<CurveRow> curves_from_json(const Json& arr) {
  std::vector<CurveRow> rows;
  for (const auto& j : arr) {
    CurveRow r{j.at("series").get<std::string>(), j.at("parameter").get<double>(), j.at("rule").get<std::string>(),
               std::nullopt, j.at("flags").get<std::string>()};
    if (!j.at("value").is_null()) r.value = j.at("value").get<double>();
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---- worked example -------------------------------------------------------------

struct ExampleCheck {
  std::string name;
  std::string value;     // exact rational or shortest decimal
  double numeric;
  std::string expected;  // as printed for comparison
  double tolerance;      // 0 means exact rational equality
  bool pass;
  std::string provenance;
};

struct ExampleReport {
  bool exact;
  std::vector<ExampleCheck> checks;

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
  }

  Json to_json() const {
    Json j;
    j["exact"] = exact;
    j["pass"] = pass();
    Json arr = Json::array();
    for (const auto& c : checks) {
      arr.push_back({{"name", c.name}, {"value", c.value}, {"numeric", c.numeric}, {"expected", c.expected},
                     {"tolerance", c.tolerance}, {"pass", c.pass}, {"provenance", c.provenance}});
    }
    j["checks"] = std::move(arr);
    return j;
  }

  std::string to_text() const {
    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-30s %-22s %-10s %-9s %s\n", "quantity", "value", "expected", "tol", "status");
    os << buf;
    for (const auto& c : checks) {
      std::snprintf(buf, sizeof buf, "%-30s %-22s %-10s %-9s %s\n", c.name.c_str(), c.value.c_str(), c.expected.c_str(),
                    c.tolerance == 0 ? "exact" : format_double(c.tolerance).c_str(), c.pass ? "ok" : "FAIL");
      os << buf;
    }
    os << (pass() ? "all checks passed\n" : "some checks FAILED\n");
    return os.str();
  }
};

// Two-class example: d = (4, 6), delta = (0.6, 0.4), theta_i = E[theta] = 1/2,
// alpha = 4 (a = 1), c = 6.
template <typename Scalar>
ExampleReport run_example() {
  constexpr bool exact = is_rational_v<Scalar>;
  const DegreeModel<Scalar> model({4, 6}, {ratio<Scalar>(3, 5), ratio<Scalar>(2, 5)});
  const GameParams<Scalar> params(ratio<Scalar>(1, 2), Scalar(4), Scalar(6), Scalar(0));
  const Scalar theta = params.mean_preference;
  const int d1 = model.degree(0);

  const auto observed = biased_neighbor_share(model);
  const auto soph = sophisticated_mle(observed, model.degrees());
  const Scalar bench = benchmark_expectation(model, params);
  const Scalar naive = infinite_naive(model, params);
  const auto bench_low = agent_outcome(theta, 4, Rule::sophisticated, bench, bench, params, d1);
  const auto bench_high = agent_outcome(theta, 6, Rule::sophisticated, bench, bench, params, d1);
  const auto naive_low = agent_outcome(theta, 4, Rule::naive, naive, bench, params, d1);
  const auto naive_high = agent_outcome(theta, 6, Rule::naive, naive, bench, params, d1);
  const Scalar average = population_average_action(model, params, bench);

  ExampleReport rep{exact, {}};
  auto exact_check = [&](std::string name, const Scalar& v, std::int64_t num, std::int64_t den, std::string prov) {
    const Scalar target = ratio<Scalar>(num, den);
    ExampleCheck c;
    c.name = std::move(name);
    c.numeric = to_double(v);
    c.expected = std::to_string(num) + "/" + std::to_string(den);
    c.provenance = std::move(prov);
    if constexpr (exact) {
      c.value = to_string(v);
      c.tolerance = 0.0;
      c.pass = v == target;
    } else {
      c.value = format_double(c.numeric);
      c.tolerance = 1e-12;
      c.pass = std::abs(c.numeric - to_double(target)) <= c.tolerance;
    }
    rep.checks.push_back(std::move(c));
  };
  auto rounded_check = [&](std::string name, const Scalar& v, double printed, std::string prov) {
    ExampleCheck c;
    c.name = std::move(name);
    c.numeric = to_double(v);
    if constexpr (exact) {
      c.value = to_string(v);
    } else {
      c.value = format_double(c.numeric);
    }
    c.expected = format_double(printed);
    c.tolerance = 5e-4;
    c.pass = std::abs(c.numeric - printed) <= c.tolerance;
    c.provenance = std::move(prov);
    rep.checks.push_back(std::move(c));
  };

  exact_check("observed_high_share", observed[1], 1, 2, "degree-biased neighbor mix d_k delta_k / sum d delta");
  exact_check("sophisticated_estimate_high", soph.values[1], 4, 10, "MLE (obs_k / d_k) / sum (obs / d)");
  exact_check("benchmark_expectation", bench, 15, 36, "E[theta] / (c - alpha E[rho])");
  exact_check("naive_expectation", naive, 1, 2, "E[theta] / (c - alpha E[rho^2] / E[rho])");
  exact_check("benchmark_action_low", bench_low.action, 13, 36, "best response at the benchmark expectation, d = 4");
  exact_check("benchmark_action_high", bench_high.action, 18, 36, "best response at the benchmark expectation, d = 6");
  exact_check("naive_action_low", naive_low.action, 15, 36, "best response at the naive expectation, d = 4");
  exact_check("naive_action_high", naive_high.action, 21, 36, "best response at the naive expectation, d = 6");
  exact_check("average_benchmark_action", average, 15, 36, "delta-weighted benchmark actions");
  rounded_check("benchmark_utility_low", bench_low.utility, 0.3912, "utility at benchmark action and expectation, d = 4");
  rounded_check("benchmark_utility_high", bench_high.utility, 0.75, "utility at benchmark action and expectation, d = 6");
  rounded_check("naive_expected_utility_low", naive_low.expected_utility_under_truth, 0.3819,
                "naive action scored against the benchmark expectation, d = 4");
  rounded_check("naive_expected_utility_high", naive_high.expected_utility_under_truth, 0.7291,
                "naive action scored against the benchmark expectation, d = 6");
  return rep;
}

inline ExampleReport run_example(bool exact) { return exact ? run_example<Rational>() : run_example<double>(); }

// ---- figure datasets ------------------------------------------------------------

inline std::string series_label(std::initializer_list<std::pair<const char*, std::string>> parts) {
  std::string s;
  for (const auto& [k, v] : parts) {
    if (!s.empty()) s += ';';
    s += k;
    s += '=';
    s += v;
  }
  return s;
}

inline std::vector<int> two_class_degrees(int d1, double epsilon) {
  const double high = d1 * (1.0 + epsilon);
  if (std::abs(high - std::round(high)) > 1e-9) {
    throw Error("d_1 = " + std::to_string(d1) + " with eps = " + format_double(epsilon) + " gives a non-integer high degree");
  }
  return {d1, static_cast<int>(std::round(high))};
}

// Expectations vs delta_2 for every (sigma, d_1); d_1 = "inf" uses the closed forms.
inline std::vector<CurveRow> fig1_rows(const ExperimentConfig& cfg) {
  const double eps = parse_number<double>(cfg.eps.at(0));
  const auto grid = clamped_unit_grid(static_cast<std::size_t>(cfg.grid.value_or(21)));
  std::vector<CurveRow> rows;
  for (const auto& s : cfg.sigma) {
    const auto params = cfg.params<double>(s);
    for (const auto& d1s : cfg.d1) {
      const std::string series = series_label({{"sigma", s}, {"d1", d1s}});
      if (d1s == "inf") {
        const auto degrees = two_class_degrees(1, eps);
        for (double x : grid) {
          const auto model = DegreeModel<double>::two_class(degrees[0], degrees[1], x);
          for (Rule rule : {Rule::naive, Rule::sophisticated}) {
            CurveRow r{series, x, to_string(rule), std::nullopt, "closed-form"};
            try {
              r.value = infinite_expectation(rule, model, params);
            } catch (const StabilityError&) {
              r.flags = "unstable";
            }
            rows.push_back(std::move(r));
          }
        }
        continue;
      }
      const auto degrees = two_class_degrees(std::stoi(d1s), eps);
      std::optional<EquilibriumSolution> sol;
      try {
        sol = solve_direct(build_pi(degrees, params.sigma), SolverParams::from(params));
      } catch (const StabilityError&) {
      }
      for (double x : grid) {
        for (Rule rule : {Rule::naive, Rule::sophisticated}) {
          CurveRow r{series, x, to_string(rule), std::nullopt, "finite"};
          if (sol) {
            r.value = population_mean_expectation(*sol, {1.0 - x, x}, rule);
          } else {
            r.flags = "unstable";
          }
          rows.push_back(std::move(r));
        }
      }
    }
  }
  return rows;
}

inline std::vector<double> sigma_grid(const ExperimentConfig& cfg) {
  const int points = cfg.grid.value_or(101);
  std::vector<double> g;
  for (int i = 0; i < points; ++i) g.push_back(static_cast<double>(i) / (points - 1));
  return g;
}

// Naive, sophisticated and benchmark expectations vs sigma (infinite precision).
inline std::vector<CurveRow> fig3_rows(const ExperimentConfig& cfg) {
  const auto model = cfg.model<double>();
  std::vector<CurveRow> rows;
  const auto base = cfg.params<double>("0");
  const std::string series = "expectation";
  for (double s : sigma_grid(cfg)) {
    const auto p = base.with_sigma(s);
    auto add = [&](const char* rule, auto&& f) {
      CurveRow r{series, s, rule, std::nullopt, ""};
      try {
        r.value = f();
      } catch (const StabilityError&) {
        r.flags = "unstable";
      }
      rows.push_back(std::move(r));
    };
    add("naive", [&] { return infinite_naive(model, p); });
    add("sophisticated", [&] { return infinite_sophisticated(model, p); });
    add("benchmark", [&] { return benchmark_expectation(model, p); });
  }
  return rows;
}

// Actions and utilities vs sigma per degree type. "utility" scores the chosen
// action against the benchmark expectation; "perceived_utility" against the
// agent's own expectation.
inline std::vector<CurveRow> fig4_rows(const ExperimentConfig& cfg) {
  const auto model = cfg.model<double>();
  const auto base = cfg.params<double>("0");
  const double theta = base.mean_preference;
  const int d1 = model.degree(0);
  std::vector<CurveRow> rows;
  for (double s : sigma_grid(cfg)) {
    const auto p = base.with_sigma(s);
    const double bench = benchmark_expectation(model, p);
    const double naive = infinite_naive(model, p);
    const double soph = infinite_sophisticated(model, p);
    for (int d : model.degrees()) {
      const std::string deg = std::to_string(d);
      for (auto [rule, e] : {std::pair<const char*, double>{"naive", naive}, {"sophisticated", soph}, {"benchmark", bench}}) {
        const auto o = agent_outcome(theta, d, Rule::naive, e, bench, p, d1);
        rows.push_back({series_label({{"quantity", "action"}, {"degree", deg}}), s, rule, o.action, ""});
        rows.push_back({series_label({{"quantity", "utility"}, {"degree", deg}}), s, rule, o.expected_utility_under_truth, ""});
        rows.push_back({series_label({{"quantity", "perceived_utility"}, {"degree", deg}}), s, rule, o.utility, ""});
      }
    }
  }
  return rows;
}

// Naive minus sophisticated estimate of the high share vs delta_2 per eps,
// followed by one argmax row per eps.
inline std::vector<CurveRow> fig5_rows(const ExperimentConfig& cfg) {
  const auto grid = clamped_unit_grid(static_cast<std::size_t>(cfg.grid.value_or(1001)));
  std::vector<CurveRow> rows;
  for (const auto& e : cfg.eps) {
    const double eps = parse_number<double>(e);
    const auto surface = bias_surface(eps, grid);
    const std::string series = series_label({{"eps", e}});
    for (const auto& pt : surface) rows.push_back({series, pt.delta2, "bias", pt.bias, ""});
    const auto best = bias_argmax(surface);
    rows.push_back({series, best.delta2, "bias", best.bias, "argmax"});
  }
  return rows;
}

inline std::vector<CurveRow> figure_rows(const std::string& figure, const ExperimentConfig& cfg) {
  if (figure == "fig1") return fig1_rows(cfg);
  if (figure == "fig3") return fig3_rows(cfg);
  if (figure == "fig4") return fig4_rows(cfg);
  if (figure == "fig5") return fig5_rows(cfg);
  throw Error("unknown figure '" + figure + "' (known: fig1, fig3, fig4, fig5)");
}

// ---- finite solve ---------------------------------------------------------------

inline Json solution_to_json(const EquilibriumSolution& sol) {
  Json arr = Json::array();
  for (std::size_t l = 0; l < sol.system->size(); ++l) {
    const auto& t = sol.system->types[l];
    arr.push_back({{"type", t.label()}, {"rule", to_string(t.rule)}, {"degree", t.degree},
                   {"observed", t.observed.values<double>()}, {"expectation", sol.xi(static_cast<Eigen::Index>(l))}});
  }
  return {{"method", to_string(sol.method)}, {"residual", sol.residual}, {"types", std::move(arr)}};
}

inline std::string solution_to_csv(const EquilibriumSolution& sol) {
  std::string out = "type,rule,degree,observed,expectation\n";
  for (std::size_t l = 0; l < sol.system->size(); ++l) {
    const auto& t = sol.system->types[l];
    std::string obs;
    for (std::size_t k = 0; k < t.observed.size(); ++k) {
      if (k) obs += '|';
      obs += format_double(t.observed.share<double>(k));
    }
    out += t.label() + ',' + to_string(t.rule) + ',' + std::to_string(t.degree) + ',' + obs + ',' +
           format_double(sol.xi(static_cast<Eigen::Index>(l))) + '\n';
  }
  return out;
}

// ---- simulation -----------------------------------------------------------------

inline constexpr double kMonteCarloTolerance = 0.01;
inline constexpr double kAssortativityLimit = 0.02;
inline constexpr int kMonteCarloMinNodes = 1000;

struct SimulationReport {
  Json body;
  bool pass = true;
};

// Per-trial checks need n >= 1000; smaller networks are only generated and
// described.
inline SimulationReport run_simulation(const ExperimentConfig& cfg) {
  const auto model = cfg.model<double>();
  const auto mode = cfg.simple ? GraphMode::simple : GraphMode::multigraph;
  SimulationReport rep;
  Json& j = rep.body;
  j["config"] = cfg.to_json();
  j["mode"] = to_string(mode);

  const auto first = generate(model, cfg.n, cfg.seed, mode, 0);
  const auto counts = first.class_counts();
  const auto realized = first.realized_degrees();
  const bool histogram_ok = realized == first.node_degree;
  j["network"] = {{"nodes", first.node_count()},     {"edges", first.edges.size()},
                  {"class_counts", counts},          {"parity_adjusted", first.parity_adjusted},
                  {"simple", first.is_simple()},     {"degree_histogram_matches", histogram_ok}};
  rep.pass = histogram_ok && (mode == GraphMode::multigraph || first.is_simple());

  if (cfg.n < kMonteCarloMinNodes) {
    j["checks"] = "skipped (n < 1000)";
    j["pass"] = rep.pass;
    return rep;
  }

  const auto mc = monte_carlo_estimator_check(model.degrees(), model.shares(), cfg.n, cfg.trials, cfg.seed, mode);
  const std::size_t top = model.size() - 1;
  const double truth = model.shares().back();
  int naive_ok = 0, pooled_ok = 0, per_node_ok = 0, assort_ok = 0;
  Json trials = Json::array();
  for (const auto& t : mc.per_trial) {
    const bool n_ok = std::abs(t.naive_mean[top] - mc.predicted_naive[top]) <= kMonteCarloTolerance;
    const bool s_ok = std::abs(t.pooled_sophisticated[top] - truth) <= kMonteCarloTolerance;
    const bool p_ok = std::abs(t.per_node_sophisticated_mean[top] - mc.predicted_per_node_sophisticated) <= kMonteCarloTolerance;
    const bool a_ok = std::isnan(t.assortativity) || std::abs(t.assortativity) < kAssortativityLimit;
    naive_ok += n_ok;
    pooled_ok += s_ok;
    per_node_ok += p_ok;
    assort_ok += a_ok;
    trials.push_back({{"naive_mean", t.naive_mean[top]},
                      {"sophisticated_pooled", t.pooled_sophisticated[top]},
                      {"sophisticated_per_node_mean", t.per_node_sophisticated_mean[top]},
                      {"naive_sd_by_class", t.naive_sd_by_class},
                      {"sophisticated_sd_by_class", t.sophisticated_sd_by_class},
                      {"assortativity", std::isnan(t.assortativity) ? Json(nullptr) : Json(t.assortativity)}});
  }
  const int needed = static_cast<int>(std::ceil(0.95 * cfg.trials));
  auto mean_of = [&](auto&& f) {
    double s = 0;
    for (const auto& t : mc.per_trial) s += f(t);
    return s / static_cast<double>(mc.per_trial.size());
  };
  auto sd_of = [&](auto&& f) {
    const double m = mean_of(f);
    double s = 0;
    for (const auto& t : mc.per_trial) s += (f(t) - m) * (f(t) - m);
    return mc.per_trial.size() > 1 ? std::sqrt(s / static_cast<double>(mc.per_trial.size() - 1)) : 0.0;
  };
  auto naive_f = [&](const TrialSummary& t) { return t.naive_mean[top]; };
  auto pooled_f = [&](const TrialSummary& t) { return t.pooled_sophisticated[top]; };
  auto per_node_f = [&](const TrialSummary& t) { return t.per_node_sophisticated_mean[top]; };
  const bool assort_checked = cfg.n >= 10000;
  j["predicted"] = {{"naive", mc.predicted_naive[top]},
                    {"sophisticated", truth},
                    {"sophisticated_per_node", mc.predicted_per_node_sophisticated}};
  j["summary"] = {{"naive_mean", mean_of(naive_f)},
                  {"naive_sd", sd_of(naive_f)},
                  {"sophisticated_pooled_mean", mean_of(pooled_f)},
                  {"sophisticated_pooled_sd", sd_of(pooled_f)},
                  {"sophisticated_per_node_mean", mean_of(per_node_f)},
                  {"sophisticated_per_node_sd", sd_of(per_node_f)}};
  j["checks"] = {{"tolerance", kMonteCarloTolerance},
                 {"required_trials", needed},
                 {"naive_within", naive_ok},
                 {"sophisticated_pooled_within", pooled_ok},
                 {"sophisticated_per_node_within", per_node_ok},
                 {"assortativity_checked", assort_checked},
                 {"assortativity_within", assort_ok}};
  j["trials"] = std::move(trials);
  rep.pass = rep.pass && naive_ok >= needed && pooled_ok >= needed && per_node_ok >= needed &&
             (!assort_checked || assort_ok >= needed);
  j["pass"] = rep.pass;
  return rep;
}

}  // namespace netgame
