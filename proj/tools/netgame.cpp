// netgame: worked example, figure data, network simulation and finite solves.

#include "netgame/experiments.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>

namespace {

using netgame::ExperimentConfig;
using netgame::Json;

struct Options {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> handles;
  std::map<std::string, bool> flags;
};

void add_common(CLI::App* cmd, Options& o) {
  auto opt = [&](const char* key, const char* help) {
    o.handles[key] = cmd->add_option(std::string("--") + key, o.values[key], help);
  };
  auto flag = [&](const char* key, const char* help) {
    o.handles[key] = cmd->add_flag(std::string("--") + key, o.flags[key], help);
  };
  cmd->add_option("--config", o.config_file, "key = value file; flags override it");
  opt("preset", "example | fig1");
  opt("model", "degrees:shares, e.g. 4,6:0.6,0.4");
  opt("etheta", "mean preference E[theta]");
  opt("alpha", "peer-effect weight");
  opt("c", "cost of effort");
  opt("sigma", "share(s) of sophisticated agents, comma-separated");
  opt("d1", "low degrees for the precision axis, comma-separated; inf for the limit");
  opt("eps", "excess ratio(s), comma-separated");
  opt("grid", "points on the sweep axis");
  opt("seed", "RNG seed");
  opt("n", "network size");
  opt("trials", "Monte Carlo trials");
  opt("out", "output directory (default: $NETGAME_OUT)");
  flag("exact", "exact rational arithmetic");
  flag("json", "JSON instead of text/CSV on stdout");
  flag("simple", "repair the sampled network into a simple graph");
  flag("dump-pi", "also write the expectation matrix as CSV");
}

ExperimentConfig resolve(const Options& o) {
  std::map<std::string, std::string> kv;
  if (!o.config_file.empty()) kv = netgame::load_key_values(o.config_file);
  for (const auto& [key, handle] : o.handles) {
    if (handle->count() == 0) continue;
    if (auto f = o.flags.find(key); f != o.flags.end()) {
      kv[key] = f->second ? "true" : "false";
    } else {
      kv[key] = o.values.at(key);
    }
  }
  if (!kv.count("out")) {
    if (const char* env = std::getenv("NETGAME_OUT")) kv["out"] = env;
  }
  return ExperimentConfig::from_map(kv);
}

int cmd_example(const ExperimentConfig& cfg) {
  const auto rep = netgame::run_example(cfg.exact);
  const std::string text = cfg.json ? rep.to_json().dump(2) + "\n" : rep.to_text();
  std::cout << text;
  if (!cfg.out.empty()) netgame::write_file_atomic(std::filesystem::path(cfg.out) / "example.json", rep.to_json().dump(2) + "\n");
  return rep.pass() ? 0 : 1;
}

int cmd_sweep(const std::string& figure, const ExperimentConfig& cfg) {
  const auto rows = netgame::figure_rows(figure, cfg);
  const std::string csv = netgame::curves_to_csv(rows);
  const Json doc = {{"figure", figure}, {"config", cfg.to_json()}, {"rows", netgame::curves_to_json(rows)}};
  if (!cfg.out.empty()) {
    const std::filesystem::path dir(cfg.out);
    netgame::write_file_atomic(dir / (figure + ".csv"), csv);
    netgame::write_file_atomic(dir / (figure + ".json"), doc.dump(2) + "\n");
    std::size_t skipped = 0;
    for (const auto& r : rows) skipped += !r.value.has_value();
    std::cerr << figure << ": " << rows.size() << " rows (" << skipped << " skipped) written to " << dir.string() << "\n";
  } else {
    std::cout << (cfg.json ? doc.dump(2) + "\n" : csv);
  }
  return 0;
}

int cmd_simulate(const ExperimentConfig& cfg) {
  const auto rep = netgame::run_simulation(cfg);
  std::cout << rep.body.dump(2) << "\n";
  if (!cfg.out.empty()) {
    const std::filesystem::path dir(cfg.out);
    const auto model = cfg.model<double>();
    const auto net = netgame::generate(model, cfg.n, cfg.seed,
                                       cfg.simple ? netgame::GraphMode::simple : netgame::GraphMode::multigraph, 0);
    std::ostringstream edges;
    netgame::write_edge_list(edges, net);
    netgame::write_file_atomic(dir / "network.edges", edges.str());
    const Json meta = {{"seed", cfg.seed},
                       {"nodes", net.node_count()},
                       {"mode", netgame::to_string(net.mode)},
                       {"degrees", net.degrees},
                       {"shares", net.shares},
                       {"class_counts", net.class_counts()},
                       {"node_degree", net.node_degree},
                       {"parity_adjusted", net.parity_adjusted}};
    netgame::write_file_atomic(dir / "network.json", meta.dump(2) + "\n");
    netgame::write_file_atomic(dir / "simulate.json", rep.body.dump(2) + "\n");
  }
  return rep.pass ? 0 : 1;
}

int cmd_solve(const ExperimentConfig& cfg) {
  const auto model = cfg.model<double>();
  const auto params = cfg.params<double>();
  const auto system = std::make_shared<const netgame::ExpectationMatrix>(netgame::build_pi(model, params));
  const auto sol = netgame::solve_direct(system, netgame::SolverParams::from(params));
  const Json doc = netgame::solution_to_json(sol);
  const std::string csv = netgame::solution_to_csv(sol);
  std::cout << (cfg.json ? doc.dump(2) + "\n" : csv);
  if (!cfg.out.empty()) {
    const std::filesystem::path dir(cfg.out);
    netgame::write_file_atomic(dir / "solution.csv", csv);
    netgame::write_file_atomic(dir / "solution.json", doc.dump(2) + "\n");
    if (cfg.dump_pi) {
      std::ostringstream pi;
      netgame::write_pi_csv(pi, *system);
      netgame::write_file_atomic(dir / "pi.csv", pi.str());
    }
  } else if (cfg.dump_pi) {
    netgame::write_pi_csv(std::cerr, *system);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network game with degree-biased neighbor sampling"};
  app.require_subcommand(1);

  Options example_opts, sweep_opts, simulate_opts, solve_opts;
  auto* example = app.add_subcommand("example", "worked two-class example with checks");
  add_common(example, example_opts);

  auto* sweep = app.add_subcommand("sweep", "figure datasets (fig1, fig3, fig4, fig5)");
  std::string figure;
  sweep->add_option("figure", figure, "fig1 | fig3 | fig4 | fig5")->required();
  add_common(sweep, sweep_opts);

  auto* simulate = app.add_subcommand("simulate", "configuration-model estimator checks");
  add_common(simulate, simulate_opts);

  auto* solve = app.add_subcommand("solve", "finite-precision equilibrium for one setting");
  add_common(solve, solve_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (example->parsed()) return cmd_example(resolve(example_opts));
    if (sweep->parsed()) return cmd_sweep(figure, resolve(sweep_opts));
    if (simulate->parsed()) return cmd_simulate(resolve(simulate_opts));
    if (solve->parsed()) return cmd_solve(resolve(solve_opts));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
