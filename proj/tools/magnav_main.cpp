// Command line front end: map generation, single simulation runs, and
// weight-ratio sweeps. Exit codes: 0 success, 1 bad configuration or
// unreadable input, 2 failure while running or writing results.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "magnav/errors.hpp"
#include "magnav/grid_map.hpp"
#include "magnav/sim.hpp"
#include "magnav/sim_config.hpp"
#include "magnav/trace.hpp"

namespace {

int cmd_genmap(const std::string& spec_path, const std::string& out_path) {
  magnav::MapBuildSpec spec;
  try {
    spec = magnav::load_map_spec(spec_path);
  } catch (const magnav::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  try {
    magnav::GridMap map = magnav::build_map(spec);
    magnav::save_map(map, out_path);
    std::cout << "wrote " << out_path << " (" << map.nx() << " x " << map.ny()
              << " nodes, " << map.resolution() << " m resolution)\n";
  } catch (const magnav::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cmd_simulate(const std::string& cfg_path, const std::string& out_path) {
  magnav::SimConfig cfg;
  std::optional<magnav::GridMap> map;
  try {
    cfg = magnav::load_config(cfg_path);
    map = magnav::load_sim_map(cfg);
  } catch (const magnav::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  try {
    magnav::SimResult res = magnav::run_sim(cfg, *map);
    magnav::write_trace(res.records, out_path);
    std::cout << "wrote " << out_path << ": " << res.records.size()
              << " steps, goal " << (res.reached_goal ? "reached" : "not reached")
              << "\n";
    if (cfg.planner == magnav::PlannerKind::eer)
      std::cout << "total_entropy_reduction: " << res.metric << "\n";
    else
      std::cout << "mean_trace_pos: " << res.metric << "\n";
  } catch (const magnav::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

std::vector<double> parse_ratio_list(const std::string& csv) {
  std::vector<double> out;
  std::size_t begin = 0;
  while (begin <= csv.size()) {
    std::size_t end = csv.find(',', begin);
    if (end == std::string::npos) end = csv.size();
    std::string tok = csv.substr(begin, end - begin);
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    double v = 0.0;
    std::size_t used = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (tok.empty() || used != tok.size())
      throw magnav::InvalidArgument("--ratios: bad value '" + tok + "'");
    out.push_back(v);
    begin = end + 1;
  }
  return out;
}

int cmd_sweep(const std::string& cfg_path, const std::string& ratios_csv,
              int n_seeds, const std::string& out_path) {
  magnav::SimConfig cfg;
  std::vector<double> ratios;
  try {
    cfg = magnav::load_config(cfg_path);
    if (n_seeds < 1)
      throw magnav::InvalidArgument("--seeds must be at least 1");
    ratios = parse_ratio_list(ratios_csv);
  } catch (const magnav::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  try {
    std::vector<std::uint64_t> seeds;
    seeds.reserve(static_cast<std::size_t>(n_seeds));
    for (int k = 0; k < n_seeds; ++k)
      seeds.push_back(cfg.seed + static_cast<std::uint64_t>(k));
    std::vector<magnav::SweepRow> rows =
        magnav::sweep_ratios(cfg, ratios, seeds);
    magnav::write_sweep_csv(rows, out_path);
    int failed = 0;
    bool flagged = false;
    for (const auto& r : rows) {
      failed += r.n_failed;
      flagged = flagged || r.flagged;
    }
    std::cout << "wrote " << out_path << " (" << rows.size() << " ratios x "
              << n_seeds << " seeds)\n";
    if (failed > 0) std::cout << failed << " runs failed; see n_failed\n";
    if (flagged)
      std::cout << "note: ratios above 2 are flagged in the output\n";
  } catch (const magnav::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magnetic anomaly map navigation simulator"};
  app.require_subcommand(1);

  std::string gen_spec, gen_out;
  CLI::App* gen = app.add_subcommand(
      "genmap", "Generate a map file from a Gaussian source spec");
  gen->add_option("spec", gen_spec, "source spec file")->required();
  gen->add_option("-o,--output", gen_out, "output map file")->required();

  std::string sim_cfg, sim_out;
  CLI::App* sim =
      app.add_subcommand("simulate", "Run one closed-loop simulation");
  sim->add_option("-c,--config", sim_cfg, "run config file")->required();
  sim->add_option("-o,--output", sim_out, "output trace CSV")->required();

  std::string sweep_cfg, sweep_out, ratios_csv;
  int n_seeds = 20;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run the configured sim over W_obs/W_goal ratios and seeds");
  sweep->add_option("-c,--config", sweep_cfg, "run config file")->required();
  sweep
      ->add_option("--ratios", ratios_csv,
                   "comma separated W_obs/W_goal ratios")
      ->required();
  sweep->add_option("--seeds", n_seeds,
                    "seed count; seeds run from the config seed upward")
      ->required();
  sweep->add_option("-o,--output", sweep_out, "output summary CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (gen->parsed()) return cmd_genmap(gen_spec, gen_out);
    if (sim->parsed()) return cmd_simulate(sim_cfg, sim_out);
    if (sweep->parsed())
      return cmd_sweep(sweep_cfg, ratios_csv, n_seeds, sweep_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
