#ifndef MAGNAV_SIM_HPP
#define MAGNAV_SIM_HPP

#include <string>
#include <vector>

#include "magnav/sim_config.hpp"
#include "magnav/trace.hpp"

namespace magnav {

struct SimResult {
  std::vector<SimTraceRecord> records;
  bool reached_goal = false;
  // Run metric used by sweeps: time-averaged trace_pos for particle filter
  // runs, total entropy reduction (initial minus final belief entropy) for
  // entropy planner runs.
  double metric = 0.0;
};

// Closed loop with the particle filter and the receding-horizon planner
// (PlannerKind::straight swaps in a greedy goal-seeking planner: horizon 2
// with the terminal state charged and w_obs = 0; two steps because the
// position only feels a turn one step later). Each step: plan from the
// current estimate, apply the first control to the noisy truth, propagate
// the filter, optionally measure / reweight / resample per the active
// measurement period, then log. Deterministic given (config, seed).
SimResult run_observability_sim(const SimConfig& cfg, const GridMap& map);

// Closed loop with the belief grid: measure and update, choose the action,
// move the noisy truth, predict the belief, log. The logged entropy is the
// end-of-step (post-prediction) value. Deterministic given (config, seed).
SimResult run_eer_sim(const SimConfig& cfg, const GridMap& map);

// Dispatch on cfg.planner; loads the map via load_sim_map.
SimResult run_sim(const SimConfig& cfg);
SimResult run_sim(const SimConfig& cfg, const GridMap& map);

// The belief an entropy planner run starts from (used by replay checks).
BeliefGrid initial_belief(const SimConfig& cfg, const GridMap& map);

// One sweep table row: statistics of the run metric across seeds at one
// W_obs / W_goal ratio.
struct SweepRow {
  double ratio = 0.0;
  double metric_mean = 0.0;
  double metric_std = 0.0;  // sample std (n - 1)
  int n_seeds = 0;
  int n_failed = 0;
  bool flagged = false;  // ratio > 2: weighting regime known to degrade
};

// Run the configured sim for every (ratio, seed) pair: W_obs is set to
// ratio * W_goal, the seed replaces cfg.seed. A failed run (library error)
// is counted and skipped; statistics cover the survivors. Each run owns an
// independent RNG seeded from its cell, so cells are order-independent.
std::vector<SweepRow> sweep_ratios(const SimConfig& base,
                                   const std::vector<double>& ratios,
                                   const std::vector<std::uint64_t>& seeds);

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path);

}  // namespace magnav

#endif
