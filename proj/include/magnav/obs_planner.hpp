#ifndef MAGNAV_OBS_PLANNER_HPP
#define MAGNAV_OBS_PLANNER_HPP

#include <vector>

#include "magnav/observability.hpp"

namespace magnav {

struct PlannerWeights {
  double w_goal = 1.0;
  double w_obs = 1.5;
};

// Receding-horizon planner over a discrete set of heading changes.
// action_set entries are heading change per planning step (rad); the
// control applied over one step of length dt is omega = action / dt.
struct ObsPlannerConfig {
  int horizon = 5;                  // p >= 1
  std::vector<double> action_set;   // rad per planning step
  double v = 0.2;                   // m/s
  double dt = 1.0;                  // s per planning step
  PlannerWeights weights;
  double goal_x = 0.0;
  double goal_y = 0.0;
  double eps_det = kDefaultEpsDet;
  // Cost is accumulated at the first horizon-1 successor states. Setting
  // this also charges the final state, which makes horizon = 1 greedy
  // instead of vacuous.
  bool include_terminal = false;
};

struct PlannedPath {
  std::vector<double> controls;  // chosen heading changes, length = horizon
  std::vector<Pose> states;      // successor states, length = horizon
  double total_cost = 0.0;
};

struct PlanResult {
  double first_control = 0.0;  // heading change (rad) to apply this step
  PlannedPath path;
};

// Cost of being at `pose`: w_goal * squared distance to goal plus
// w_obs * obs_cost at the pose. Off-map poses (or poses whose finite
// difference stencil leaves the map, when w_obs > 0) cost +infinity.
// The obs term is skipped entirely when w_obs == 0.
double step_cost(const GridMap& map, const Pose& pose, const ControlInput& u,
                 const ObsPlannerConfig& cfg);

// Backward-induction search over action sequences of length `horizon`,
// rolled out noise-free from `est`. Any sequence whose states leave the
// map is infeasible. Ties are broken by preferring the action closest to
// zero, then the lower index in action_set, stage by stage from the first
// control. Throws NoFeasiblePlan if every sequence is infeasible.
PlanResult plan(const GridMap& map, const Pose& est,
                const ObsPlannerConfig& cfg);

// Flat enumeration of every action sequence with the identical cost
// function, rollout, float accumulation order and tie-breaks. Exists as a
// cross-check for plan(); refuses |action_set|^horizon > 1e6.
PlanResult brute_force_plan(const GridMap& map, const Pose& est,
                            const ObsPlannerConfig& cfg);

}  // namespace magnav

#endif
