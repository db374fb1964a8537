#include "magnav/obs_planner.hpp"

#include <cmath>
#include <limits>

#include "magnav/errors.hpp"

namespace magnav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Tie order between actions: closest to zero first, then lower index.
bool action_pref_less(const std::vector<double>& actions, int a, int b) {
  double ma = std::abs(actions[a]);
  double mb = std::abs(actions[b]);
  if (ma != mb) return ma < mb;
  return a < b;
}

bool sequence_pref_less(const std::vector<double>& actions,
                        const std::vector<int>& a, const std::vector<int>& b) {
  for (size_t k = 0; k < a.size(); ++k)
    if (a[k] != b[k]) return action_pref_less(actions, a[k], b[k]);
  return false;
}

void validate(const GridMap& map, const Pose& est,
              const ObsPlannerConfig& cfg) {
  if (cfg.horizon < 1) throw InvalidArgument("plan: horizon must be >= 1");
  if (cfg.action_set.empty())
    throw InvalidArgument("plan: empty action set");
  for (double a : cfg.action_set)
    if (!std::isfinite(a)) throw InvalidArgument("plan: non-finite action");
  if (!map.contains(est.x, est.y))
    throw InvalidArgument("plan: estimate is outside the map");
}

struct SubPlan {
  bool feasible = false;
  double cost = kInf;
  std::vector<int> actions;  // chosen action indices, this depth onward
};

// Cost-to-go over controls depth..horizon from `state`. Costs land on the
// first horizon-1 successor states (plus the last one when
// include_terminal); every successor state must stay on the map either
// way. Tail sums are accumulated cost-of-this-state + deeper-sum, so a
// flat enumeration adding costs back to front reproduces the exact same
// doubles.
SubPlan search(const GridMap& map, const Pose& state, int depth,
               const ObsPlannerConfig& cfg) {
  const int n_actions = static_cast<int>(cfg.action_set.size());
  SubPlan best;
  for (int ai = 0; ai < n_actions; ++ai) {
    ControlInput u{cfg.v, cfg.action_set[ai] / cfg.dt};
    Pose next = step_deterministic(state, u, cfg.dt);
    if (!map.contains(next.x, next.y)) continue;
    bool costed = depth < cfg.horizon || cfg.include_terminal;
    double c = 0.0;
    if (costed) {
      c = step_cost(map, next, u, cfg);
      if (c == kInf) continue;
    }
    SubPlan tail;
    if (depth == cfg.horizon) {
      tail.feasible = true;
      tail.cost = 0.0;
    } else {
      tail = search(map, next, depth + 1, cfg);
      if (!tail.feasible) continue;
    }
    double total = c + tail.cost;
    bool take = !best.feasible || total < best.cost ||
                (total == best.cost &&
                 action_pref_less(cfg.action_set, ai, best.actions.front()));
    if (take) {
      best.feasible = true;
      best.cost = total;
      best.actions.clear();
      best.actions.push_back(ai);
      best.actions.insert(best.actions.end(), tail.actions.begin(),
                          tail.actions.end());
    }
  }
  return best;
}

PlannedPath roll_out(const Pose& est, const std::vector<int>& action_idx,
                     double total_cost, const ObsPlannerConfig& cfg) {
  PlannedPath path;
  path.total_cost = total_cost;
  Pose state = est;
  for (int ai : action_idx) {
    double a = cfg.action_set[ai];
    ControlInput u{cfg.v, a / cfg.dt};
    state = step_deterministic(state, u, cfg.dt);
    path.controls.push_back(a);
    path.states.push_back(state);
  }
  return path;
}

}  // namespace

double step_cost(const GridMap& map, const Pose& pose, const ControlInput& u,
                 const ObsPlannerConfig& cfg) {
  if (!map.contains(pose.x, pose.y)) return kInf;
  double dx = pose.x - cfg.goal_x;
  double dy = pose.y - cfg.goal_y;
  double c = cfg.weights.w_goal * (dx * dx + dy * dy);
  if (cfg.weights.w_obs > 0.0) {
    // The derivative stencil needs one resolution of margin.
    if (!map.contains(pose.x, pose.y, map.resolution())) return kInf;
    Eigen::Matrix2d o = observability_matrix(map, pose, u);
    c += cfg.weights.w_obs * obs_cost(gramian_det(o), cfg.eps_det);
  }
  return c;
}

PlanResult plan(const GridMap& map, const Pose& est,
                const ObsPlannerConfig& cfg) {
  validate(map, est, cfg);
  SubPlan best = search(map, est, 1, cfg);
  if (!best.feasible)
    throw NoFeasiblePlan("plan: every action sequence leaves the map");
  PlanResult result;
  result.path = roll_out(est, best.actions, best.cost, cfg);
  result.first_control = result.path.controls.front();
  return result;
}

PlanResult brute_force_plan(const GridMap& map, const Pose& est,
                            const ObsPlannerConfig& cfg) {
  validate(map, est, cfg);
  const int n_actions = static_cast<int>(cfg.action_set.size());
  double count = std::pow(static_cast<double>(n_actions), cfg.horizon);
  if (count > 1e6)
    throw InvalidArgument("brute_force_plan: |action_set|^horizon > 1e6");

  std::vector<int> idx(cfg.horizon, 0);
  std::vector<double> costs(cfg.horizon, 0.0);
  bool have_best = false;
  double best_cost = kInf;
  std::vector<int> best_idx;

  while (true) {
    // Roll the sequence out; record per-state costs, bail on infeasible.
    bool feasible = true;
    Pose state = est;
    for (int d = 0; d < cfg.horizon; ++d) {
      ControlInput u{cfg.v, cfg.action_set[idx[d]] / cfg.dt};
      state = step_deterministic(state, u, cfg.dt);
      if (!map.contains(state.x, state.y)) {
        feasible = false;
        break;
      }
      bool costed = d + 1 < cfg.horizon || cfg.include_terminal;
      costs[d] = costed ? step_cost(map, state, u, cfg) : 0.0;
      if (costs[d] == kInf) {
        feasible = false;
        break;
      }
    }
    if (feasible) {
      // Back-to-front accumulation, matching the recursive search exactly.
      double total = 0.0;
      for (int d = cfg.horizon - 1; d >= 0; --d) total = costs[d] + total;
      bool take =
          !have_best || total < best_cost ||
          (total == best_cost && sequence_pref_less(cfg.action_set, idx,
                                                    best_idx));
      if (take) {
        have_best = true;
        best_cost = total;
        best_idx = idx;
      }
    }
    // Odometer increment.
    int d = cfg.horizon - 1;
    while (d >= 0) {
      if (++idx[d] < n_actions) break;
      idx[d] = 0;
      --d;
    }
    if (d < 0) break;
  }

  if (!have_best)
    throw NoFeasiblePlan(
        "brute_force_plan: every action sequence leaves the map");
  PlanResult result;
  result.path = roll_out(est, best_idx, best_cost, cfg);
  result.first_control = result.path.controls.front();
  return result;
}

}  // namespace magnav
