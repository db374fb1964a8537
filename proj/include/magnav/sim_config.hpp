#ifndef MAGNAV_SIM_CONFIG_HPP
#define MAGNAV_SIM_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "magnav/belief_grid.hpp"
#include "magnav/obs_planner.hpp"
#include "magnav/vehicle.hpp"

namespace magnav {

enum class PlannerKind { observability, eer, straight };

// Full description of one closed-loop run. Populated from a flat
// key = value config file; see load_config below for the key list.
struct SimConfig {
  PlannerKind planner = PlannerKind::observability;

  // Exactly one of these is set: a MAGMAP file or a source-spec file the
  // map is generated from.
  std::string map_file;
  std::string map_spec;

  Pose start;
  double goal_x = 0.0;
  double goal_y = 0.0;
  double goal_radius = 0.25;  // m
  int max_steps = 200;
  std::uint64_t seed = 0;

  double v = 0.2;   // m/s
  double dt = 1.0;  // s

  NoiseConfig noise;

  // Particle filter (observability / straight planners)
  int n_particles = 1000;
  double p0_sigma_x = 0.1;
  double p0_sigma_y = 0.1;
  double p0_sigma_theta = deg2rad(2.0);

  // Measurement scheduling: a measurement is taken every
  // measurement_period steps, or every fast_measurement_period steps while
  // gramian_det at the current estimate exceeds obs_rate_threshold.
  // A negative threshold means "derive it at map load time as the 75th
  // percentile of gramian_det over interior map nodes, evaluated at the
  // start-to-goal bearing".
  int measurement_period = 1;
  int fast_measurement_period = 1;
  double obs_rate_threshold = -1.0;

  // Receding-horizon planner parameters
  int horizon = 5;
  std::vector<double> obs_actions = {deg2rad(-45.0), deg2rad(-22.0), 0.0,
                                     deg2rad(22.0), deg2rad(45.0)};
  double w_goal = 1.0;
  double w_obs = 1.5;
  double eps_det = kDefaultEpsDet;
  bool include_terminal = false;

  // Entropy planner parameters
  std::vector<double> eer_actions = {deg2rad(-40.0), deg2rad(-20.0), 0.0,
                                     deg2rad(20.0), deg2rad(40.0)};
  double belief_resolution = 0.25;
  // Negative = derive from odometry noise: sigma_xy_per_step scaled to the
  // commanded step length.
  double kernel_sigma = -1.0;
  int n_z = 21;
};

// Parse a config file. Syntax: one "key = value" per line, '#' comments,
// blank lines ignored. Unknown keys and missing required keys are
// ConfigErrors naming the key (and line). Relative paths in map_file /
// map_spec are resolved against the config file's directory.
//
// Required keys: planner, map_file or map_spec (exactly one), start_x,
// start_y, goal_x, goal_y, seed.
// Optional keys (defaults above): start_theta, goal_radius, max_steps,
// v, dt, sigma_z, sigma_xy_per_step, sigma_theta_per_step_deg,
// n_particles, p0_sigma_x, p0_sigma_y, p0_sigma_theta_deg,
// measurement_period, fast_measurement_period, obs_rate_threshold,
// horizon, obs_actions_deg, w_goal, w_obs, eps_det, include_terminal,
// eer_actions_deg_s, belief_resolution, kernel_sigma, n_z.
SimConfig load_config(const std::string& path);

// Load or generate the map named by the config.
GridMap load_sim_map(const SimConfig& cfg);

ObsPlannerConfig make_obs_planner_config(const SimConfig& cfg);
EerPlannerConfig make_eer_planner_config(const SimConfig& cfg);

// Resolved motion kernel sigma (handles the negative = auto convention).
double effective_kernel_sigma(const SimConfig& cfg);

}  // namespace magnav

#endif
