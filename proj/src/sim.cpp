#include "magnav/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "magnav/belief_grid.hpp"
#include "magnav/errors.hpp"
#include "magnav/observability.hpp"
#include "magnav/obs_planner.hpp"
#include "magnav/particle_filter.hpp"

namespace magnav {

namespace {

std::string at_step(int step, const char* what) {
  return "step " + std::to_string(step) + ": " + what;
}

bool at_goal(const SimConfig& cfg, const Pose& truth) {
  return std::hypot(truth.x - cfg.goal_x, truth.y - cfg.goal_y) <=
         cfg.goal_radius;
}

void check_endpoints(const SimConfig& cfg, const GridMap& map) {
  if (!map.contains(cfg.start.x, cfg.start.y))
    throw InvalidArgument("start pose is outside the map");
  if (!map.contains(cfg.goal_x, cfg.goal_y))
    throw InvalidArgument("goal is outside the map");
}

// 75th percentile (nearest rank) of gramian_det over interior map nodes,
// evaluated at the start-to-goal bearing. Interior nodes keep the finite
// difference stencil on the map.
double auto_obs_rate_threshold(const GridMap& map, const SimConfig& cfg) {
  double bearing =
      std::atan2(cfg.goal_y - cfg.start.y, cfg.goal_x - cfg.start.x);
  ControlInput u{cfg.v, 0.0};
  std::vector<double> dets;
  for (int i = 1; i + 1 < map.nx(); ++i) {
    for (int j = 1; j + 1 < map.ny(); ++j) {
      Pose p{map.origin_x() + i * map.resolution(),
             map.origin_y() + j * map.resolution(), bearing};
      dets.push_back(gramian_det(observability_matrix(map, p, u)));
    }
  }
  if (dets.empty()) return std::numeric_limits<double>::infinity();
  std::sort(dets.begin(), dets.end());
  std::size_t rank = (3 * dets.size() + 3) / 4;  // ceil(0.75 n), in [1, n]
  return dets[rank - 1];
}

Eigen::Matrix3d initial_covariance(const SimConfig& cfg) {
  Eigen::Matrix3d p0 = Eigen::Matrix3d::Zero();
  p0(0, 0) = cfg.p0_sigma_x * cfg.p0_sigma_x;
  p0(1, 1) = cfg.p0_sigma_y * cfg.p0_sigma_y;
  p0(2, 2) = cfg.p0_sigma_theta * cfg.p0_sigma_theta;
  return p0;
}

struct BeliefStats {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double trace_pos = 0.0;
};

BeliefStats belief_stats(const BeliefGrid& b) {
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (int i = 0; i < b.nx(); ++i) {
    for (int j = 0; j < b.ny(); ++j) {
      double m = b.mass(i, j);
      sw += m;
      sx += m * b.cell_center_x(i);
      sy += m * b.cell_center_y(j);
    }
  }
  if (sw <= 0.0) throw DegenerateBelief("belief has no mass");
  BeliefStats s;
  s.mean_x = sx / sw;
  s.mean_y = sy / sw;
  double sxx = 0.0, syy = 0.0;
  for (int i = 0; i < b.nx(); ++i) {
    for (int j = 0; j < b.ny(); ++j) {
      double m = b.mass(i, j);
      double dx = b.cell_center_x(i) - s.mean_x;
      double dy = b.cell_center_y(j) - s.mean_y;
      sxx += m * dx * dx;
      syy += m * dy * dy;
    }
  }
  s.trace_pos = (sxx + syy) / sw;
  return s;
}

std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

}  // namespace

SimResult run_observability_sim(const SimConfig& cfg, const GridMap& map) {
  check_endpoints(cfg, map);

  ObsPlannerConfig pcfg = make_obs_planner_config(cfg);
  if (cfg.planner == PlannerKind::straight) {
    // Greedy goal seeking. Two steps, not one: position advances along the
    // pre-turn heading, so the first successor state is the same for every
    // action and only the second one feels the turn.
    pcfg.horizon = 2;
    pcfg.include_terminal = true;
    pcfg.weights.w_obs = 0.0;
  }

  double threshold = cfg.obs_rate_threshold >= 0.0
                         ? cfg.obs_rate_threshold
                         : auto_obs_rate_threshold(map, cfg);

  Rng truth_rng(stream_seed(cfg.seed, 0));
  Rng filter_rng(stream_seed(cfg.seed, 1));

  ParticleSet pf =
      init_particle_set(cfg.start, initial_covariance(cfg), cfg.n_particles,
                        filter_rng);

  Pose truth = cfg.start;
  SimResult result;
  double trace_sum = 0.0;
  int since_meas = 0;

  for (int step = 0; step < cfg.max_steps; ++step) {
    if (at_goal(cfg, truth)) {
      result.reached_goal = true;
      break;
    }
    try {
      Pose est = estimate_mean(pf);

      // Schedule and planning both look at the estimate as the step begins.
      // The det is undefined when the stencil hangs off the map; treat that
      // as "not above threshold" and log an empty field.
      std::optional<double> det;
      if (map.contains(est.x, est.y, map.resolution())) {
        det = gramian_det(observability_matrix(map, est, {cfg.v, 0.0}));
      }
      int period = (det && *det > threshold) ? cfg.fast_measurement_period
                                             : cfg.measurement_period;

      PlanResult pr = plan(map, est, pcfg);
      ControlInput u{cfg.v, pr.first_control / cfg.dt};

      truth = step_noisy(truth, u, cfg.dt, cfg.noise, truth_rng);
      propagate(pf, u, cfg.dt, cfg.noise, filter_rng);

      std::optional<double> z;
      if (++since_meas >= period) {
        since_meas = 0;
        z = measure(map, truth, cfg.noise.sigma_z, truth_rng);
        update_weights(pf, map, *z, cfg.noise.sigma_z);
        if (effective_sample_size(pf) < 0.5 * pf.size())
          resample_systematic(pf, filter_rng);
      }

      SimTraceRecord r;
      r.step = step;
      r.truth = truth;
      r.estimate = estimate_mean(pf);
      r.trace_pos = trace_position(pf);
      r.meas = z;
      r.control = u;
      r.gramian_det = det;
      trace_sum += r.trace_pos;
      result.records.push_back(r);
    } catch (const NoFeasiblePlan& e) {
      throw NoFeasiblePlan(at_step(step, e.what()));
    } catch (const DegenerateWeights& e) {
      throw DegenerateWeights(at_step(step, e.what()));
    } catch (const AmbiguousHeading& e) {
      throw AmbiguousHeading(at_step(step, e.what()));
    } catch (const OutOfBounds& e) {
      throw OutOfBounds(at_step(step, e.what()));
    }
  }
  if (!result.reached_goal) result.reached_goal = at_goal(cfg, truth);
  result.metric = result.records.empty()
                      ? 0.0
                      : trace_sum / static_cast<double>(result.records.size());
  return result;
}

SimResult run_eer_sim(const SimConfig& cfg, const GridMap& map) {
  check_endpoints(cfg, map);

  EerPlannerConfig pcfg = make_eer_planner_config(cfg);
  Rng truth_rng(stream_seed(cfg.seed, 0));

  BeliefGrid belief = initial_belief(cfg, map);
  Pose truth = cfg.start;

  SimResult result;
  double initial_h = entropy(belief);
  double final_h = initial_h;

  for (int step = 0; step < cfg.max_steps; ++step) {
    if (at_goal(cfg, truth)) {
      result.reached_goal = true;
      break;
    }
    try {
      double z = measure(map, truth, cfg.noise.sigma_z, truth_rng);
      belief = measurement_update(belief, z, map, pcfg.sigma_z);
      double h_meas = entropy(belief);

      ControlInput u = choose_action(belief, map, pcfg);

      truth = step_noisy(truth, u, cfg.dt, cfg.noise, truth_rng);
      belief = predict(belief, u, cfg.dt, pcfg.motion_kernel_sigma);
      double h_pred = entropy(belief);

      SimTraceRecord r;
      r.step = step;
      r.truth = truth;
      BeliefStats bs = belief_stats(belief);
      r.estimate = {bs.mean_x, bs.mean_y, belief.heading()};
      r.trace_pos = bs.trace_pos;
      r.entropy = h_pred;
      r.entropy_post_meas = h_meas;
      r.meas = z;
      r.control = u;
      result.records.push_back(r);
      final_h = h_pred;
    } catch (const DegenerateBelief& e) {
      throw DegenerateBelief(at_step(step, e.what()));
    } catch (const OutOfBounds& e) {
      throw OutOfBounds(at_step(step, e.what()));
    }
  }
  if (!result.reached_goal) result.reached_goal = at_goal(cfg, truth);
  result.metric = initial_h - final_h;
  return result;
}

SimResult run_sim(const SimConfig& cfg, const GridMap& map) {
  return cfg.planner == PlannerKind::eer ? run_eer_sim(cfg, map)
                                         : run_observability_sim(cfg, map);
}

SimResult run_sim(const SimConfig& cfg) {
  GridMap map = load_sim_map(cfg);
  return run_sim(cfg, map);
}

BeliefGrid initial_belief(const SimConfig& cfg, const GridMap& map) {
  BeliefGrid b =
      BeliefGrid::covering(map, cfg.belief_resolution, cfg.start.theta);
  b.fill_gaussian(cfg.start.x, cfg.start.y, cfg.p0_sigma_x, cfg.p0_sigma_y);
  return b;
}

std::vector<SweepRow> sweep_ratios(const SimConfig& base,
                                   const std::vector<double>& ratios,
                                   const std::vector<std::uint64_t>& seeds) {
  if (ratios.empty()) throw InvalidArgument("sweep_ratios: empty ratio list");
  if (seeds.empty()) throw InvalidArgument("sweep_ratios: empty seed list");
  for (double r : ratios) {
    if (!std::isfinite(r) || r < 0.0)
      throw InvalidArgument("sweep_ratios: ratios must be finite and >= 0");
  }

  GridMap map = load_sim_map(base);
  std::vector<SweepRow> rows;
  rows.reserve(ratios.size());
  for (double ratio : ratios) {
    SweepRow row;
    row.ratio = ratio;
    row.flagged = ratio > 2.0;
    std::vector<double> metrics;
    for (std::uint64_t seed : seeds) {
      SimConfig cfg = base;
      cfg.seed = seed;
      cfg.w_obs = ratio * base.w_goal;
      try {
        metrics.push_back(run_sim(cfg, map).metric);
      } catch (const Error&) {
        ++row.n_failed;
      }
    }
    row.n_seeds = static_cast<int>(metrics.size());
    if (!metrics.empty()) {
      double sum = 0.0;
      for (double m : metrics) sum += m;
      row.metric_mean = sum / static_cast<double>(metrics.size());
      if (metrics.size() > 1) {
        double ss = 0.0;
        for (double m : metrics) {
          double d = m - row.metric_mean;
          ss += d * d;
        }
        row.metric_std =
            std::sqrt(ss / static_cast<double>(metrics.size() - 1));
      }
    }
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw IoError("write_sweep_csv: cannot open '" + path + "' for writing");
  out << "ratio,metric_mean,metric_std,n_seeds,n_failed,flagged\n";
  for (const auto& r : rows) {
    out << fmt_g17(r.ratio) << ',' << fmt_g17(r.metric_mean) << ','
        << fmt_g17(r.metric_std) << ',' << r.n_seeds << ',' << r.n_failed
        << ',' << (r.flagged ? 1 : 0) << '\n';
  }
  if (!out) throw IoError("write_sweep_csv: write failure on '" + path + "'");
}

}  // namespace magnav
