#include "magnav/belief_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magnav/errors.hpp"

namespace magnav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

struct SupportCell {
  int flat = 0;
  double h = 0.0;     // field value at the cell center
  double mass = 0.0;
};

// Cells carrying mass whose centers are on the map; the measurement model
// is undefined elsewhere.
std::vector<SupportCell> collect_support(const BeliefGrid& belief,
                                         const GridMap& map) {
  std::vector<SupportCell> support;
  for (int i = 0; i < belief.nx(); ++i) {
    for (int j = 0; j < belief.ny(); ++j) {
      double m = belief.mass(i, j);
      if (m <= 0.0) continue;
      double cx = belief.cell_center_x(i);
      double cy = belief.cell_center_y(j);
      if (!map.contains(cx, cy)) continue;
      Pose p{cx, cy, belief.heading()};
      support.push_back({belief.flat(i, j), map.field_with_heading(p), m});
    }
  }
  if (support.empty())
    throw DegenerateBelief("belief support has no on-map cells with mass");
  return support;
}

struct ZBins {
  std::vector<double> centers;
  std::vector<double> edges;  // nominal inner edges; end bins run to +-inf
};

ZBins make_bins(const std::vector<SupportCell>& support, double sigma_z,
                int n_z) {
  double hmin = kInf, hmax = -kInf;
  for (const auto& c : support) {
    hmin = std::min(hmin, c.h);
    hmax = std::max(hmax, c.h);
  }
  double zmin = hmin - 3.0 * sigma_z;
  double zmax = hmax + 3.0 * sigma_z;
  double width = (zmax - zmin) / n_z;
  ZBins bins;
  bins.edges.resize(n_z + 1);
  bins.centers.resize(n_z);
  for (int m = 0; m <= n_z; ++m) bins.edges[m] = zmin + m * width;
  for (int m = 0; m < n_z; ++m)
    bins.centers[m] = zmin + (m + 0.5) * width;
  return bins;
}

// P(z in bin m | cell), with the first and last bins absorbing the tails
// so each cell's bin masses sum to exactly one.
double bin_mass(const ZBins& bins, int m, double h, double sigma_z) {
  int n_z = static_cast<int>(bins.centers.size());
  double lo = (m == 0) ? 0.0 : norm_cdf((bins.edges[m] - h) / sigma_z);
  double hi = (m == n_z - 1)
                  ? 1.0
                  : norm_cdf((bins.edges[m + 1] - h) / sigma_z);
  return std::max(hi - lo, 0.0);
}

}  // namespace

BeliefGrid::BeliefGrid(double origin_x, double origin_y, double resolution,
                       int nx, int ny, double heading)
    : origin_x_(origin_x),
      origin_y_(origin_y),
      resolution_(resolution),
      nx_(nx),
      ny_(ny),
      heading_(wrap_angle(heading)),
      mass_(static_cast<size_t>(std::max(nx, 0)) *
            static_cast<size_t>(std::max(ny, 0)), 0.0) {
  if (!(resolution_ > 0.0))
    throw InvalidArgument("BeliefGrid: resolution must be > 0");
  if (nx_ < 1 || ny_ < 1)
    throw InvalidArgument("BeliefGrid: need at least one cell per axis");
}

BeliefGrid BeliefGrid::covering(const GridMap& map, double resolution,
                                double heading) {
  if (!(resolution > 0.0))
    throw InvalidArgument("BeliefGrid::covering: resolution must be > 0");
  int nx = static_cast<int>(
      std::floor((map.max_x() - map.min_x()) / resolution + 1e-9));
  int ny = static_cast<int>(
      std::floor((map.max_y() - map.min_y()) / resolution + 1e-9));
  nx = std::max(nx, 1);
  ny = std::max(ny, 1);
  return BeliefGrid(map.min_x(), map.min_y(), resolution, nx, ny, heading);
}

double BeliefGrid::total_mass() const { return compensated_sum(mass_); }

void BeliefGrid::normalize() {
  double total = total_mass();
  if (!(total > 0.0))
    throw DegenerateBelief("BeliefGrid::normalize: no mass left");
  for (double& m : mass_) m /= total;
}

void BeliefGrid::fill_uniform() {
  double m = 1.0 / cell_count();
  std::fill(mass_.begin(), mass_.end(), m);
}

void BeliefGrid::fill_gaussian(double mean_x, double mean_y, double sigma_x,
                               double sigma_y) {
  if (sigma_x < 0.0 || sigma_y < 0.0)
    throw InvalidArgument("fill_gaussian: sigmas must be >= 0");
  // Zero sigma collapses that axis onto the nearest cell.
  int nearest_i = static_cast<int>(
      std::lround((mean_x - origin_x_) / resolution_ - 0.5));
  int nearest_j = static_cast<int>(
      std::lround((mean_y - origin_y_) / resolution_ - 0.5));
  nearest_i = std::clamp(nearest_i, 0, nx_ - 1);
  nearest_j = std::clamp(nearest_j, 0, ny_ - 1);
  for (int i = 0; i < nx_; ++i) {
    double wx;
    if (sigma_x > 0.0) {
      double dx = (cell_center_x(i) - mean_x) / sigma_x;
      wx = std::exp(-0.5 * dx * dx);
    } else {
      wx = (i == nearest_i) ? 1.0 : 0.0;
    }
    for (int j = 0; j < ny_; ++j) {
      double wy;
      if (sigma_y > 0.0) {
        double dy = (cell_center_y(j) - mean_y) / sigma_y;
        wy = std::exp(-0.5 * dy * dy);
      } else {
        wy = (j == nearest_j) ? 1.0 : 0.0;
      }
      mass_[flat(i, j)] = wx * wy;
    }
  }
  normalize();
}

double entropy(const BeliefGrid& belief) {
  CompensatedAccumulator acc;
  for (double p : belief.masses())
    if (p > 0.0) acc.add(-p * std::log(p));
  return acc.value();
}

BeliefGrid measurement_update(const BeliefGrid& belief, double z,
                              const GridMap& map, double sigma_z) {
  if (!(sigma_z > 0.0))
    throw InvalidArgument("measurement_update: sigma_z must be > 0");

  // Find the smallest squared residual first so the exp() of the most
  // plausible cell is 1 and nothing underflows collectively.
  double min_r2 = kInf;
  std::vector<double> r2(belief.masses().size(),
                         std::numeric_limits<double>::quiet_NaN());
  for (int i = 0; i < belief.nx(); ++i) {
    for (int j = 0; j < belief.ny(); ++j) {
      int k = belief.flat(i, j);
      if (belief.masses()[k] <= 0.0) continue;
      double cx = belief.cell_center_x(i);
      double cy = belief.cell_center_y(j);
      if (!map.contains(cx, cy)) continue;
      Pose p{cx, cy, belief.heading()};
      double r = z - map.field_with_heading(p);
      r2[k] = r * r;
      min_r2 = std::min(min_r2, r2[k]);
    }
  }
  if (min_r2 == kInf)
    throw DegenerateBelief(
        "measurement_update: no on-map cell carries mass");

  const double inv_two_var = 1.0 / (2.0 * sigma_z * sigma_z);
  BeliefGrid out = belief;
  double total = 0.0;
  for (size_t k = 0; k < out.masses().size(); ++k) {
    double m = 0.0;
    if (!std::isnan(r2[k]))
      m = belief.masses()[k] * std::exp(-(r2[k] - min_r2) * inv_two_var);
    out.masses()[k] = m;
    total += m;
  }
  if (!(total > 0.0))
    throw DegenerateBelief("measurement_update: posterior mass underflow");
  for (double& m : out.masses()) m /= total;
  return out;
}

BeliefGrid predict(const BeliefGrid& belief, const ControlInput& u, double dt,
                   double kernel_sigma) {
  if (u.v < 0.0) throw InvalidArgument("predict: v must be >= 0");
  if (dt <= 0.0) throw InvalidArgument("predict: dt must be > 0");
  if (kernel_sigma < 0.0)
    throw InvalidArgument("predict: kernel_sigma must be >= 0");

  const int nx = belief.nx(), ny = belief.ny();
  const double res = belief.resolution();

  // The commanded rotation is applied first and the shift runs along the
  // new heading; otherwise a one-step lookahead could not distinguish the
  // candidate angular velocities at all. Displacement in cell units is
  // identical for every cell, so the bilinear split weights are computed
  // once.
  const double heading = wrap_angle(belief.heading() + u.omega * dt);
  double dx = u.v * dt * std::cos(heading) / res;
  double dy = u.v * dt * std::sin(heading) / res;
  int i_off = static_cast<int>(std::floor(dx));
  int j_off = static_cast<int>(std::floor(dy));
  double fx = dx - i_off;
  double fy = dy - j_off;
  double w00 = (1.0 - fx) * (1.0 - fy);
  double w10 = fx * (1.0 - fy);
  double w01 = (1.0 - fx) * fy;
  double w11 = fx * fy;

  BeliefGrid out = belief;
  std::vector<double>& dst = out.masses();
  std::fill(dst.begin(), dst.end(), 0.0);
  const std::vector<double>& src = belief.masses();
  auto deposit = [&](int i, int j, double m) {
    if (m <= 0.0 || i < 0 || i >= nx || j < 0 || j >= ny) return;
    dst[static_cast<size_t>(i) * ny + j] += m;
  };
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      double m = src[static_cast<size_t>(i) * ny + j];
      if (m <= 0.0) continue;
      int ti = i + i_off;
      int tj = j + j_off;
      deposit(ti, tj, m * w00);
      deposit(ti + 1, tj, m * w10);
      deposit(ti, tj + 1, m * w01);
      deposit(ti + 1, tj + 1, m * w11);
    }
  }

  // Separable Gaussian blur, truncated at 3 sigma and renormalized.
  if (kernel_sigma > 0.0) {
    int radius = static_cast<int>(std::floor(3.0 * kernel_sigma / res + 1e-9));
    if (radius > 0) {
      std::vector<double> kernel(2 * radius + 1);
      double ksum = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        double t = k * res / kernel_sigma;
        kernel[k + radius] = std::exp(-0.5 * t * t);
        ksum += kernel[k + radius];
      }
      for (double& w : kernel) w /= ksum;

      std::vector<double> tmp(dst.size(), 0.0);
      // Along x.
      for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
          double m = dst[static_cast<size_t>(i) * ny + j];
          if (m <= 0.0) continue;
          for (int k = -radius; k <= radius; ++k) {
            int ti = i + k;
            if (ti < 0 || ti >= nx) continue;
            tmp[static_cast<size_t>(ti) * ny + j] += m * kernel[k + radius];
          }
        }
      // Along y.
      std::fill(dst.begin(), dst.end(), 0.0);
      for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
          double m = tmp[static_cast<size_t>(i) * ny + j];
          if (m <= 0.0) continue;
          for (int k = -radius; k <= radius; ++k) {
            int tj = j + k;
            if (tj < 0 || tj >= ny) continue;
            dst[static_cast<size_t>(i) * ny + tj] += m * kernel[k + radius];
          }
        }
    }
  }

  double total = out.total_mass();
  if (!(total > 1e-300))
    throw DegenerateBelief("predict: belief support left the grid");
  for (double& m : dst) m /= total;
  out.set_heading(heading);
  return out;
}

std::vector<QuadratureBin> predictive_measurement_quadrature(
    const BeliefGrid& belief, const GridMap& map, double sigma_z, int n_z) {
  if (!(sigma_z > 0.0))
    throw InvalidArgument("quadrature: sigma_z must be > 0");
  if (n_z < 1) throw InvalidArgument("quadrature: n_z must be >= 1");

  std::vector<SupportCell> support = collect_support(belief, map);
  double total = 0.0;
  for (const auto& c : support) total += c.mass;
  ZBins bins = make_bins(support, sigma_z, n_z);

  std::vector<QuadratureBin> out(n_z);
  for (int m = 0; m < n_z; ++m) {
    double pm = 0.0;
    for (const auto& c : support) pm += c.mass * bin_mass(bins, m, c.h, sigma_z);
    out[m].z = bins.centers[m];
    out[m].p = pm / total;
  }
  return out;
}

double expected_posterior_entropy(const BeliefGrid& belief, const GridMap& map,
                                  double sigma_z, int n_z) {
  if (!(sigma_z > 0.0))
    throw InvalidArgument("expected_posterior_entropy: sigma_z must be > 0");
  if (n_z < 1)
    throw InvalidArgument("expected_posterior_entropy: n_z must be >= 1");

  std::vector<SupportCell> support = collect_support(belief, map);
  double total = 0.0;
  for (const auto& c : support) total += c.mass;
  ZBins bins = make_bins(support, sigma_z, n_z);

  // Conditional beliefs use the same bin-integrated likelihood as the bin
  // probabilities. The posteriors then mix back to the prior exactly, so
  // Jensen keeps the expectation at or below the prior entropy regardless
  // of how coarse the binning is.
  CompensatedAccumulator expectation;
  std::vector<double> joint(support.size());
  for (int m = 0; m < n_z; ++m) {
    double nm = 0.0;
    for (size_t c = 0; c < support.size(); ++c) {
      joint[c] = support[c].mass * bin_mass(bins, m, support[c].h, sigma_z);
      nm += joint[c];
    }
    if (nm <= 0.0) continue;
    CompensatedAccumulator h;
    for (double jm : joint) {
      if (jm <= 0.0) continue;
      double post = jm / nm;
      h.add(-post * std::log(post));
    }
    expectation.add((nm / total) * h.value());
  }
  return expectation.value();
}

double eer(const BeliefGrid& b_post, const GridMap& map, const ControlInput& u,
           const EerPlannerConfig& cfg) {
  double h_now = entropy(b_post);
  BeliefGrid b_pred = predict(b_post, u, cfg.dt, cfg.motion_kernel_sigma);
  double expected =
      expected_posterior_entropy(b_pred, map, cfg.sigma_z, cfg.n_z);
  return h_now - expected;
}

double dist_to_goal(const BeliefGrid& belief, const ControlInput& u,
                    const EerPlannerConfig& cfg) {
  BeliefGrid b_pred = predict(belief, u, cfg.dt, cfg.motion_kernel_sigma);
  const std::vector<double>& m = b_pred.masses();
  int best = 0;
  for (int k = 1; k < static_cast<int>(m.size()); ++k)
    if (m[k] > m[best]) best = k;  // ties keep the lowest flat index
  int i = best / b_pred.ny();
  int j = best % b_pred.ny();
  return std::hypot(b_pred.cell_center_x(i) - cfg.goal_x,
                    b_pred.cell_center_y(j) - cfg.goal_y);
}

ControlInput choose_action(const BeliefGrid& b_post, const GridMap& map,
                           const EerPlannerConfig& cfg) {
  if (cfg.action_set.empty())
    throw InvalidArgument("choose_action: empty action set");

  int best = -1;
  double best_cost = kInf;
  for (int k = 0; k < static_cast<int>(cfg.action_set.size()); ++k) {
    ControlInput u{cfg.v, cfg.action_set[k]};
    double cost;
    try {
      double d = dist_to_goal(b_post, u, cfg);
      cost = cfg.weights.w_goal * d;
      if (cfg.weights.w_obs > 0.0) {
        double reduction = eer(b_post, map, u, cfg);
        cost += cfg.weights.w_obs * std::pow(0.5, reduction);
      }
    } catch (const DegenerateBelief&) {
      continue;  // action pushes the belief off the grid
    }
    bool take = best < 0 || cost < best_cost;
    if (!take && cost == best_cost) {
      double mk = std::abs(cfg.action_set[k]);
      double mb = std::abs(cfg.action_set[best]);
      take = mk < mb;  // equal magnitudes keep the earlier index
    }
    if (take) {
      best = k;
      best_cost = cost;
    }
  }
  if (best < 0)
    throw DegenerateBelief(
        "choose_action: every action degenerates the belief");
  return {cfg.v, cfg.action_set[best]};
}

}  // namespace magnav
