#ifndef MAGNAV_BELIEF_GRID_HPP
#define MAGNAV_BELIEF_GRID_HPP

#include <vector>

#include "magnav/grid_map.hpp"
#include "magnav/obs_planner.hpp"
#include "magnav/vehicle.hpp"

namespace magnav {

// Discrete probability mass function over (x, y) cells; heading is tracked
// deterministically from the commanded controls rather than estimated.
// Cell (i, j) covers a resolution-sized square whose center sits at
// (origin_x + (i + 0.5) res, origin_y + (j + 0.5) res); storage is
// row-major with the x index outermost, matching GridMap.
class BeliefGrid {
 public:
  BeliefGrid(double origin_x, double origin_y, double resolution, int nx,
             int ny, double heading = 0.0);

  // Grid of belief cells covering the interpolable area of a map.
  static BeliefGrid covering(const GridMap& map, double resolution,
                             double heading = 0.0);

  double origin_x() const { return origin_x_; }
  double origin_y() const { return origin_y_; }
  double resolution() const { return resolution_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int cell_count() const { return nx_ * ny_; }
  double heading() const { return heading_; }
  void set_heading(double h) { heading_ = wrap_angle(h); }

  double cell_center_x(int i) const { return origin_x_ + (i + 0.5) * resolution_; }
  double cell_center_y(int j) const { return origin_y_ + (j + 0.5) * resolution_; }
  int flat(int i, int j) const { return i * ny_ + j; }

  double mass(int i, int j) const { return mass_[flat(i, j)]; }
  void set_mass(int i, int j, double m) { mass_[flat(i, j)] = m; }
  const std::vector<double>& masses() const { return mass_; }
  std::vector<double>& masses() { return mass_; }

  double total_mass() const;
  // Scale so the total is exactly 1; throws DegenerateBelief if nothing is
  // left to scale.
  void normalize();

  // Fill with 1/(nx*ny) everywhere.
  void fill_uniform();
  // Fill from an axis-aligned Gaussian over the cell centers, normalized.
  // Zero sigmas collapse to a point mass at the nearest cell.
  void fill_gaussian(double mean_x, double mean_y, double sigma_x,
                     double sigma_y);

 private:
  double origin_x_, origin_y_, resolution_;
  int nx_, ny_;
  double heading_;
  std::vector<double> mass_;
};

struct EerPlannerConfig {
  std::vector<double> action_set;  // omega candidates, rad/s
  double v = 0.2;
  double dt = 1.0;
  PlannerWeights weights;
  double goal_x = 0.0;
  double goal_y = 0.0;
  double sigma_z = 100.0;           // nT, filter's measurement model
  double motion_kernel_sigma = 0.0; // m, process diffusion per predict
  int n_z = 21;                     // quadrature bin count
};

// Shannon entropy -sum p ln p in nats; zero-mass cells contribute nothing.
double entropy(const BeliefGrid& belief);

// Bayes update with likelihood exp(-(z - h_c)^2 / (2 sigma_z^2)) at each
// cell center (heading correction included), computed in log space.
// Cells whose centers are off the map get zero likelihood. Throws
// DegenerateBelief when no cell retains mass.
BeliefGrid measurement_update(const BeliefGrid& belief, double z,
                              const GridMap& map, double sigma_z);

// Motion prediction: the tracked heading advances by omega dt, every cell
// shifts by v dt along the new heading (sub-cell amounts split bilinearly
// between the four destination cells), and the result is convolved with an
// isotropic Gaussian kernel truncated at 3 sigma and renormalized. Applying
// the rotation before the shift is what lets a one-step lookahead tell the
// candidate angular velocities apart. Mass pushed off the grid is dropped
// and the remainder renormalized. Throws DegenerateBelief if the entire
// support leaves the grid.
BeliefGrid predict(const BeliefGrid& belief, const ControlInput& u, double dt,
                   double kernel_sigma);

struct QuadratureBin {
  double z = 0.0;  // bin center, nT
  double p = 0.0;  // probability of z falling in the bin
};

// Discretization of the measurement marginal
//   p(z) = sum_c mass[c] N(z; h(c), sigma_z^2)
// over n_z equal-width bins spanning [min_c h(c) - 3 sigma_z,
// max_c h(c) + 3 sigma_z] (min/max over cells carrying mass). Bin masses
// are exact Gaussian integrals with the two end bins extended to +-inf,
// so they sum to 1.
std::vector<QuadratureBin> predictive_measurement_quadrature(
    const BeliefGrid& belief, const GridMap& map, double sigma_z, int n_z);

// sum_m P(bin m) * H(belief | z in bin m) under the same binned channel as
// predictive_measurement_quadrature. Using the bin-integrated likelihood
// for the conditional beliefs keeps the mixture of posteriors identical to
// the prior, which pins E[H_post] <= H_prior down to rounding.
double expected_posterior_entropy(const BeliefGrid& belief, const GridMap& map,
                                  double sigma_z, int n_z);

// Expected entropy reduction of taking action u from the already
// measurement-updated belief: H(b) minus the expected entropy after
// predicting along u and measuring once. Positive values mean the action
// is informative.
double eer(const BeliefGrid& b_post, const GridMap& map, const ControlInput& u,
           const EerPlannerConfig& cfg);

// Distance from the predicted belief's argmax cell center to the goal.
// Argmax ties go to the lowest flat cell index.
double dist_to_goal(const BeliefGrid& belief, const ControlInput& u,
                    const EerPlannerConfig& cfg);

// argmin over cfg.action_set of w_obs * 0.5^eer + w_goal * dist_to_goal.
// Ties prefer the omega closest to zero, then the lower index. An action
// that degenerates the belief is treated as infeasible; if every action
// does, the DegenerateBelief propagates.
ControlInput choose_action(const BeliefGrid& b_post, const GridMap& map,
                           const EerPlannerConfig& cfg);

}  // namespace magnav

#endif
