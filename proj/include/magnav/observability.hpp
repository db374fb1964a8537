#ifndef MAGNAV_OBSERVABILITY_HPP
#define MAGNAV_OBSERVABILITY_HPP

#include <Eigen/Dense>

#include "magnav/grid_map.hpp"
#include "magnav/vehicle.hpp"

namespace magnav {

inline constexpr double kDefaultEpsDet = 1e-12;
inline constexpr double kObsCostCap = 1e12;  // == 1 / kDefaultEpsDet

// Zeroth and first Lie derivatives of the field along the unicycle flow:
//   L0 = h(x, y)
//   L1 = grad(h) . (v cos theta, v sin theta)
struct LieDerivatives {
  double l0 = 0.0;
  double l1 = 0.0;
};

LieDerivatives lie_derivatives(const GridMap& map, const Pose& pose,
                               const ControlInput& u);

// Local observability matrix of the position states:
//   row 0: gradient of h
//   row 1: Hessian of h times the velocity vector f = v (cos, sin)
// Field derivatives come from the map's finite differences, so the pose
// must be at least one grid resolution inside the map.
Eigen::Matrix2d observability_matrix(const GridMap& map, const Pose& pose,
                                     const ControlInput& u);

// det(O^T O), clamped at zero against tiny negative rounding. For the 2x2
// matrix above this equals det(O)^2.
double gramian_det(const Eigen::Matrix2d& o_nl);

// 1 / max(gramian_det, eps_det); eps_det caps the cost at 1/eps_det in
// unobservable (flat field) regions instead of dividing by zero.
double obs_cost(double gramian_det_value, double eps_det = kDefaultEpsDet);

}  // namespace magnav

#endif
