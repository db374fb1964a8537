#include "magnav/observability.hpp"

#include <algorithm>
#include <cmath>

namespace magnav {

LieDerivatives lie_derivatives(const GridMap& map, const Pose& pose,
                               const ControlInput& u) {
  LieDerivatives out;
  out.l0 = map.field_at(pose.x, pose.y);
  Eigen::Vector2d g = map.gradient_at(pose.x, pose.y);
  out.l1 = g[0] * u.v * std::cos(pose.theta) +
           g[1] * u.v * std::sin(pose.theta);
  return out;
}

Eigen::Matrix2d observability_matrix(const GridMap& map, const Pose& pose,
                                     const ControlInput& u) {
  Eigen::Vector2d g = map.gradient_at(pose.x, pose.y);
  Eigen::Matrix2d h = map.hessian_at(pose.x, pose.y);
  Eigen::Vector2d f(u.v * std::cos(pose.theta), u.v * std::sin(pose.theta));
  Eigen::Vector2d hf = h * f;
  Eigen::Matrix2d o;
  o << g[0], g[1], hf[0], hf[1];
  return o;
}

double gramian_det(const Eigen::Matrix2d& o_nl) {
  double det = (o_nl.transpose() * o_nl).determinant();
  return std::max(det, 0.0);
}

double obs_cost(double gramian_det_value, double eps_det) {
  if (!(eps_det > 0.0)) throw InvalidArgument("obs_cost: eps_det must be > 0");
  return 1.0 / std::max(gramian_det_value, eps_det);
}

}  // namespace magnav
