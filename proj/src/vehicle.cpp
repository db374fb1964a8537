#include "magnav/vehicle.hpp"

#include <cmath>

#include "magnav/errors.hpp"

namespace magnav {

Pose step_deterministic(const Pose& pose, const ControlInput& u, double dt) {
  if (u.v < 0.0) throw InvalidArgument("step: v must be >= 0");
  if (dt <= 0.0) throw InvalidArgument("step: dt must be > 0");
  Pose out;
  out.x = pose.x + u.v * std::cos(pose.theta) * dt;
  out.y = pose.y + u.v * std::sin(pose.theta) * dt;
  out.theta = wrap_angle(pose.theta + u.omega * dt);
  return out;
}

Pose step_noisy(const Pose& pose, const ControlInput& u, double dt,
                const NoiseConfig& noise, Rng& rng) {
  Pose out = step_deterministic(pose, u, dt);
  double translated = u.v * dt;
  double rotated = std::abs(u.omega) * dt;
  double sigma_xy = noise.sigma_xy_per_step * (translated / kXyNoiseRefStep);
  double sigma_theta =
      noise.sigma_theta_per_step * (rotated / kThetaNoiseRefStep);
  if (sigma_xy > 0.0) {
    out.x += gaussian_draw(rng, sigma_xy);
    out.y += gaussian_draw(rng, sigma_xy);
  }
  if (sigma_theta > 0.0)
    out.theta = wrap_angle(out.theta + gaussian_draw(rng, sigma_theta));
  return out;
}

double measure(const GridMap& map, const Pose& pose, double sigma_z,
               Rng& rng) {
  if (sigma_z < 0.0) throw InvalidArgument("measure: sigma_z must be >= 0");
  double z = map.field_with_heading(pose);
  if (sigma_z > 0.0) z += gaussian_draw(rng, sigma_z);
  return z;
}

}  // namespace magnav
