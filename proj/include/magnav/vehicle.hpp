#ifndef MAGNAV_VEHICLE_HPP
#define MAGNAV_VEHICLE_HPP

#include "magnav/common.hpp"
#include "magnav/grid_map.hpp"

namespace magnav {

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // rad, kept in (-pi, pi]
};

struct ControlInput {
  double v = 0.0;      // m/s, >= 0
  double omega = 0.0;  // rad/s
};

// Process / sensor noise levels. Motion noise scales with the amount of
// motion: sigma_xy_per_step applies per 5 cm translated and
// sigma_theta_per_step per 10 degrees rotated, so zero commanded motion
// adds zero noise.
struct NoiseConfig {
  double sigma_z = 100.0;                          // nT
  double sigma_xy_per_step = 0.01;                 // m per 5 cm translated
  double sigma_theta_per_step = deg2rad(1.0);      // rad per 10 deg rotated
};

inline constexpr double kXyNoiseRefStep = 0.05;             // m
inline constexpr double kThetaNoiseRefStep = deg2rad(10.0); // rad

// Unicycle step, position advanced with the pre-update heading:
//   x' = x + v cos(theta) dt,  y' = y + v sin(theta) dt,
//   theta' = wrap(theta + omega dt)
Pose step_deterministic(const Pose& pose, const ControlInput& u, double dt);

// step_deterministic plus motion-scaled Gaussian noise on x, y and theta.
// With an all-zero NoiseConfig this is bit-identical to step_deterministic.
Pose step_noisy(const Pose& pose, const ControlInput& u, double dt,
                const NoiseConfig& noise, Rng& rng);

// Scalar field reading at the pose (heading correction included) plus
// N(0, sigma_z^2) sensor noise. sigma_z = 0 gives the exact field value.
double measure(const GridMap& map, const Pose& pose, double sigma_z, Rng& rng);

}  // namespace magnav

#endif
