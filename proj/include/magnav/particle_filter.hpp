#ifndef MAGNAV_PARTICLE_FILTER_HPP
#define MAGNAV_PARTICLE_FILTER_HPP

#include <vector>

#include <Eigen/Dense>

#include "magnav/vehicle.hpp"

namespace magnav {

struct Particle {
  Pose pose;
  double weight = 0.0;
};

struct ParticleSet {
  std::vector<Particle> particles;
  int size() const { return static_cast<int>(particles.size()); }
};

// Draw n particles from N(mean, cov) with uniform weights 1/n. cov must be
// symmetric positive semidefinite (a zero covariance collapses every
// particle onto the mean). Heading samples are wrapped to (-pi, pi].
ParticleSet init_particle_set(const Pose& mean, const Eigen::Matrix3d& cov,
                              int n, Rng& rng);

// Advance every particle through step_noisy with the shared control.
// Weights are untouched. Particles may leave the map; update_weights
// zeroes them later. Noise draws are consumed in particle index order,
// one x/y/theta triple per particle, from the single rng stream, so a
// given seed always produces the same set.
void propagate(ParticleSet& set, const ControlInput& u, double dt,
               const NoiseConfig& noise, Rng& rng);

// Bayes reweighting with the Gaussian measurement model
//   w_i <- w_i * exp(-(z - h(pose_i))^2 / (2 sigma_z^2))
// followed by normalization. Accumulation happens in log space so near-zero
// likelihoods cannot underflow the whole set. Off-map particles get weight
// zero. Throws DegenerateWeights when everything is zero.
void update_weights(ParticleSet& set, const GridMap& map, double z,
                    double sigma_z);

// 1 / sum(w_i^2) for normalized weights; ranges from 1 to n.
double effective_sample_size(const ParticleSet& set);

// Systematic (low-variance) resampling with a single uniform offset.
// Expected copy count of particle i is n * w_i; output weights are 1/n.
void resample_systematic(ParticleSet& set, Rng& rng);

// Weighted mean pose. x and y are ordinary weighted means; theta is the
// circular mean atan2(sum w sin, sum w cos). Throws AmbiguousHeading when
// the heading resultant length falls below 1e-12.
Pose estimate_mean(const ParticleSet& set);

// Weighted covariance about estimate_mean. Heading residuals are wrapped
// before the outer products so +pi and -pi do not fight each other.
Eigen::Matrix3d sample_covariance(const ParticleSet& set);

// Trace of the position block of sample_covariance: Cov_xx + Cov_yy.
double trace_position(const ParticleSet& set);

}  // namespace magnav

#endif
