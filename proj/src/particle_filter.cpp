#include "magnav/particle_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magnav/errors.hpp"

namespace magnav {

namespace {

// Symmetric square root via eigendecomposition; works for semidefinite
// covariances (e.g. a zero block) where plain Cholesky would fail.
Eigen::Matrix3d psd_sqrt(const Eigen::Matrix3d& cov) {
  if (!cov.isApprox(cov.transpose(), 1e-9))
    throw InvalidArgument("init_particle_set: covariance not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  Eigen::Vector3d evals = es.eigenvalues();
  double scale = std::max(1.0, evals.cwiseAbs().maxCoeff());
  Eigen::Vector3d root;
  for (int k = 0; k < 3; ++k) {
    if (evals[k] < -1e-12 * scale)
      throw InvalidArgument("init_particle_set: covariance not PSD");
    root[k] = std::sqrt(std::max(evals[k], 0.0));
  }
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

ParticleSet init_particle_set(const Pose& mean, const Eigen::Matrix3d& cov,
                              int n, Rng& rng) {
  if (n <= 0) throw InvalidArgument("init_particle_set: n must be > 0");
  Eigen::Matrix3d l = psd_sqrt(cov);
  ParticleSet set;
  set.particles.resize(n);
  std::normal_distribution<double> unit(0.0, 1.0);
  double w = 1.0 / n;
  for (auto& p : set.particles) {
    Eigen::Vector3d xi(unit(rng), unit(rng), unit(rng));
    Eigen::Vector3d d = l * xi;
    p.pose.x = mean.x + d[0];
    p.pose.y = mean.y + d[1];
    p.pose.theta = wrap_angle(mean.theta + d[2]);
    p.weight = w;
  }
  return set;
}

void propagate(ParticleSet& set, const ControlInput& u, double dt,
               const NoiseConfig& noise, Rng& rng) {
  for (auto& p : set.particles)
    p.pose = step_noisy(p.pose, u, dt, noise, rng);
}

void update_weights(ParticleSet& set, const GridMap& map, double z,
                    double sigma_z) {
  if (!(sigma_z > 0.0))
    throw InvalidArgument("update_weights: sigma_z must be > 0");
  if (set.particles.empty())
    throw InvalidArgument("update_weights: empty particle set");

  const double inv_two_var = 1.0 / (2.0 * sigma_z * sigma_z);
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> logw(set.particles.size());
  double max_logw = neg_inf;
  for (size_t k = 0; k < set.particles.size(); ++k) {
    const Particle& p = set.particles[k];
    double lw;
    if (p.weight <= 0.0 || !map.contains(p.pose.x, p.pose.y)) {
      lw = neg_inf;
    } else {
      double r = z - map.field_with_heading(p.pose);
      lw = std::log(p.weight) - r * r * inv_two_var;
    }
    logw[k] = lw;
    if (lw > max_logw) max_logw = lw;
  }
  if (!(max_logw > neg_inf))
    throw DegenerateWeights("update_weights: all particle weights are zero");

  double total = 0.0;
  for (size_t k = 0; k < logw.size(); ++k) {
    double w = logw[k] > neg_inf ? std::exp(logw[k] - max_logw) : 0.0;
    set.particles[k].weight = w;
    total += w;
  }
  for (auto& p : set.particles) p.weight /= total;
}

double effective_sample_size(const ParticleSet& set) {
  double sum_sq = 0.0;
  for (const auto& p : set.particles) sum_sq += p.weight * p.weight;
  if (sum_sq <= 0.0)
    throw DegenerateWeights("effective_sample_size: zero weight mass");
  return 1.0 / sum_sq;
}

void resample_systematic(ParticleSet& set, Rng& rng) {
  const int n = set.size();
  if (n == 0) throw InvalidArgument("resample_systematic: empty set");
  double step = 1.0 / n;
  std::uniform_real_distribution<double> uni(0.0, step);
  double u = uni(rng);
  std::vector<Particle> out;
  out.reserve(n);
  double c = set.particles[0].weight;
  int i = 0;
  for (int m = 0; m < n; ++m) {
    while (u > c && i + 1 < n) {
      ++i;
      c += set.particles[i].weight;
    }
    out.push_back(set.particles[i]);
    out.back().weight = step;
    u += step;
  }
  set.particles = std::move(out);
}

Pose estimate_mean(const ParticleSet& set) {
  if (set.particles.empty())
    throw InvalidArgument("estimate_mean: empty particle set");
  double sw = 0.0, sx = 0.0, sy = 0.0, ss = 0.0, sc = 0.0;
  for (const auto& p : set.particles) {
    sw += p.weight;
    sx += p.weight * p.pose.x;
    sy += p.weight * p.pose.y;
    ss += p.weight * std::sin(p.pose.theta);
    sc += p.weight * std::cos(p.pose.theta);
  }
  if (!(sw > 0.0)) throw DegenerateWeights("estimate_mean: zero weight mass");
  double resultant = std::hypot(ss / sw, sc / sw);
  if (resultant < 1e-12)
    throw AmbiguousHeading(
        "estimate_mean: heading resultant ~0, circular mean undefined");
  Pose mean;
  mean.x = sx / sw;
  mean.y = sy / sw;
  mean.theta = wrap_angle(std::atan2(ss, sc));
  return mean;
}

Eigen::Matrix3d sample_covariance(const ParticleSet& set) {
  Pose mean = estimate_mean(set);
  double sw = 0.0;
  for (const auto& p : set.particles) sw += p.weight;
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : set.particles) {
    Eigen::Vector3d d(p.pose.x - mean.x, p.pose.y - mean.y,
                      wrap_angle(p.pose.theta - mean.theta));
    cov += (p.weight / sw) * d * d.transpose();
  }
  return cov;
}

double trace_position(const ParticleSet& set) {
  Eigen::Matrix3d cov = sample_covariance(set);
  return cov(0, 0) + cov(1, 1);
}

}  // namespace magnav
