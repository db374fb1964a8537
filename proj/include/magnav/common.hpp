#ifndef MAGNAV_COMMON_HPP
#define MAGNAV_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace magnav {

using Rng = std::mt19937_64;

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

// Wrap an angle to (-pi, pi]. Exactly -pi maps to +pi.
inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a = kPi;
  return a;
}

// One zero-mean Gaussian draw. A fresh distribution per call keeps the
// stream reproducible regardless of earlier draws with other sigmas.
inline double gaussian_draw(Rng& rng, double sigma) {
  if (sigma <= 0.0) return 0.0;
  std::normal_distribution<double> d(0.0, sigma);
  return d(rng);
}

// Substream seed derivation (splitmix64 finalizer). A run seeds stream 0
// for the truth side (process and sensor noise) and stream 1 for the
// estimator side (particle init, propagation, resampling); keeping them
// separate lets the estimator be replayed from logged controls and
// measurements without re-simulating the truth.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Neumaier compensated summation; keeps long accumulations near 1 ulp.
inline double compensated_sum(const std::vector<double>& xs) {
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  return s + c;
}

class CompensatedAccumulator {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace magnav

#endif
