#ifndef MAGNAV_GRID_MAP_HPP
#define MAGNAV_GRID_MAP_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "magnav/common.hpp"
#include "magnav/errors.hpp"

namespace magnav {

struct Pose;  // vehicle.hpp

// Regular grid of scalar field samples (nT) with bilinear interpolation
// between nodes. Node (i, j) sits at (origin_x + i*res, origin_y + j*res);
// values are stored row-major with i (the x index) outermost. The map is
// immutable once constructed.
//
// An optional sinusoidal heading correction models the vehicle's own
// signature: field(x, y) + heading_amp * sin(theta + heading_phase).
class GridMap {
 public:
  GridMap(double origin_x, double origin_y, double resolution, int nx, int ny,
          std::vector<double> values, double heading_amp = 0.0,
          double heading_phase = 0.0);

  double origin_x() const { return origin_x_; }
  double origin_y() const { return origin_y_; }
  double resolution() const { return resolution_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double heading_amp() const { return heading_amp_; }
  double heading_phase() const { return heading_phase_; }
  double min_x() const { return origin_x_; }
  double min_y() const { return origin_y_; }
  double max_x() const { return max_x_; }
  double max_y() const { return max_y_; }
  const std::vector<double>& values() const { return values_; }

  double value_at(int i, int j) const { return values_[idx(i, j)]; }

  // True if (x, y) lies at least `margin` inside the interpolable area.
  bool contains(double x, double y, double margin = 0.0) const {
    return x >= origin_x_ + margin && x <= max_x_ - margin &&
           y >= origin_y_ + margin && y <= max_y_ - margin;
  }

  // Bilinear interpolation. Throws OutOfBounds outside the node hull;
  // there is deliberately no extrapolation.
  double field_at(double x, double y) const;

  // field_at plus the heading correction term.
  double field_with_heading(const Pose& pose) const;

  // Central differences with step = resolution. The stencil must stay
  // inside the map (position at least one resolution from every edge).
  Eigen::Vector2d gradient_at(double x, double y) const;
  Eigen::Matrix2d hessian_at(double x, double y) const;

 private:
  int idx(int i, int j) const { return i * ny_ + j; }

  double origin_x_, origin_y_, resolution_;
  int nx_, ny_;
  double heading_amp_, heading_phase_;
  double max_x_, max_y_;
  std::vector<double> values_;
};

struct GaussianSource {
  double cx = 0.0;
  double cy = 0.0;
  double amplitude = 0.0;  // nT, may be negative
  double sigma = 1.0;      // m, > 0
};

struct MapBounds {
  double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;
};

// Synthetic anomaly map: baseline plus a sum of isotropic Gaussian bumps,
// sampled on a grid that covers `bounds` at the given resolution.
GridMap generate_gaussian_map(const std::vector<GaussianSource>& sources,
                              const MapBounds& bounds, double resolution,
                              double baseline, double heading_amp = 0.0,
                              double heading_phase = 0.0);

// Plain-text map file, round-trips to at least 9 significant digits:
//   MAGMAP 1
//   origin_x origin_y resolution nx ny heading_amp heading_phase
//   <nx*ny values, row-major, whitespace separated>
// '#' starts a comment that runs to end of line.
GridMap load_map(const std::string& path);
void save_map(const GridMap& map, const std::string& path);

// Source-list description of a synthetic map, e.g. for the genmap tool:
//   bounds xmin ymin xmax ymax
//   resolution r
//   baseline b            (optional, default 0)
//   heading amp phase     (optional, default 0 0)
//   source cx cy amp sigma  (one line per source)
struct MapBuildSpec {
  MapBounds bounds;
  double resolution = 0.0;
  double baseline = 0.0;
  double heading_amp = 0.0;
  double heading_phase = 0.0;
  std::vector<GaussianSource> sources;
};

MapBuildSpec load_map_spec(const std::string& path);
GridMap build_map(const MapBuildSpec& spec);

}  // namespace magnav

#endif
