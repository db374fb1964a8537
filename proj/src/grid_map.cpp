#include "magnav/grid_map.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "magnav/vehicle.hpp"

namespace magnav {

GridMap::GridMap(double origin_x, double origin_y, double resolution, int nx,
                 int ny, std::vector<double> values, double heading_amp,
                 double heading_phase)
    : origin_x_(origin_x),
      origin_y_(origin_y),
      resolution_(resolution),
      nx_(nx),
      ny_(ny),
      heading_amp_(heading_amp),
      heading_phase_(heading_phase),
      values_(std::move(values)) {
  if (!(resolution_ > 0.0))
    throw InvalidArgument("GridMap: resolution must be > 0");
  if (nx_ < 2 || ny_ < 2)
    throw InvalidArgument("GridMap: need at least 2 nodes per axis");
  if (values_.size() != static_cast<size_t>(nx_) * static_cast<size_t>(ny_))
    throw InvalidArgument("GridMap: value count does not match nx*ny");
  if (!(heading_amp_ >= 0.0))
    throw InvalidArgument("GridMap: heading_amp must be >= 0");
  if (!std::isfinite(origin_x_) || !std::isfinite(origin_y_) ||
      !std::isfinite(resolution_) || !std::isfinite(heading_amp_) ||
      !std::isfinite(heading_phase_))
    throw InvalidArgument("GridMap: non-finite header field");
  for (double v : values_)
    if (!std::isfinite(v))
      throw InvalidArgument("GridMap: non-finite field value");
  max_x_ = origin_x_ + (nx_ - 1) * resolution_;
  max_y_ = origin_y_ + (ny_ - 1) * resolution_;
}

double GridMap::field_at(double x, double y) const {
  if (!contains(x, y)) {
    std::ostringstream oss;
    oss << "field_at: (" << x << ", " << y << ") outside map [" << origin_x_
        << ", " << max_x_ << "] x [" << origin_y_ << ", " << max_y_ << "]";
    throw OutOfBounds(oss.str());
  }
  double gx = (x - origin_x_) / resolution_;
  double gy = (y - origin_y_) / resolution_;
  int i = static_cast<int>(std::floor(gx));
  int j = static_cast<int>(std::floor(gy));
  // Clamp so queries on the far edges interpolate inside the last cell.
  if (i > nx_ - 2) i = nx_ - 2;
  if (j > ny_ - 2) j = ny_ - 2;
  if (i < 0) i = 0;
  if (j < 0) j = 0;
  double fx = gx - i;
  double fy = gy - j;
  double v00 = values_[idx(i, j)];
  double v10 = values_[idx(i + 1, j)];
  double v01 = values_[idx(i, j + 1)];
  double v11 = values_[idx(i + 1, j + 1)];
  return (1.0 - fx) * (1.0 - fy) * v00 + fx * (1.0 - fy) * v10 +
         (1.0 - fx) * fy * v01 + fx * fy * v11;
}

double GridMap::field_with_heading(const Pose& pose) const {
  double base = field_at(pose.x, pose.y);
  if (heading_amp_ == 0.0) return base;
  return base + heading_amp_ * std::sin(pose.theta + heading_phase_);
}

Eigen::Vector2d GridMap::gradient_at(double x, double y) const {
  double d = resolution_;
  if (!contains(x, y, d)) {
    std::ostringstream oss;
    oss << "gradient_at: stencil around (" << x << ", " << y
        << ") leaves the map";
    throw OutOfBounds(oss.str());
  }
  double gx = (field_at(x + d, y) - field_at(x - d, y)) / (2.0 * d);
  double gy = (field_at(x, y + d) - field_at(x, y - d)) / (2.0 * d);
  return {gx, gy};
}

Eigen::Matrix2d GridMap::hessian_at(double x, double y) const {
  double d = resolution_;
  if (!contains(x, y, d)) {
    std::ostringstream oss;
    oss << "hessian_at: stencil around (" << x << ", " << y
        << ") leaves the map";
    throw OutOfBounds(oss.str());
  }
  double c = field_at(x, y);
  double hxx = (field_at(x + d, y) - 2.0 * c + field_at(x - d, y)) / (d * d);
  double hyy = (field_at(x, y + d) - 2.0 * c + field_at(x, y - d)) / (d * d);
  double hxy = (field_at(x + d, y + d) - field_at(x + d, y - d) -
                field_at(x - d, y + d) + field_at(x - d, y - d)) /
               (4.0 * d * d);
  Eigen::Matrix2d h;
  h << hxx, hxy, hxy, hyy;
  return h;
}

GridMap generate_gaussian_map(const std::vector<GaussianSource>& sources,
                              const MapBounds& bounds, double resolution,
                              double baseline, double heading_amp,
                              double heading_phase) {
  if (!(resolution > 0.0))
    throw InvalidArgument("generate_gaussian_map: resolution must be > 0");
  if (!(bounds.xmax > bounds.xmin) || !(bounds.ymax > bounds.ymin))
    throw InvalidArgument("generate_gaussian_map: degenerate bounds");
  for (const auto& s : sources)
    if (!(s.sigma > 0.0))
      throw InvalidArgument("generate_gaussian_map: source sigma must be > 0");

  int nx = static_cast<int>(std::floor((bounds.xmax - bounds.xmin) /
                                       resolution + 1e-9)) + 1;
  int ny = static_cast<int>(std::floor((bounds.ymax - bounds.ymin) /
                                       resolution + 1e-9)) + 1;
  if (nx < 2 || ny < 2)
    throw InvalidArgument(
        "generate_gaussian_map: bounds span less than one cell");

  std::vector<double> values(static_cast<size_t>(nx) * ny);
  for (int i = 0; i < nx; ++i) {
    double x = bounds.xmin + i * resolution;
    for (int j = 0; j < ny; ++j) {
      double y = bounds.ymin + j * resolution;
      double v = baseline;
      for (const auto& s : sources) {
        double dx = x - s.cx;
        double dy = y - s.cy;
        v += s.amplitude *
             std::exp(-(dx * dx + dy * dy) / (2.0 * s.sigma * s.sigma));
      }
      values[static_cast<size_t>(i) * ny + j] = v;
    }
  }
  return GridMap(bounds.xmin, bounds.ymin, resolution, nx, ny,
                 std::move(values), heading_amp, heading_phase);
}

namespace {

// Strip '#' comments, then split the remainder into whitespace tokens.
void tokenize_line(const std::string& line, std::vector<std::string>& out) {
  std::string body = line;
  auto hash = body.find('#');
  if (hash != std::string::npos) body.erase(hash);
  std::istringstream iss(body);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
}

double parse_double(const std::string& tok, const std::string& what) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw MalformedMap("bad " + what + ": '" + tok + "'");
  }
  if (pos != tok.size())
    throw MalformedMap("bad " + what + ": '" + tok + "'");
  return v;
}

long parse_long(const std::string& tok, const std::string& what) {
  size_t pos = 0;
  long v;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    throw MalformedMap("bad " + what + ": '" + tok + "'");
  }
  if (pos != tok.size())
    throw MalformedMap("bad " + what + ": '" + tok + "'");
  return v;
}

}  // namespace

GridMap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_map: cannot open '" + path + "'");

  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) tokenize_line(line, tokens);
  if (in.bad()) throw IoError("load_map: read failure on '" + path + "'");

  if (tokens.size() < 2 || tokens[0] != "MAGMAP")
    throw MalformedMap("load_map: missing MAGMAP magic in '" + path + "'");
  if (tokens[1] != "1")
    throw MalformedMap("load_map: unsupported version '" + tokens[1] + "'");
  if (tokens.size() < 9)
    throw MalformedMap("load_map: truncated header in '" + path + "'");

  double origin_x = parse_double(tokens[2], "origin_x");
  double origin_y = parse_double(tokens[3], "origin_y");
  double resolution = parse_double(tokens[4], "resolution");
  long nx = parse_long(tokens[5], "nx");
  long ny = parse_long(tokens[6], "ny");
  double heading_amp = parse_double(tokens[7], "heading_amp");
  double heading_phase = parse_double(tokens[8], "heading_phase");

  if (nx < 2 || ny < 2 || nx > 100000 || ny > 100000)
    throw MalformedMap("load_map: implausible grid dimensions");

  size_t expected = static_cast<size_t>(nx) * static_cast<size_t>(ny);
  size_t have = tokens.size() - 9;
  if (have != expected) {
    std::ostringstream oss;
    oss << "load_map: header claims " << expected << " values, file has "
        << have;
    throw MalformedMap(oss.str());
  }
  std::vector<double> values(expected);
  for (size_t k = 0; k < expected; ++k)
    values[k] = parse_double(tokens[9 + k], "field value");

  try {
    return GridMap(origin_x, origin_y, resolution, static_cast<int>(nx),
                   static_cast<int>(ny), std::move(values), heading_amp,
                   heading_phase);
  } catch (const InvalidArgument& e) {
    throw MalformedMap(std::string("load_map: ") + e.what());
  }
}

void save_map(const GridMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("save_map: cannot open '" + path + "' for writing");

  char buf[64];
  auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };

  out << "MAGMAP 1\n";
  out << fmt(map.origin_x()) << ' ' << fmt(map.origin_y()) << ' '
      << fmt(map.resolution()) << ' ' << map.nx() << ' ' << map.ny() << ' '
      << fmt(map.heading_amp()) << ' ' << fmt(map.heading_phase()) << '\n';
  // One x-row per line keeps files diffable.
  for (int i = 0; i < map.nx(); ++i) {
    for (int j = 0; j < map.ny(); ++j) {
      if (j) out << ' ';
      out << fmt(map.value_at(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("save_map: write failure on '" + path + "'");
}

MapBuildSpec load_map_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_map_spec: cannot open '" + path + "'");

  MapBuildSpec spec;
  bool have_bounds = false, have_resolution = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<std::string> toks;
    tokenize_line(line, toks);
    if (toks.empty()) continue;
    auto need = [&](size_t n) {
      if (toks.size() != n + 1) {
        std::ostringstream oss;
        oss << "'" << toks[0] << "' takes " << n << " numbers";
        throw MalformedMap(oss.str());
      }
    };
    try {
      if (toks[0] == "bounds") {
        need(4);
        spec.bounds = {parse_double(toks[1], "xmin"),
                       parse_double(toks[2], "ymin"),
                       parse_double(toks[3], "xmax"),
                       parse_double(toks[4], "ymax")};
        have_bounds = true;
      } else if (toks[0] == "resolution") {
        need(1);
        spec.resolution = parse_double(toks[1], "resolution");
        have_resolution = true;
      } else if (toks[0] == "baseline") {
        need(1);
        spec.baseline = parse_double(toks[1], "baseline");
      } else if (toks[0] == "heading") {
        need(2);
        spec.heading_amp = parse_double(toks[1], "heading amp");
        spec.heading_phase = parse_double(toks[2], "heading phase");
      } else if (toks[0] == "source") {
        need(4);
        GaussianSource s;
        s.cx = parse_double(toks[1], "source cx");
        s.cy = parse_double(toks[2], "source cy");
        s.amplitude = parse_double(toks[3], "source amplitude");
        s.sigma = parse_double(toks[4], "source sigma");
        spec.sources.push_back(s);
      } else {
        throw MalformedMap("unknown directive '" + toks[0] + "'");
      }
    } catch (const MalformedMap& e) {
      std::ostringstream oss;
      oss << path << ":" << lineno << ": " << e.what();
      throw MalformedMap(oss.str());
    }
  }
  if (in.bad()) throw IoError("load_map_spec: read failure on '" + path + "'");
  if (!have_bounds)
    throw MalformedMap("load_map_spec: '" + path + "' has no bounds line");
  if (!have_resolution)
    throw MalformedMap("load_map_spec: '" + path + "' has no resolution line");
  return spec;
}

GridMap build_map(const MapBuildSpec& spec) {
  return generate_gaussian_map(spec.sources, spec.bounds, spec.resolution,
                               spec.baseline, spec.heading_amp,
                               spec.heading_phase);
}

}  // namespace magnav
