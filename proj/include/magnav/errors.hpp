#ifndef MAGNAV_ERRORS_HPP
#define MAGNAV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace magnav {

// Base type so callers can catch anything thrown by this library in one place.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Query or stencil point outside the mapped area.
struct OutOfBounds : Error {
  explicit OutOfBounds(const std::string& msg) : Error(msg) {}
};

// Caller violated a precondition (bad dimension, non-positive count, ...).
struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

// Map file exists but its contents do not parse or are inconsistent.
struct MalformedMap : Error {
  explicit MalformedMap(const std::string& msg) : Error(msg) {}
};

// File could not be opened, read or written.
struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// All particle weights collapsed to zero (e.g. every particle off-map).
struct DegenerateWeights : Error {
  explicit DegenerateWeights(const std::string& msg) : Error(msg) {}
};

// Circular mean undefined: heading resultant vector has ~zero length.
struct AmbiguousHeading : Error {
  explicit AmbiguousHeading(const std::string& msg) : Error(msg) {}
};

// Every candidate action sequence was infeasible (left the map).
struct NoFeasiblePlan : Error {
  explicit NoFeasiblePlan(const std::string& msg) : Error(msg) {}
};

// Belief mass vanished (support pushed off-grid or likelihood underflow).
struct DegenerateBelief : Error {
  explicit DegenerateBelief(const std::string& msg) : Error(msg) {}
};

// Problem in a simulation config file (missing key, unknown key, bad value).
struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace magnav

#endif
