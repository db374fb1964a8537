#ifndef MAGNAV_TRACE_HPP
#define MAGNAV_TRACE_HPP

#include <optional>
#include <string>
#include <vector>

#include "magnav/vehicle.hpp"

namespace magnav {

// One row of a run trace. Optional fields are left empty in the CSV when
// the run kind does not produce them (entropy for particle filter runs,
// gramian_det for entropy planner runs, meas on steps without a reading).
struct SimTraceRecord {
  int step = 0;
  Pose truth;
  Pose estimate;
  double trace_pos = 0.0;
  std::optional<double> entropy;
  std::optional<double> meas;
  ControlInput control;
  std::optional<double> gramian_det;

  // Not written to the CSV: entropy right after the measurement update,
  // before motion prediction (entropy planner runs only). Tests use it to
  // check the drop/rise pattern within a step.
  std::optional<double> entropy_post_meas;
};

inline constexpr const char* kTraceHeader =
    "step,truth_x,truth_y,truth_theta,est_x,est_y,est_theta,trace_pos,"
    "entropy,meas_nT,v,omega,gramian_det";

// CSV writer. Numeric fields are printed with %.17g so a written trace
// re-parses to identical doubles and identical inputs produce
// byte-identical files.
void write_trace(const std::vector<SimTraceRecord>& records,
                 const std::string& path);

std::vector<SimTraceRecord> read_trace(const std::string& path);

}  // namespace magnav

#endif
