#include "magnav/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "magnav/errors.hpp"

namespace magnav {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt(*v) : std::string();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_field(const std::string& s, const std::string& what, int line) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != s.size()) {
    std::ostringstream oss;
    oss << "trace line " << line << ": bad " << what << " '" << s << "'";
    throw IoError(oss.str());
  }
  return v;
}

std::optional<double> parse_opt(const std::string& s, const std::string& what,
                                int line) {
  if (s.empty()) return std::nullopt;
  return parse_field(s, what, line);
}

}  // namespace

void write_trace(const std::vector<SimTraceRecord>& records,
                 const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw IoError("write_trace: cannot open '" + path + "' for writing");
  out << kTraceHeader << '\n';
  for (const auto& r : records) {
    out << r.step << ',' << fmt(r.truth.x) << ',' << fmt(r.truth.y) << ','
        << fmt(r.truth.theta) << ',' << fmt(r.estimate.x) << ','
        << fmt(r.estimate.y) << ',' << fmt(r.estimate.theta) << ','
        << fmt(r.trace_pos) << ',' << fmt_opt(r.entropy) << ','
        << fmt_opt(r.meas) << ',' << fmt(r.control.v) << ','
        << fmt(r.control.omega) << ',' << fmt_opt(r.gramian_det) << '\n';
  }
  if (!out) throw IoError("write_trace: write failure on '" + path + "'");
}

std::vector<SimTraceRecord> read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("read_trace: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw IoError("read_trace: '" + path + "' is empty");
  if (line != kTraceHeader)
    throw IoError("read_trace: '" + path + "' has an unexpected header");

  std::vector<SimTraceRecord> records;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split_csv(line);
    if (f.size() != 13) {
      std::ostringstream oss;
      oss << "read_trace: line " << lineno << " has " << f.size()
          << " fields, expected 13";
      throw IoError(oss.str());
    }
    SimTraceRecord r;
    r.step = static_cast<int>(parse_field(f[0], "step", lineno));
    r.truth.x = parse_field(f[1], "truth_x", lineno);
    r.truth.y = parse_field(f[2], "truth_y", lineno);
    r.truth.theta = parse_field(f[3], "truth_theta", lineno);
    r.estimate.x = parse_field(f[4], "est_x", lineno);
    r.estimate.y = parse_field(f[5], "est_y", lineno);
    r.estimate.theta = parse_field(f[6], "est_theta", lineno);
    r.trace_pos = parse_field(f[7], "trace_pos", lineno);
    r.entropy = parse_opt(f[8], "entropy", lineno);
    r.meas = parse_opt(f[9], "meas_nT", lineno);
    r.control.v = parse_field(f[10], "v", lineno);
    r.control.omega = parse_field(f[11], "omega", lineno);
    r.gramian_det = parse_opt(f[12], "gramian_det", lineno);
    records.push_back(r);
  }
  if (in.bad()) throw IoError("read_trace: read failure on '" + path + "'");
  return records;
}

}  // namespace magnav
