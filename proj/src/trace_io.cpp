#include "crnsim/trace_io.hpp"

#include <cmath>
#include <cstdio>

namespace crnsim {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_trace_csv(std::ostream& os, const RunTrace& trace) {
  os << kTraceHeader << '\n';
  for (const auto& r : trace.rows) {
    os << r.iteration << ',' << format_real(r.sum_rate) << ',' << format_real(r.potential) << ','
       << r.num_switchers << ',' << format_real(r.max_beta_gap) << ',' << (r.converged ? 1 : 0)
       << ',' << r.coalitions << '\n';
  }
}

}  // namespace crnsim
