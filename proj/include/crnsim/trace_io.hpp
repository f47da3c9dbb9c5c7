#pragma once

#include <ostream>
#include <string>

#include "crnsim/learn.hpp"

namespace crnsim {

/// Fixed CSV header for run traces.
inline constexpr const char* kTraceHeader =
    "iteration,sum_rate,potential,num_switchers,max_beta_gap,converged,coalitions";

/// "%.12g" formatting, independent of the stream's locale and flags.
std::string format_real(double v);

void write_trace_csv(std::ostream& os, const RunTrace& trace);

}  // namespace crnsim
