#pragma once

#include "logconc/config.hpp"
#include "logconc/report.hpp"

namespace logconc {

// Realizes all configured measures, executes the selected suites, and
// assembles the report. Per-row errors are recorded in the table, not thrown.
Report run(const RunConfig& config);

// run + emit; returns the report for exit-code decisions.
Report run_and_emit(const RunConfig& config);

}  // namespace logconc
