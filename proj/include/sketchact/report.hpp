#pragma once

#include "sketchact/io.hpp"

#include <string>
#include <vector>

namespace sketchact {

/// One row per segment: index, length, heading change, corners, rule,
/// action, confidence (plus lane count for coverage).
std::string render_plan_text(const Json& plan);

/// Single summary line for an execute payload.
std::string render_trial_summary(const Json& trial);

/// Scene type x length category table of SSSR/SSSPAR/FTCR/FTSPAR, the
/// failure-position histogram and, with several inputs, a turn-set
/// comparison.
std::string render_report_text(const std::vector<ResultsFile>& results);
std::string render_report_csv(const std::vector<ResultsFile>& results);

}  // namespace sketchact
