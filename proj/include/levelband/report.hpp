#pragma once

#include <string>

#include "levelband/band.hpp"

namespace levelband {

/// JSON serialization of a report. Numbers are rounded to 12 significant
/// digits before encoding so repeated runs dump byte-identical documents;
/// NaN (unknown sigma, skipped coarea) becomes null.
std::string report_to_json(const BandReport& report);

/// Plain-text rendering: header, one line per component, critical points,
/// warnings, and a final "LHS=... RHS=... rel.err=..." verdict line.
std::string report_to_text(const BandReport& report);

} // namespace levelband
