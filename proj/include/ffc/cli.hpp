// `ffc` command-line driver.
#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ffc/dataset.hpp"

namespace ffc::cli {

enum class ReportFormat { Csv, Json, Text };

/// Classification results in a stable layout. JSON is one record per line:
/// {"entry","project","classes","fault_type","evidence"} or, for failures,
/// {"entry","project","error","unclassified"}.
std::string emit_report(const std::vector<dataset::EntryResult>& results, ReportFormat format, bool color = false);

/// Inverse of emit_report(..., Json).
std::vector<dataset::EntryResult> parse_report_json(const std::string& text);

/// Exit codes: 0 success, 1 domain error, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ffc::cli
