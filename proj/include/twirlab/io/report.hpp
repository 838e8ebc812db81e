#pragma once

#include <string>

#include "twirlab/io/canonical_json.hpp"
#include "twirlab/io/pipeline.hpp"

namespace twirlab {

enum class ReportFormat { Json, Text };

Json report_json(const AnalysisReport& r);

// json: canonical document.  text: human summary; `color` adds ANSI marks.
std::string emit_report(const AnalysisReport& r, ReportFormat format, bool color = false);

// Locality witness and ubiquity construction only, as text.
std::string emit_witness(const AnalysisReport& r, bool color = false);

// Every check in the stages that ran passed (validation, laws, twirled-world
// axioms, completeness, steering).  Verdicts are not checks.
bool checks_pass(const AnalysisReport& r);

}  // namespace twirlab
