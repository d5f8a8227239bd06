#pragma once

#include <iosfwd>
#include <string>

#include "homoperc/ensemble.hpp"
#include "homoperc/newman_ziff.hpp"

namespace homoperc {

// Plain-text tables with '#' comment headers. The first comment lines echo
// the producing command so a run can be reproduced from its outputs; a
// `# meta` line carries the numeric fields needed to parse the table back.
// No timestamps anywhere: rerunning a command rewrites identical bytes.

void write_canonical_csv(std::ostream& os, const CanonicalSeries& series,
                         const std::string& command_echo, const std::string& graph_id);

CanonicalSeries read_canonical_csv(std::istream& is, std::string* graph_id = nullptr);

void write_curve_csv(std::ostream& os, const GrandCanonicalCurve& curve,
                     const std::string& command_echo);

GrandCanonicalCurve read_curve_csv(std::istream& is);

// Shortest decimal form that round-trips a double exactly.
std::string format_double(double v);

}  // namespace homoperc
