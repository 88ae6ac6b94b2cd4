#pragma once
#include <string>
#include <vector>

#include "monolab/monotone.hpp"

namespace monolab {

// Shortest round-trip decimal form of a double (std::to_chars); parsing
// the emitted text recovers the same bits.
std::string format_double(double x);

// Fixed trace schema: r,A_plus,A_minus,B_plus,B_minus,phi,phi_F,verdict
// with LF line endings and '.' decimal separator.
void emit_csv(const MonotonicityTrace& trace, const std::string& path);
void emit_csv(const DyadicTrace& trace, const std::string& path);

struct TraceCsv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

TraceCsv parse_trace_csv(const std::string& path);

} // namespace monolab
