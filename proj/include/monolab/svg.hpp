#pragma once
#include <string>
#include <vector>

namespace monolab {

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Minimal line chart, no rendering dependencies. log_x switches the
// abscissa to log10 (all x must be positive then).
void emit_svg(const std::vector<SvgSeries>& series, const std::string& title,
              const std::string& path, bool log_x = false);

} // namespace monolab
