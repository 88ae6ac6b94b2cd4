#include "monolab/csvio.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace monolab {

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

const char* kTraceHeader = "r,A_plus,A_minus,B_plus,B_minus,phi,phi_F,verdict\n";

void write_rows(std::ofstream& os, const std::vector<double>& r, const std::vector<double>& ap,
                const std::vector<double>& am, const std::vector<double>& bp,
                const std::vector<double>& bm, const std::vector<double>& phi,
                const std::vector<double>& phiF, const std::vector<int>& verdict) {
    for (size_t i = 0; i < r.size(); ++i) {
        os << format_double(r[i]) << ',' << format_double(ap[i]) << ',' << format_double(am[i])
           << ',' << format_double(bp[i]) << ',' << format_double(bm[i]) << ','
           << format_double(phi[i]) << ',' << format_double(phiF[i]) << ','
           << (i < verdict.size() ? verdict[i] : 1) << '\n';
    }
}

} // namespace

void emit_csv(const MonotonicityTrace& trace, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw numerical_error("emit_csv: cannot open " + path);
    os << kTraceHeader;
    write_rows(os, trace.radii, trace.A_plus, trace.A_minus, trace.B_plus, trace.B_minus,
               trace.phi, trace.phi_F, trace.step_ok);
}

void emit_csv(const DyadicTrace& trace, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw numerical_error("emit_csv: cannot open " + path);
    os << kTraceHeader;
    write_rows(os, trace.radii, trace.A_plus, trace.A_minus, trace.B_plus, trace.B_minus,
               trace.phi, trace.phi_F, trace.product_ok);
}

TraceCsv parse_trace_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw numerical_error("parse_trace_csv: cannot open " + path);
    TraceCsv out;
    std::string line;
    if (!std::getline(is, line)) throw numerical_error("parse_trace_csv: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) out.header.push_back(cell);
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        size_t pos = 0;
        while (pos <= line.size()) {
            size_t next = line.find(',', pos);
            std::string tok = line.substr(pos, next == std::string::npos ? next : next - pos);
            double v = 0.0;
            auto rc = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (rc.ec != std::errc())
                throw numerical_error("parse_trace_csv: bad number '" + tok + "'");
            row.push_back(v);
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

} // namespace monolab
