#include "monolab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "monolab/errors.hpp"

namespace monolab {

void emit_svg(const std::vector<SvgSeries>& series, const std::string& title,
              const std::string& path, bool log_x) {
    const int W = 720, H = 480, ML = 70, MR = 20, MT = 40, MB = 50;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw numerical_error("emit_svg: cannot open " + path);

    double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            double x = s.x[i];
            if (log_x) {
                if (x <= 0.0) throw numerical_error("emit_svg: log axis needs positive x");
                x = std::log10(x);
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmin < xmax)) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (!(ymin < ymax)) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) {
        if (log_x) x = std::log10(x);
        return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR);
    };
    auto py = [&](double y) { return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
       << "</text>\n";
    // axes
    os << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR << "\" y2=\""
       << H - MB << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << H - MB
       << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        double fx = xmin + (xmax - xmin) * t / 5.0;
        double vx = log_x ? std::pow(10.0, fx) : fx;
        double X = ML + (fx - xmin) / (xmax - xmin) * (W - ML - MR);
        os << "<line x1=\"" << X << "\" y1=\"" << H - MB << "\" x2=\"" << X << "\" y2=\""
           << H - MB + 5 << "\" stroke=\"black\"/>\n";
        char buf[40];
        snprintf(buf, sizeof(buf), "%.4g", vx);
        os << "<text x=\"" << X << "\" y=\"" << H - MB + 20
           << "\" text-anchor=\"middle\" font-size=\"11\">" << buf << "</text>\n";
        double vy = ymin + (ymax - ymin) * t / 5.0;
        double Y = py(vy);
        os << "<line x1=\"" << ML - 5 << "\" y1=\"" << Y << "\" x2=\"" << ML << "\" y2=\"" << Y
           << "\" stroke=\"black\"/>\n";
        snprintf(buf, sizeof(buf), "%.4g", vy);
        os << "<text x=\"" << ML - 8 << "\" y=\"" << Y + 4
           << "\" text-anchor=\"end\" font-size=\"11\">" << buf << "</text>\n";
    }
    int ci = 0;
    for (const auto& s : series) {
        const char* col = colors[ci % 5];
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < s.x.size(); ++i) os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        os << "\"/>\n";
        os << "<text x=\"" << W - MR - 8 << "\" y=\"" << MT + 16 * (ci + 1)
           << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << col << "\">" << s.label
           << "</text>\n";
        ++ci;
    }
    os << "</svg>\n";
}

} // namespace monolab
