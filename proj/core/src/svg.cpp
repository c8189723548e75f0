#include "contraflow/svg.hpp"

#include "contraflow/csv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace contraflow {

namespace {

constexpr double kW = 800, kH = 500;
constexpr double kL = 70, kR = 20, kT = 40, kB = 50;

std::string fmt(double v) {
    // two decimals is plenty for pixel coordinates and keeps files small
    const double r = std::round(v * 100.0) / 100.0;
    return format_double(r);
}

void polyline(std::ostringstream& os, std::span<const double> xs, std::span<const double> ys,
              double xmin, double xmax, double lymin, double lymax, const char* color) {
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(ys[i] > 0.0)) continue;  // log scale skips nonpositive points
        const double px = kL + (xs[i] - xmin) / (xmax - xmin) * (kW - kL - kR);
        const double ly = std::log10(ys[i]);
        const double py = kH - kB - (ly - lymin) / (lymax - lymin) * (kH - kT - kB);
        if (!first) os << ' ';
        os << fmt(px) << ',' << fmt(py);
        first = false;
    }
    os << "\"/>\n";
}

}  // namespace

std::string convergence_svg(std::span<const double> xs, std::span<const double> observed,
                            std::span<const double> bound, const std::string& title) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = std::numeric_limits<double>::infinity(), ymax = 0.0;
    for (double x : xs) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    for (auto s : {observed, bound})
        for (double y : s)
            if (y > 0.0) {
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > 0.0)) { ymin = 1e-1; ymax = 1.0; }
    if (!(ymin < ymax)) ymin = ymax / 10.0;
    const double lymin = std::floor(std::log10(ymin));
    const double lymax = std::ceil(std::log10(ymax));

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
       << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
    os << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"15\">" << title << "</text>\n";
    // axes
    os << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\"" << kH - kB
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR << "\" y2=\""
       << kH - kB << "\" stroke=\"black\"/>\n";
    // y decade ticks
    for (double d = lymin; d <= lymax + 0.5; d += 1.0) {
        const double py = kH - kB - (d - lymin) / (lymax - lymin) * (kH - kT - kB);
        os << "<line x1=\"" << kL - 4 << "\" y1=\"" << fmt(py) << "\" x2=\"" << kL << "\" y2=\""
           << fmt(py) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << kL - 8 << "\" y=\"" << fmt(py + 4) << "\" text-anchor=\"end\" "
              "font-family=\"sans-serif\" font-size=\"11\">1e" << format_int(static_cast<std::int64_t>(d))
           << "</text>\n";
    }
    // x ticks (quarters)
    for (int i = 0; i <= 4; ++i) {
        const double x = xmin + (xmax - xmin) * i / 4.0;
        const double px = kL + (x - xmin) / (xmax - xmin) * (kW - kL - kR);
        os << "<line x1=\"" << fmt(px) << "\" y1=\"" << kH - kB << "\" x2=\"" << fmt(px)
           << "\" y2=\"" << kH - kB + 4 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fmt(px) << "\" y=\"" << kH - kB + 18
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << format_double(std::round(x * 1000.0) / 1000.0) << "</text>\n";
    }
    polyline(os, xs, bound, xmin, xmax, lymin, lymax, "#d62728");
    polyline(os, xs, observed, xmin, xmax, lymin, lymax, "#1f77b4");
    os << "<text x=\"" << kW - kR - 10 << "\" y=\"" << kT + 14 << "\" text-anchor=\"end\" "
          "font-family=\"sans-serif\" font-size=\"12\" fill=\"#d62728\">bound</text>\n";
    os << "<text x=\"" << kW - kR - 10 << "\" y=\"" << kT + 30 << "\" text-anchor=\"end\" "
          "font-family=\"sans-serif\" font-size=\"12\" fill=\"#1f77b4\">observed</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace contraflow
