#include "chemopp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace chemopp {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Round tick spacing to 1/2/5 times a power of ten.
double nice_step(double span, int target_ticks) {
    const double raw = span / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    double step = 10.0;
    if (norm <= 1.5) step = 1.0;
    else if (norm <= 3.5) step = 2.0;
    else if (norm <= 7.5) step = 5.0;
    return step * mag;
}

}  // namespace

void SvgPlot::write(std::ostream& os) const {
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : series_) {
        for (double v : s.x) {
            x_lo = std::min(x_lo, v);
            x_hi = std::max(x_hi, v);
        }
        for (double v : s.y) {
            y_lo = std::min(y_lo, v);
            y_hi = std::max(y_hi, v);
        }
    }
    if (!(x_lo < x_hi)) { x_lo -= 0.5; x_hi += 0.5; }
    if (!(y_lo < y_hi)) { y_lo -= 0.5; y_hi += 0.5; }
    const double x_pad = 0.04 * (x_hi - x_lo), y_pad = 0.06 * (y_hi - y_lo);
    x_lo -= x_pad; x_hi += x_pad;
    y_lo -= y_pad; y_hi += y_pad;

    const double ml = 64, mr = 18, mt = title.empty() ? 18 : 36, mb = 46;
    const double pw = width_px - ml - mr, ph = height_px - mt - mb;
    auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) { return mt + (y_hi - y) / (y_hi - y_lo) * ph; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_px << "\" height=\""
       << height_px << "\" viewBox=\"0 0 " << width_px << " " << height_px << "\">\n";
    if (!metadata.empty()) {
        os << "<!--";
        for (const auto& [k, v] : metadata) os << " " << k << "=" << v;
        os << " -->\n";
    }
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty())
        os << "<text x=\"" << width_px / 2 << "\" y=\"22\" text-anchor=\"middle\" "
           << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

    // Axes frame and ticks.
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    const double xs = nice_step(x_hi - x_lo, 6), ys = nice_step(y_hi - y_lo, 6);
    for (double x = std::ceil(x_lo / xs) * xs; x <= x_hi + 1e-12 * xs; x += xs) {
        os << "<line x1=\"" << px(x) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(x) << "\" y2=\""
           << mt + ph + 5 << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"" << px(x) << "\" y=\"" << mt + ph + 19
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(x)
           << "</text>\n";
    }
    for (double y = std::ceil(y_lo / ys) * ys; y <= y_hi + 1e-12 * ys; y += ys) {
        os << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(y) << "\" x2=\"" << ml << "\" y2=\""
           << py(y) << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"" << ml - 8 << "\" y=\"" << py(y) + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(y)
           << "</text>\n";
    }
    if (!x_label.empty())
        os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height_px - 10
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
           << "</text>\n";
    if (!y_label.empty())
        os << "<text x=\"14\" y=\"" << mt + ph / 2
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           << "transform=\"rotate(-90 14 " << mt + ph / 2 << ")\">" << y_label << "</text>\n";

    for (const auto& s : series_) {
        const size_t n = std::min(s.x.size(), s.y.size());
        if (s.points) {
            for (size_t i = 0; i < n; ++i)
                os << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"2.2\" "
                   << "fill=\"" << s.color << "\"/>\n";
        } else {
            os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"" << s.width
               << "\" points=\"";
            for (size_t i = 0; i < n; ++i) {
                if (i) os << " ";
                os << fmt(px(s.x[i])) << "," << fmt(py(s.y[i]));
            }
            os << "\"/>\n";
        }
    }
    os << "</svg>\n";
}

}  // namespace chemopp
