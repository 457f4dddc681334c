// Minimal self-contained SVG line plots (polylines + axes); presentation
// only, fed with the exact arrays that go to CSV.
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chemopp {

struct SvgSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f6fb2";
    double width = 1.2;
    bool points = false;  // draw markers instead of a polyline
};

class SvgPlot {
public:
    std::string title;
    std::string x_label;
    std::string y_label;
    int width_px = 720;
    int height_px = 520;
    // Reproducibility header, embedded as an XML comment.
    std::vector<std::pair<std::string, std::string>> metadata;

    void add(SvgSeries series) { series_.push_back(std::move(series)); }
    bool empty() const { return series_.empty(); }
    void write(std::ostream& os) const;

private:
    std::vector<SvgSeries> series_;
};

}  // namespace chemopp
