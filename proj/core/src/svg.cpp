#include "lbp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lbp/errors.hpp"

namespace lbp::svg {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Tick step of the form {1,2,5}*10^k close to span/4.
double nice_step(double span) {
    if (span <= 0.0) return 1.0;
    const double raw = span / 4.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    if (r < 1.5) return mag;
    if (r < 3.5) return 2.0 * mag;
    if (r < 7.5) return 5.0 * mag;
    return 10.0 * mag;
}

}  // namespace

LineChart::LineChart(int width, int height, std::string title)
    : width_(width), height_(height), title_(std::move(title)) {}

void LineChart::set_axis_labels(std::string x_label, std::string y_label) {
    x_label_ = std::move(x_label);
    y_label_ = std::move(y_label);
}

void LineChart::add_series(Series series) { series_.push_back(std::move(series)); }

std::string LineChart::render() const {
    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool first = true;
    for (const Series& s : series_) {
        for (const auto& [x, y] : s.points) {
            if (first) {
                xmin = xmax = x;
                ymin = ymax = y;
                first = false;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;

    const double ml = 62, mr = 16, mt = title_.empty() ? 16 : 34, mb = 46;
    const double pw = width_ - ml - mr;
    const double ph = height_ - mt - mb;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
       << height_ << "\" viewBox=\"0 0 " << width_ << ' ' << height_ << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title_.empty())
        os << "<text x=\"" << width_ / 2 << "\" y=\"20\" text-anchor=\"middle\" "
           << "font-family=\"sans-serif\" font-size=\"14\">" << title_ << "</text>\n";

    // frame
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    // ticks
    const double xstep = nice_step(xmax - xmin);
    for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax + 1e-9 * xstep; x += xstep) {
        os << "<line x1=\"" << px(x) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(x) << "\" y2=\""
           << mt + ph + 4 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << px(x) << "\" y=\"" << mt + ph + 18
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(x)
           << "</text>\n";
    }
    const double ystep = nice_step(ymax - ymin);
    for (double y = std::ceil(ymin / ystep) * ystep; y <= ymax + 1e-9 * ystep; y += ystep) {
        os << "<line x1=\"" << ml - 4 << "\" y1=\"" << py(y) << "\" x2=\"" << ml << "\" y2=\""
           << py(y) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << ml - 7 << "\" y=\"" << py(y) + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(y)
           << "</text>\n";
    }
    if (!x_label_.empty())
        os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height_ - 8
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label_
           << "</text>\n";
    if (!y_label_.empty())
        os << "<text x=\"14\" y=\"" << mt + ph / 2
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
              "transform=\"rotate(-90 14 "
           << mt + ph / 2 << ")\">" << y_label_ << "</text>\n";

    size_t color_idx = 0;
    for (const Series& s : series_) {
        const std::string color =
            s.color.empty() ? kPalette[color_idx++ % (sizeof(kPalette) / sizeof(kPalette[0]))]
                            : s.color;
        if (s.points.size() == 1) {
            os << "<circle cx=\"" << px(s.points[0].first) << "\" cy=\"" << py(s.points[0].second)
               << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
            continue;
        }
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.3\" points=\"";
        for (const auto& [x, y] : s.points) os << fmt(px(x)) << ',' << fmt(py(y)) << ' ';
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void LineChart::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot open SVG output: " + path);
    out << render();
}

}  // namespace lbp::svg
