#pragma once

#include <string>
#include <utility>
#include <vector>

namespace lbp::svg {

struct Series {
    std::string label;
    std::string color;  // picked from a fixed palette when empty
    std::vector<std::pair<double, double>> points;
};

// Line/scatter chart with framed axes and tick labels; enough for tip-path
// fans and speed curves, nothing more.
class LineChart {
public:
    LineChart(int width, int height, std::string title = "");

    void set_axis_labels(std::string x_label, std::string y_label);
    void add_series(Series series);

    std::string render() const;
    void save(const std::string& path) const;

private:
    int width_;
    int height_;
    std::string title_;
    std::string x_label_;
    std::string y_label_;
    std::vector<Series> series_;
};

}  // namespace lbp::svg
