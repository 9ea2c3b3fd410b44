#pragma once

#include <string>
#include <vector>

namespace finray {

// Dependency-free scatter plot with an identity reference line. Axis range
// is shared between x and y so points with x == y land exactly on the line.
struct ScatterPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    double lo = 0.0, hi = 1.0;
    std::vector<double> x, y;

    std::string to_svg() const;
    void save(const std::string& path) const;
};

} // namespace finray
