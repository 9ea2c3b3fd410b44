#include "finray/svg.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "finray/errors.hpp"

namespace finray {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

} // namespace

std::string ScatterPlot::to_svg() const {
    if (x.size() != y.size()) throw InvalidArgument("ScatterPlot: x/y size mismatch");
    const int size = 480, margin = 56;
    const double span = hi > lo ? hi - lo : 1.0;
    auto px = [&](double v) { return margin + (v - lo) / span * (size - 2 * margin); };
    auto py = [&](double v) { return size - margin - (v - lo) / span * (size - 2 * margin); };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
    s << "<rect width=\"" << size << "\" height=\"" << size << "\" fill=\"white\"/>\n";
    s << "<text x=\"" << size / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n";

    // axes + ticks
    s << "<line x1=\"" << margin << "\" y1=\"" << size - margin << "\" x2=\"" << size - margin
      << "\" y2=\"" << size - margin << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
      << size - margin << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double v = lo + span * t / 5.0;
        s << "<text x=\"" << num(px(v)) << "\" y=\"" << size - margin + 18
          << "\" text-anchor=\"middle\" font-size=\"11\">" << num(v) << "</text>\n";
        s << "<text x=\"" << margin - 8 << "\" y=\"" << num(py(v) + 4)
          << "\" text-anchor=\"end\" font-size=\"11\">" << num(v) << "</text>\n";
    }
    s << "<text x=\"" << size / 2 << "\" y=\"" << size - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
    s << "<text x=\"16\" y=\"" << size / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
      << "transform=\"rotate(-90 16 " << size / 2 << ")\">" << y_label << "</text>\n";

    // identity line
    s << "<line x1=\"" << num(px(lo)) << "\" y1=\"" << num(py(lo)) << "\" x2=\"" << num(px(hi))
      << "\" y2=\"" << num(py(hi)) << "\" stroke=\"#888\" stroke-dasharray=\"5,4\"/>\n";

    for (std::size_t i = 0; i < x.size(); ++i)
        s << "<circle cx=\"" << num(px(x[i])) << "\" cy=\"" << num(py(y[i]))
          << "\" r=\"2.2\" fill=\"#1f77b4\" fill-opacity=\"0.6\"/>\n";

    s << "</svg>\n";
    return s.str();
}

void ScatterPlot::save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw DataError("ScatterPlot::save: cannot open " + path);
    f << to_svg();
    if (!f) throw DataError("ScatterPlot::save: write failed for " + path);
}

} // namespace finray
