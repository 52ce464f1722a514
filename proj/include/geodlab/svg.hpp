#pragma once

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "report.hpp"
#include "types.hpp"

namespace geodlab {

// Standalone SVG with one polyline path per curve, equal-aspect viewBox
// fitted to the data with a 5% margin, y flipped so the mathematical
// orientation matches the picture. Stroke colors cycle red/green/blue in
// input order.
inline std::string to_svg(const std::vector<std::vector<Vec2>>& curves) {
    if (curves.empty()) throw std::invalid_argument("to_svg: need at least one curve");
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    std::size_t total = 0;
    for (const auto& c : curves) {
        total += c.size();
        for (const Vec2& p : c) {
            xmin = std::min(xmin, p.x());
            xmax = std::max(xmax, p.x());
            ymin = std::min(ymin, p.y());
            ymax = std::max(ymax, p.y());
        }
    }
    if (total == 0) throw std::invalid_argument("to_svg: curves are empty");
    const double w = xmax - xmin, h = ymax - ymin;
    const double pad = 0.025 * std::max({w, h, 1e-9});
    const double vx = xmin - pad, vw = w + 2 * pad;
    const double vy = -(ymax + pad), vh = h + 2 * pad;  // y flipped

    static const char* colors[3] = {"red", "green", "blue"};
    const double stroke = 0.005 * std::max(vw, vh);

    std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"" +
           format_double(800.0 * vh / vw) + "\" viewBox=\"" + format_double(vx) + " " +
           format_double(vy) + " " + format_double(vw) + " " + format_double(vh) + "\">\n";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        if (curves[c].empty()) continue;
        svg += "<path fill=\"none\" stroke=\"";
        svg += colors[c % 3];
        svg += "\" stroke-width=\"" + format_double(stroke) + "\" d=\"";
        for (std::size_t i = 0; i < curves[c].size(); ++i) {
            svg += (i == 0) ? "M " : " L ";
            svg += format_double(curves[c][i].x());
            svg += ' ';
            svg += format_double(-curves[c][i].y());
        }
        svg += "\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

inline void emit_svg(const std::vector<std::vector<Vec2>>& curves, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("emit_svg: cannot open " + path);
    f << to_svg(curves);
    if (!f) throw std::runtime_error("emit_svg: write failed for " + path);
}

}  // namespace geodlab
