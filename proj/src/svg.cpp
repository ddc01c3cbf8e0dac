#include "qmcf/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace qmcf {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

void LinePlot::write_svg(const std::string& path, int width, int height) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("LinePlot: cannot open " + path);

    const double ml = 70, mr = 20, mt = 36, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const PlotSeries& s : series) {
        for (const auto& [x, y] : s.points) {
            const double tx = log_x ? std::log10(x) : x;
            const double ty = log_y ? std::log10(y) : y;
            if (!std::isfinite(tx) || !std::isfinite(ty)) continue;
            xmin = std::min(xmin, tx);
            xmax = std::max(xmax, tx);
            ymin = std::min(ymin, ty);
            ymax = std::max(ymax, ty);
        }
    }
    if (!(xmax > xmin)) xmax = xmin + 1;
    if (!(ymax > ymin)) ymax = ymin + 1;
    const double xpad = 0.05 * (xmax - xmin), ypad = 0.08 * (ymax - ymin);
    xmin -= xpad;
    xmax += xpad;
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) {
        const double t = log_x ? std::log10(x) : x;
        return ml + (t - xmin) / (xmax - xmin) * pw;
    };
    auto py = [&](double y) {
        const double t = log_y ? std::log10(y) : y;
        return mt + ph - (t - ymin) / (ymax - ymin) * ph;
    };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // axes box
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";

    // ticks: 5 per axis in transformed coordinates
    for (int i = 0; i <= 4; ++i) {
        const double tx = xmin + (xmax - xmin) * i / 4.0;
        const double vx = log_x ? std::pow(10.0, tx) : tx;
        const double X = ml + pw * i / 4.0;
        out << "<line x1=\"" << X << "\" y1=\"" << mt + ph << "\" x2=\"" << X << "\" y2=\""
            << mt + ph + 5 << "\" stroke=\"#444\"/>\n";
        out << "<text x=\"" << X << "\" y=\"" << mt + ph + 18
            << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">" << fmt(vx)
            << "</text>\n";
        const double ty = ymin + (ymax - ymin) * i / 4.0;
        const double vy = log_y ? std::pow(10.0, ty) : ty;
        const double Y = mt + ph - ph * i / 4.0;
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y << "\" x2=\"" << ml << "\" y2=\"" << Y
            << "\" stroke=\"#444\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << Y + 4
            << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">" << fmt(vy)
            << "</text>\n";
    }

    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
        << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">" << x_label
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << mt + ph / 2
        << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\" transform=\"rotate(-90 "
        << 16 << " " << mt + ph / 2 << ")\">" << y_label << "</text>\n";
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"20\" font-size=\"13\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\">" << title << "</text>\n";

    int legend_y = static_cast<int>(mt) + 14;
    for (const PlotSeries& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
        if (s.dashed) out << " stroke-dasharray=\"5,4\"";
        out << " points=\"";
        for (const auto& [x, y] : s.points) out << fmt(px(x)) << "," << fmt(py(y)) << " ";
        out << "\"/>\n";
        if (!s.dashed)
            for (const auto& [x, y] : s.points)
                out << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y))
                    << "\" r=\"2.4\" fill=\"" << s.color << "\"/>\n";
        out << "<text x=\"" << ml + pw - 8 << "\" y=\"" << legend_y
            << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\" fill=\"" << s.color
            << "\">" << s.label << "</text>\n";
        legend_y += 14;
    }
    out << "</svg>\n";
}

}  // namespace qmcf
