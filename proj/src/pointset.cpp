#include "qmcf/pointset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qmcf {

void PointSet::sort_by_xy() {
    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        if (points[i].x != points[j].x) return points[i].x < points[j].x;
        return points[i].y < points[j].y;
    });
    std::vector<Vec2> p(points.size());
    std::vector<double> w(points.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        p[k] = points[idx[k]];
        w[k] = weights[idx[k]];
    }
    points = std::move(p);
    weights = std::move(w);
}

void write_pointset_csv(const std::string& path, const PointSet& ps,
                        const std::vector<std::string>& header_notes) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_pointset_csv: cannot open " + path);
    for (const auto& n : header_notes) f << "# " << n << "\n";
    f << "x,y,weight\n";
    char buf[128];
    for (std::size_t i = 0; i < ps.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", ps.points[i].x, ps.points[i].y,
                      ps.weights[i]);
        f << buf;
    }
}

PointSet read_pointset_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("read_pointset_csv: cannot open " + path);
    PointSet ps;
    std::string line;
    bool header_seen = false;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // column header row
            continue;
        }
        std::istringstream ss(line);
        std::string fx, fy, fw;
        if (!std::getline(ss, fx, ',') || !std::getline(ss, fy, ',') || !std::getline(ss, fw, ','))
            throw std::runtime_error("read_pointset_csv: malformed row: " + line);
        ps.push_back({std::stod(fx), std::stod(fy)}, std::stod(fw));
    }
    return ps;
}

}  // namespace qmcf
