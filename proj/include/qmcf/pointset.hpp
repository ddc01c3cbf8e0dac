#pragma once

#include <string>
#include <vector>

#include "qmcf/geometry.hpp"

namespace qmcf {

// Finite weighted point list in R^2. Weights default to 1 until a quadrature
// weight assignment fills them in.
struct PointSet {
    std::vector<Vec2> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }

    void push_back(const Vec2& p, double w = 1.0) {
        points.push_back(p);
        weights.push_back(w);
    }

    // Stable ordering by (x, y); keeps points and weights aligned.
    void sort_by_xy();
};

// Interchange CSV with columns x, y, weight.
void write_pointset_csv(const std::string& path, const PointSet& ps,
                        const std::vector<std::string>& header_notes = {});
PointSet read_pointset_csv(const std::string& path);

}  // namespace qmcf
