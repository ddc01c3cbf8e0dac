#include "qmcf/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qmcf/parallel.hpp"

namespace qmcf {

namespace {

void validate_unit_coords(std::span<const Vec2> pts) {
    for (const Vec2& p : pts) {
        if (p.x < -kBoxTol || p.x > 1.0 + kBoxTol || p.y < -kBoxTol || p.y > 1.0 + kBoxTol)
            throw std::invalid_argument("star_discrepancy_unit: coordinate outside [0,1]^2");
    }
}

}  // namespace

double star_discrepancy_unit(std::span<const Vec2> pts, std::int64_t normalizer) {
    if (pts.empty()) throw std::invalid_argument("star_discrepancy_unit: empty point set");
    if (normalizer < 1) throw std::invalid_argument("star_discrepancy_unit: normalizer must be >= 1");
    validate_unit_coords(pts);

    const std::size_t n = pts.size();
    std::vector<Vec2> sorted(pts.begin(), pts.end());
    for (Vec2& p : sorted) {
        p.x = std::clamp(p.x, 0.0, 1.0);
        p.y = std::clamp(p.y, 0.0, 1.0);
    }
    std::sort(sorted.begin(), sorted.end(), [](const Vec2& a, const Vec2& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    });

    std::vector<double> xs, ys;
    xs.reserve(n + 1);
    ys.reserve(n + 1);
    for (const Vec2& p : sorted) xs.push_back(p.x);
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    if (xs.back() != 1.0) xs.push_back(1.0);
    for (const Vec2& p : sorted) ys.push_back(p.y);
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    if (ys.back() != 1.0) ys.push_back(1.0);

    std::vector<std::int32_t> yrank(n);
    for (std::size_t i = 0; i < n; ++i)
        yrank[i] = static_cast<std::int32_t>(
            std::lower_bound(ys.begin(), ys.end(), sorted[i].y) - ys.begin());

    const std::size_t mx = xs.size(), my = ys.size();
    std::vector<std::int64_t> hist(my, 0);
    const double invN = 1.0 / static_cast<double>(normalizer);

    double best = 0.0;
    std::size_t pi = 0;
    for (std::size_t i = 0; i < mx; ++i) {
        const double x = xs[i];
        // Negative envelope: open counts, i.e. points strictly below the
        // corner in both coordinates (hist holds x < xs[i] at this stage).
        {
            std::int64_t run = 0;
            for (std::size_t j = 0; j < my; ++j) {
                const double dev = x * ys[j] - static_cast<double>(run) * invN;
                if (dev > best) best = dev;
                run += hist[j];
            }
        }
        while (pi < n && sorted[pi].x == x) {
            ++hist[static_cast<std::size_t>(yrank[pi])];
            ++pi;
        }
        // Positive envelope: closed counts (x <= xs[i], y <= ys[j]).
        {
            std::int64_t run = 0;
            for (std::size_t j = 0; j < my; ++j) {
                run += hist[j];
                const double dev = static_cast<double>(run) * invN - x * ys[j];
                if (dev > best) best = dev;
            }
        }
    }
    return best;
}

double star_discrepancy_unit(const PointSet& ps) {
    return star_discrepancy_unit(std::span<const Vec2>(ps.points.data(), ps.points.size()),
                                 static_cast<std::int64_t>(ps.size()));
}

namespace {

// Points of a pre-sorted cloud inside the closed unit square at rho,
// translated by -rho. Returns empty if the anchored square has no points.
std::vector<Vec2> anchored_points(std::span<const Vec2> cloud_sorted_x, const Vec2& rho) {
    std::vector<Vec2> out;
    const double x0 = rho.x - kBoxTol, x1 = rho.x + 1.0 + kBoxTol;
    const double y0 = rho.y - kBoxTol, y1 = rho.y + 1.0 + kBoxTol;
    auto lo = std::lower_bound(cloud_sorted_x.begin(), cloud_sorted_x.end(), x0,
                               [](const Vec2& p, double v) { return p.x < v; });
    for (auto it = lo; it != cloud_sorted_x.end() && it->x <= x1; ++it) {
        if (it->y >= y0 && it->y <= y1)
            out.push_back({std::clamp(it->x - rho.x, 0.0, 1.0), std::clamp(it->y - rho.y, 0.0, 1.0)});
    }
    return out;
}

double anchored_from_cloud(std::span<const Vec2> cloud_sorted_x, const Vec2& rho) {
    const std::vector<Vec2> pts = anchored_points(cloud_sorted_x, rho);
    if (pts.empty())
        throw std::runtime_error("anchored_discrepancy: empty unit square at rho = (" +
                                 std::to_string(rho.x) + ", " + std::to_string(rho.y) +
                                 ") violates the covering assumption");
    return star_discrepancy_unit(pts, static_cast<std::int64_t>(pts.size()));
}

}  // namespace

double anchored_discrepancy(const Lattice& lat, const Vec2& rho) {
    PointSet cloud = enumerate_in_box(lat, Rect{rho.x, rho.x + 1.0, rho.y, rho.y + 1.0}.inflated(1e-9));
    cloud.sort_by_xy();
    return anchored_from_cloud(cloud.points, rho);
}

double anchored_discrepancy(const PointSet& ps, const Vec2& rho) {
    PointSet cloud = ps;
    cloud.sort_by_xy();
    return anchored_from_cloud(cloud.points, rho);
}

namespace {

struct AnchorEval {
    Vec2 rho;
    double value = 0.0;
};

std::vector<double> evaluate_anchors(std::span<const Vec2> cloud, std::span<const Vec2> anchors) {
    return parallel_map<double>(anchors.size(),
                                [&](std::size_t i) { return anchored_from_cloud(cloud, anchors[i]); });
}

// Event coordinates (point enters/exits the anchored square) near c within
// +-w on one axis; vals are the sorted lattice-point coordinates on that axis.
void collect_events(const std::vector<double>& vals, double c, double w, std::vector<double>& out) {
    auto push_range = [&](double lo, double hi, double shift) {
        auto it = std::lower_bound(vals.begin(), vals.end(), lo);
        int kept = 0;
        for (; it != vals.end() && *it <= hi && kept < 8; ++it, ++kept) out.push_back(*it - shift);
    };
    push_range(c - w, c + w, 0.0);        // lambda at the near edge
    push_range(c + 1.0 - w, c + 1.0 + w, 1.0);  // lambda at the far edge
}

}  // namespace

DiscrepancyEstimate shift_discrepancy(const Lattice& lat, const ShiftOptions& opt) {
    if (opt.grid_n < 1) throw std::invalid_argument("shift_discrepancy: grid_n must be >= 1");
    if (opt.refine_rounds < 0) throw std::invalid_argument("shift_discrepancy: negative refine_rounds");

    const Mat2 B = lat.effective_basis();
    const Vec2 b0 = B.col0(), b1 = B.col1();

    // Cloud covering every anchored square reachable by the search: one
    // fundamental domain plus refinement spill, plus the unit square.
    const double xlo = std::min({0.0, b0.x, b1.x, b0.x + b1.x});
    const double xhi = std::max({0.0, b0.x, b1.x, b0.x + b1.x});
    const double ylo = std::min({0.0, b0.y, b1.y, b0.y + b1.y});
    const double yhi = std::max({0.0, b0.y, b1.y, b0.y + b1.y});
    const double pad = 0.25 * (b0.norm() + b1.norm()) + 1e-6;
    PointSet cloud = enumerate_in_box(lat, Rect{xlo - pad, xhi + 1.0 + pad, ylo - pad, yhi + 1.0 + pad});
    cloud.sort_by_xy();
    std::vector<double> cloud_xs, cloud_ys;
    cloud_xs.reserve(cloud.size());
    cloud_ys.reserve(cloud.size());
    for (const Vec2& p : cloud.points) cloud_xs.push_back(p.x);
    for (const Vec2& p : cloud.points) cloud_ys.push_back(p.y);
    std::sort(cloud_ys.begin(), cloud_ys.end());

    DiscrepancyEstimate est;
    est.grid_resolution = (b0.norm() + b1.norm()) / (2.0 * opt.grid_n);

    std::vector<AnchorEval> all;
    all.reserve(static_cast<std::size_t>(opt.grid_n) * opt.grid_n + 4096);

    auto run_batch = [&](const std::vector<Vec2>& anchors) {
        const std::vector<double> vals = evaluate_anchors(cloud.points, anchors);
        for (std::size_t i = 0; i < anchors.size(); ++i) all.push_back({anchors[i], vals[i]});
        est.anchors_evaluated += static_cast<std::int64_t>(anchors.size());
    };

    // Round 0: uniform grid over the fundamental domain in basis coordinates.
    {
        std::vector<Vec2> grid;
        grid.reserve(static_cast<std::size_t>(opt.grid_n) * opt.grid_n);
        for (int i = 0; i < opt.grid_n; ++i) {
            for (int j = 0; j < opt.grid_n; ++j) {
                const double s = (i + 0.5) / opt.grid_n;
                const double t = (j + 0.5) / opt.grid_n;
                grid.push_back(s * b0 + t * b1);
            }
        }
        run_batch(grid);
        est.lower_bound = 0.0;
        for (const AnchorEval& ae : all) est.lower_bound = std::max(est.lower_bound, ae.value);
    }

    const double base_step = std::max(b0.norm(), b1.norm()) / opt.grid_n;
    auto top_candidates = [&](int k) {
        std::vector<std::size_t> idx(all.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::partial_sort(idx.begin(), idx.begin() + std::min<std::size_t>(k, idx.size()), idx.end(),
                          [&](std::size_t a, std::size_t b) {
                              if (all[a].value != all[b].value) return all[a].value > all[b].value;
                              return a < b;
                          });
        idx.resize(std::min<std::size_t>(k, idx.size()));
        return idx;
    };

    double step = base_step;
    for (int round = 0; round <= opt.refine_rounds; ++round) {
        const auto seeds = top_candidates(opt.top_candidates);
        std::vector<Vec2> batch;
        for (const std::size_t si : seeds) {
            const Vec2 c = all[si].rho;
            // Local grid around the candidate, span +-step, step/4 pitch.
            if (round > 0) {
                for (int i = -4; i <= 4; ++i)
                    for (int j = -4; j <= 4; ++j)
                        if (i != 0 || j != 0)
                            batch.push_back({c.x + i * step * 0.25, c.y + j * step * 0.25});
            }
            // Anchors at and straddling nearby entry/exit events.
            std::vector<double> ex{c.x}, ey{c.y};
            collect_events(cloud_xs, c.x, step, ex);
            collect_events(cloud_ys, c.y, step, ey);
            for (const double vx : ex) {
                for (const double vy : ey) {
                    if (vx == c.x && vy == c.y) continue;
                    for (const double dx : {-opt.straddle_delta, 0.0, opt.straddle_delta})
                        for (const double dy : {-opt.straddle_delta, 0.0, opt.straddle_delta})
                            batch.push_back({vx + dx, vy + dy});
                }
            }
        }
        if (!batch.empty()) run_batch(batch);
        step *= 0.25;
    }

    est.estimate = 0.0;
    for (const AnchorEval& ae : all) {
        if (ae.value > est.estimate) {
            est.estimate = ae.value;
            est.argmax_anchor = ae.rho;
        }
    }
    est.lower_bound = std::min(est.lower_bound, est.estimate);
    return est;
}

DilationDiscrepancy dilation_discrepancy(const Lattice& gamma, double a,
                                         std::span<const double> tau_samples,
                                         const ShiftOptions& opt) {
    if (!(a > 0.0)) throw std::invalid_argument("dilation_discrepancy: a must be positive");
    if (tau_samples.empty())
        throw std::invalid_argument("dilation_discrepancy: tau_samples must be non-empty");
    for (const double t : tau_samples)
        if (!(t > 0.0)) throw std::invalid_argument("dilation_discrepancy: tau samples must be positive");

    DilationDiscrepancy out;
    out.tau_samples.assign(tau_samples.begin(), tau_samples.end());
    for (const double tau : tau_samples) {
        const Lattice lt = gamma.with_scale(a).with_tau(tau);
        out.per_tau.push_back(shift_discrepancy(lt, opt));
    }
    out.combined = out.per_tau.front();
    out.argmax_tau = tau_samples.front();
    for (std::size_t i = 1; i < out.per_tau.size(); ++i) {
        if (out.per_tau[i].estimate > out.combined.estimate) {
            out.combined = out.per_tau[i];
            out.argmax_tau = tau_samples[i];
        }
        out.combined.lower_bound = std::max(out.combined.lower_bound, out.per_tau[i].lower_bound);
    }
    std::int64_t total = 0;
    for (const auto& e : out.per_tau) total += e.anchors_evaluated;
    out.combined.anchors_evaluated = total;
    return out;
}

DecayFit decay_fit(const Lattice& gamma, std::span<const double> a_list, const ShiftOptions& opt) {
    if (a_list.size() < 4)
        throw std::invalid_argument("decay_fit: need at least 4 scales for a fit");
    for (const double a : a_list)
        if (!(a > 0.0) || !(a < 1.0)) throw std::invalid_argument("decay_fit: scales must lie in (0,1)");

    DecayFit fit;
    for (const double a : a_list) {
        DecayRow row;
        row.a = a;
        row.est = shift_discrepancy(gamma.with_scale(a), opt);
        fit.table.push_back(row);
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(fit.table.size());
    for (const DecayRow& r : fit.table) {
        const double lx = std::log(r.a), ly = std::log(r.est.estimate);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.C_hat = 0.0;
    for (const DecayRow& r : fit.table)
        fit.C_hat = std::max(fit.C_hat, r.est.estimate / (r.a * r.a * std::log(2.0 + 1.0 / r.a)));
    return fit;
}

}  // namespace qmcf
