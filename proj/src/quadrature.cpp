#include "qmcf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qmcf/parallel.hpp"
#include "qmcf/quad.hpp"

namespace qmcf {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kEps = 2.220446049250313e-16;
}  // namespace

std::int64_t box_count(const Lattice& lat, const Vec2& rho) {
    return count_in_box(lat, Rect::unit_square_at(rho));
}

double weight_sweep_at(const PointSet& ambient, std::size_t index) {
    const Vec2 lam = ambient.points[index];
    // Candidates: points whose own unit square can overlap lambda's.
    std::vector<Vec2> cand;
    for (const Vec2& p : ambient.points) {
        if (std::abs(p.x - lam.x) <= 1.0 + 2 * kBoxTol && std::abs(p.y - lam.y) <= 1.0 + 2 * kBoxTol)
            cand.push_back(p);
    }

    const double ax0 = lam.x - 1.0, ax1 = lam.x;
    const double ay0 = lam.y - 1.0, ay1 = lam.y;
    std::vector<double> xev = {ax0, ax1}, yev = {ay0, ay1};
    for (const Vec2& p : cand) {
        for (const double e : {p.x - 1.0, p.x})
            if (e > ax0 && e < ax1) xev.push_back(e);
        for (const double e : {p.y - 1.0, p.y})
            if (e > ay0 && e < ay1) yev.push_back(e);
    }
    std::sort(xev.begin(), xev.end());
    xev.erase(std::unique(xev.begin(), xev.end()), xev.end());
    std::sort(yev.begin(), yev.end());
    yev.erase(std::unique(yev.begin(), yev.end()), yev.end());

    // N_rho is constant on each open cell; the cell center count is exact.
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < xev.size(); ++i) {
        const double wx = xev[i + 1] - xev[i];
        if (!(wx > 0.0)) continue;
        const double cx = 0.5 * (xev[i] + xev[i + 1]);
        for (std::size_t j = 0; j + 1 < yev.size(); ++j) {
            const double wy = yev[j + 1] - yev[j];
            if (!(wy > 0.0)) continue;
            const double cy = 0.5 * (yev[j] + yev[j + 1]);
            std::int64_t n = 0;
            for (const Vec2& p : cand)
                if (p.x >= cx && p.x <= cx + 1.0 && p.y >= cy && p.y <= cy + 1.0) ++n;
            // n >= 1 always: lambda itself lies in every anchored square here.
            acc += wx * wy / static_cast<double>(n);
        }
    }
    return acc;
}

PointSet qmc_weights_sweep(const PointSet& ambient, const Rect& core) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ambient.size(); ++i)
        if (core.contains(ambient.points[i])) idx.push_back(i);
    const std::vector<double> w =
        parallel_map<double>(idx.size(), [&](std::size_t k) { return weight_sweep_at(ambient, idx[k]); });
    PointSet out;
    for (std::size_t k = 0; k < idx.size(); ++k) out.push_back(ambient.points[idx[k]], w[k]);
    return out;
}

PointSet qmc_weights(const Lattice& lat, const Rect& region) {
    const CoveringCheck cov = min_box_count(lat);
    if (cov.min_count < 1)
        throw std::runtime_error(
            "qmc_weights: coverage violation (empty unit square at rho = (" +
            std::to_string(cov.argmin_rho.x) + ", " + std::to_string(cov.argmin_rho.y) +
            ")); the det(Lambda) weight rule requires every unit square to contain a point");
    PointSet ps = enumerate_in_box(lat, region);
    ps.sort_by_xy();
    const double det = lat.det_effective();
    for (double& w : ps.weights) w = det;
    return ps;
}

namespace {

QuadratureResult finish_error(const SmoothFn2D& h, Complex weighted_sum, double abs_sum,
                              std::int64_t npts, double radius, double sum_tail,
                              const QuadratureOptions& opt) {
    QuadratureResult out;
    Complex integral;
    double int_tail = 0.0;
    if (h.exact_integral) {
        integral = *h.exact_integral;
    } else {
        if (!h.envelope) throw std::invalid_argument("quadrature_error: integrand needs an envelope");
        // envelope-truncated adaptive integral plus its own tail budget
        const double R = radius;
        integral = integrate_2d_complex([&](double x, double y) { return h.eval({x, y}); },
                                        opt.center.x - R, opt.center.x + R, opt.center.y - R,
                                        opt.center.y + R, opt.tol * 0.1);
        int_tail = integrate_1d([&](double r) { return 2.0 * kPi * r * h.envelope(r); }, R, 4.0 * R + 64.0,
                                opt.tol * 0.01);
    }
    out.value = integral - weighted_sum;
    out.tail_budget = sum_tail + int_tail;
    out.rounding_budget = kEps * (abs_sum * (std::log2(static_cast<double>(npts) + 2.0) + 2.0) +
                                  std::abs(integral));
    out.points_used = npts;
    out.truncation_radius = radius;
    return out;
}

double envelope_tail(const SmoothFn2D& h, double r) {
    if (r <= 0.0) r = 0.0;
    return integrate_1d([&](double s) { return 2.0 * kPi * s * h.envelope(s); }, r, 4.0 * r + 64.0,
                        1e-16);
}

double pick_radius(const SmoothFn2D& h, double density, const QuadratureOptions& opt) {
    if (opt.radius) return *opt.radius;
    if (h.exp_form) {
        // radius where the envelope itself is tiny relative to the target
        const double bound = opt.tol * 0.01 / std::max(1.0, density);
        return std::max(2.0, h.exp_form->radius_for(bound) + 2.0);
    }
    // fall back to doubling search on the envelope tail
    double r = 4.0;
    while (r < 512.0 && envelope_tail(h, r) * std::max(1.0, density) > opt.tol * 0.05) r *= 1.5;
    return r;
}

}  // namespace

LatticeSum sum_exp_quadratic(const ExpQuadratic& q, const Lattice& lat, const Vec2& center,
                             double radius) {
    const Mat2 B = lat.effective_basis();
    const Vec2 c0 = B.col0(), c1 = B.col1();

    // Row direction c0 (index i), rows indexed by j along c1. Row j intersects
    // the disc when the perpendicular distance from center is <= radius.
    const double c0n = c0.norm();
    const Vec2 n0{-c0.y / c0n, c0.x / c0n};  // unit normal to c0
    const double perp_step = c1.dot(n0);
    const double perp_center = center.dot(n0);
    if (perp_step == 0.0) throw std::invalid_argument("sum_exp_quadratic: degenerate basis");
    const double jlo_f = (perp_center - radius) / perp_step;
    const double jhi_f = (perp_center + radius) / perp_step;
    const std::int64_t j0 = static_cast<std::int64_t>(std::floor(std::min(jlo_f, jhi_f)));
    const std::int64_t j1 = static_cast<std::int64_t>(std::ceil(std::max(jlo_f, jhi_f)));

    // Second difference of Q along c0 is row-independent.
    const Complex qc0 = q.cxx * (c0.x * c0.x) + q.cyy * (c0.y * c0.y) + q.cxy * (c0.x * c0.y);
    const Complex rr = std::exp(2.0 * qc0);

    LatticeSum out;
    const double r2 = radius * radius;
    const double re_qc0 = qc0.real();
    for (std::int64_t j = j0; j <= j1; ++j) {
        const Vec2 p{c1.x * static_cast<double>(j) - center.x, c1.y * static_cast<double>(j) - center.y};
        // |p + i*c0|^2 <= r^2  ->  A i^2 + Bq i + C <= 0
        const double A = c0.norm2();
        const double Bq = 2.0 * p.dot(c0);
        const double C = p.norm2() - r2;
        const double disc = Bq * Bq - 4.0 * A * C;
        if (disc < 0.0) continue;
        const double sq = std::sqrt(disc);
        const std::int64_t i0 = static_cast<std::int64_t>(std::ceil((-Bq - sq) / (2.0 * A)));
        const std::int64_t i1 = static_cast<std::int64_t>(std::floor((-Bq + sq) / (2.0 * A)));
        if (i1 < i0) continue;
        out.points += i1 - i0 + 1;

        // Start at the row's modulus peak and recur outward; entering at the
        // disc edge can underflow for anisotropic exponents and a zero never
        // recovers in a multiplicative recurrence.
        const Vec2 rowbase{c1.x * static_cast<double>(j), c1.y * static_cast<double>(j)};
        const Complex dlin = q.cx * c0.x + q.cy * c0.y +
                             2.0 * (q.cxx * rowbase.x * c0.x + q.cyy * rowbase.y * c0.y) +
                             q.cxy * (rowbase.x * c0.y + rowbase.y * c0.x);
        // Re Q along the row: re_qc0 * i^2 + (Re dlin) * i + const
        std::int64_t istar = i0;
        if (re_qc0 < 0.0) {
            const double is = -dlin.real() / (2.0 * re_qc0);
            istar = std::clamp(static_cast<std::int64_t>(std::llround(is)), i0, i1);
        }
        const Vec2 pstar{rowbase.x + c0.x * static_cast<double>(istar),
                         rowbase.y + c0.y * static_cast<double>(istar)};
        const Complex vstar = std::exp(q.exponent(pstar));

        Complex row_sum{0.0, 0.0};
        double row_abs = 0.0;
        // rightward: Q(i+1) - Q(i) = dlin + (2i+1) qc0
        {
            Complex v = vstar;
            Complex ratio = std::exp(dlin + static_cast<double>(2 * istar + 1) * qc0);
            for (std::int64_t i = istar; i <= i1; ++i) {
                row_sum += v;
                row_abs += std::abs(v);
                if (v == Complex{0.0, 0.0}) break;  // underflowed true tail
                v *= ratio;
                ratio *= rr;
            }
        }
        // leftward: Q(i-1) - Q(i) = -dlin - (2i-1) qc0
        {
            Complex v = vstar;
            Complex ratio = std::exp(-dlin - static_cast<double>(2 * istar - 1) * qc0);
            for (std::int64_t i = istar; i > i0; --i) {
                v *= ratio;
                ratio *= rr;
                row_sum += v;
                row_abs += std::abs(v);
                if (v == Complex{0.0, 0.0}) break;
            }
        }
        out.sum += row_sum;
        out.abs_sum += row_abs;
    }
    return out;
}

namespace {

// Lattice path for exp-quadratic integrands: truncate about the modulus peak
// using the exact bound exp(re_peak + lambda_max r^2), with a closed-form
// tail budget (density * Gaussian mass beyond the disc plus one boundary
// envelope value).
QuadratureResult lattice_error_fast(const SmoothFn2D& h, const Lattice& lat,
                                    const QuadratureOptions& opt) {
    const double det = lat.det_effective();
    const double density = 1.0 / det;
    const Mat2 B = lat.effective_basis();
    const double cell_diam = B.col0().norm() + B.col1().norm();
    const ExpQuadratic::Peak pk = h.exp_form->peak();
    const double lam = -pk.lambda_max;  // > 0

    const double mass_factor = density * kPi / lam + 1.0;
    const double target = opt.tol * 0.5;
    // exp(re_peak + lambda_max s^2) * mass_factor <= target
    const double s2 = (pk.re_value - std::log(target) + std::log(mass_factor)) / lam;
    if (!(s2 > 0.0)) {
        // every point is below the budget; the sum contributes only its bound
        const double tail = mass_factor * std::exp(pk.re_value);
        return finish_error(h, Complex{0.0, 0.0}, 0.0, 0, 0.0, tail, opt);
    }
    const double s = std::sqrt(s2);
    const double radius = opt.radius ? *opt.radius : s + cell_diam;
    const LatticeSum ls = sum_exp_quadratic(*h.exp_form, lat, pk.location, radius);
    const double edge = std::max(0.0, radius - cell_diam);
    const double sum_tail = mass_factor * std::exp(pk.re_value - lam * edge * edge);
    return finish_error(h, det * ls.sum, det * ls.abs_sum, ls.points, radius, sum_tail, opt);
}

}  // namespace

QuadratureResult quadrature_error(const SmoothFn2D& h, const Lattice& lat,
                                  const QuadratureOptions& opt) {
    if (!h.envelope) throw std::invalid_argument("quadrature_error: integrand needs an envelope");
    if (h.exp_form) return lattice_error_fast(h, lat, opt);

    const double det = lat.det_effective();
    const double density = 1.0 / det;
    const double radius = pick_radius(h, density, opt);
    PointSet pts = enumerate_in_box(
        lat, {opt.center.x - radius, opt.center.x + radius, opt.center.y - radius, opt.center.y + radius});
    pts.sort_by_xy();

    std::vector<Complex> vals(pts.size());
    std::vector<double> avals(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Complex v = h.eval(pts.points[i]);
        vals[i] = det * v;
        avals[i] = std::abs(vals[i]);
    }
    const Complex s = pairwise_sum(vals);
    const double as = pairwise_sum(avals);
    const Mat2 B = lat.effective_basis();
    const double cell_diam = B.col0().norm() + B.col1().norm();
    SmoothFn2D env_holder;
    env_holder.envelope = h.envelope;
    const double sum_tail = density * envelope_tail(env_holder, radius - cell_diam) +
                            h.envelope(std::max(0.0, radius - cell_diam));
    return finish_error(h, s, as, static_cast<std::int64_t>(pts.size()), radius, sum_tail, opt);
}

QuadratureResult quadrature_error(const SmoothFn2D& h, const PointSet& ps,
                                  const QuadratureOptions& opt) {
    if (!h.envelope) throw std::invalid_argument("quadrature_error: integrand needs an envelope");
    if (ps.empty()) throw std::invalid_argument("quadrature_error: empty point set");

    double radius = 0.0;
    std::vector<Complex> vals(ps.size());
    std::vector<double> avals(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const Complex v = ps.weights[i] * h.eval(ps.points[i]);
        vals[i] = v;
        avals[i] = std::abs(v);
        radius = std::max(radius, (ps.points[i] - opt.center).norm());
    }
    const Complex s = pairwise_sum(vals);
    const double as = pairwise_sum(avals);
    // Tail: the set is taken as complete out to its own radius; weights are
    // at most 1, and the density proxy is #points / disc area.
    const double density = static_cast<double>(ps.size()) / (kPi * radius * radius + 1.0);
    SmoothFn2D env_holder;
    env_holder.envelope = h.envelope;
    const double sum_tail = std::max(1.0, density) * envelope_tail(env_holder, radius);
    return finish_error(h, s, as, static_cast<std::int64_t>(ps.size()), radius, sum_tail, opt);
}

std::array<double, 3> partial_l1_norms(const SmoothFn2D& h, double abs_tol) {
    if (h.exact_partial_l1) return *h.exact_partial_l1;
    if (!h.deriv_envelope)
        throw std::invalid_argument("partial_l1_norms: integrand needs a derivative envelope");
    // Truncation radius from the derivative envelope.
    double R = 4.0;
    while (R < 512.0) {
        const double tail =
            integrate_1d([&](double r) { return 2.0 * kPi * r * h.deriv_envelope(r); }, R, 4.0 * R + 64.0,
                         1e-16);
        if (tail < abs_tol * 0.1) break;
        R *= 1.5;
    }
    if (R >= 512.0)
        throw std::runtime_error("partial_l1_norms: derivative envelope tail does not converge");
    const auto norm_of = [&](const std::function<Complex(Vec2)>& g) {
        return integrate_2d([&](double x, double y) { return std::abs(g({x, y})); }, -R, R, -R, R,
                            abs_tol);
    };
    return {norm_of(h.d1), norm_of(h.d2), norm_of(h.d12)};
}

double kh_bound(const SmoothFn2D& h, double d_star) {
    if (d_star < 0.0) throw std::invalid_argument("kh_bound: D* must be nonnegative");
    if (d_star == 0.0) return 0.0;
    const auto n = partial_l1_norms(h);
    return d_star * (n[0] + n[1] + n[2]);
}

}  // namespace qmcf
