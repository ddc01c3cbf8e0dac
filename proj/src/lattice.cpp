#include "qmcf/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qmcf/dd.hpp"
#include "qmcf/parallel.hpp"

namespace qmcf {

namespace {

struct Mat2DD {
    DD a, b, c, d;
};

// Effective basis in double-double, including the basis_lo limbs; this keeps
// deep-coefficient admissibility products accurate to ~1e-25.
Mat2DD effective_basis_dd(const Lattice& lat) {
    const DD sx = dd_mul(DD{lat.a}, DD{lat.tau});
    const DD sy = dd_mul(DD{lat.a}, DD{1.0 / lat.tau});
    // rounding of 1/tau is part of the lattice definition for tau != 1
    return {dd_mul(sx, DD{lat.basis.a, lat.basis_lo.a}), dd_mul(sx, DD{lat.basis.b, lat.basis_lo.b}),
            dd_mul(sy, DD{lat.basis.c, lat.basis_lo.c}), dd_mul(sy, DD{lat.basis.d, lat.basis_lo.d})};
}

double product_dd(const Mat2DD& B, std::int64_t m, std::int64_t n) {
    // g1 = m*B.a + n*B.b, g2 = m*B.c + n*B.d, returns |g1*g2| compensated.
    const DD g1 = dd_add(dd_mul_int(B.a, m), dd_mul_int(B.b, n));
    const DD g2 = dd_add(dd_mul_int(B.c, m), dd_mul_int(B.d, n));
    return std::abs(dd_mul(g1, g2).to_double());
}

// (sqrt(5) - 1) / 2 in double-double.
DD inv_phi_dd() {
    const DD s5 = dd_sqrt(5.0);
    const DD num = dd_add(s5, DD{-1.0});
    return {num.hi * 0.5, num.lo * 0.5};
}

}  // namespace

Lattice make_lattice(const Mat2& basis, double a, double tau) {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("make_lattice: a must be positive");
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw std::invalid_argument("make_lattice: tau must be positive");
    if (std::abs(basis.det()) <= 0.0 || !std::isfinite(basis.det()))
        throw std::invalid_argument("make_lattice: basis must be full rank");
    return {basis, a, tau};
}

Lattice golden_lattice() {
    const DD ip = inv_phi_dd();
    Lattice l{{1.0, ip.hi, -ip.hi, 1.0}, 1.0, 1.0};
    l.basis_lo = {0.0, ip.lo, -ip.lo, 0.0};
    return l;
}

Lattice integer_lattice() { return {{1.0, 0.0, 0.0, 1.0}, 1.0, 1.0}; }

namespace {

struct CoeffBox {
    std::int64_t m0, m1, n0, n1;
};

// Integer coefficient ranges whose lattice points can intersect the box:
// image of the box corners under the inverse basis, padded by one.
CoeffBox coefficient_ranges(const Lattice& lat, const Rect& box) {
    const Mat2 inv = lat.effective_basis().inverse();
    double mlo = std::numeric_limits<double>::infinity(), mhi = -mlo;
    double nlo = mlo, nhi = -mlo;
    const Vec2 corners[4] = {{box.x0, box.y0}, {box.x1, box.y0}, {box.x0, box.y1}, {box.x1, box.y1}};
    for (const Vec2& c : corners) {
        const Vec2 mn = inv.apply(c);
        mlo = std::min(mlo, mn.x);
        mhi = std::max(mhi, mn.x);
        nlo = std::min(nlo, mn.y);
        nhi = std::max(nhi, mn.y);
    }
    const auto lo = [](double v) { return static_cast<std::int64_t>(std::floor(v)) - 1; };
    const auto hi = [](double v) { return static_cast<std::int64_t>(std::ceil(v)) + 1; };
    CoeffBox cb{lo(mlo), hi(mhi), lo(nlo), hi(nhi)};
    const double cells = static_cast<double>(cb.m1 - cb.m0 + 1) * static_cast<double>(cb.n1 - cb.n0 + 1);
    if (cells > 5e8) throw std::invalid_argument("enumerate_in_box: box too large for this lattice");
    return cb;
}

void check_box(const Rect& box) {
    if (!(box.width() > 0.0) || !(box.height() > 0.0) || !std::isfinite(box.area()))
        throw std::invalid_argument("enumerate_in_box: degenerate box");
}

}  // namespace

PointSet enumerate_in_box(const Lattice& lat, const Rect& box) {
    check_box(box);
    const CoeffBox cb = coefficient_ranges(lat, box);
    const Mat2 B = lat.effective_basis();
    PointSet ps;
    for (std::int64_t m = cb.m0; m <= cb.m1; ++m) {
        for (std::int64_t n = cb.n0; n <= cb.n1; ++n) {
            const Vec2 p = B.apply(static_cast<double>(m), static_cast<double>(n));
            if (box.contains(p)) ps.push_back(p);
        }
    }
    return ps;
}

std::int64_t count_in_box(const Lattice& lat, const Rect& box) {
    check_box(box);
    const CoeffBox cb = coefficient_ranges(lat, box);
    const Mat2 B = lat.effective_basis();
    std::int64_t cnt = 0;
    for (std::int64_t m = cb.m0; m <= cb.m1; ++m)
        for (std::int64_t n = cb.n0; n <= cb.n1; ++n)
            if (box.contains(B.apply(static_cast<double>(m), static_cast<double>(n)))) ++cnt;
    return cnt;
}

AdmissibilityMargin admissibility_margin(const Lattice& lat, std::int64_t M) {
    if (M < 1) throw std::invalid_argument("admissibility_margin: M must be >= 1");
    const Mat2 B = lat.effective_basis();

    struct RowResult {
        double min_val = std::numeric_limits<double>::infinity();
        std::vector<std::pair<std::int64_t, std::int64_t>> candidates;
    };
    // Plain-double scan per n-row with a safety band; candidates near the
    // running minimum get re-evaluated in compensated arithmetic below.
    const double band = 1e-6 * (std::abs(B.a) + std::abs(B.b)) * (std::abs(B.c) + std::abs(B.d)) *
                            static_cast<double>(M) +
                        1e-9;
    auto rows = parallel_map<RowResult>(static_cast<std::size_t>(2 * M + 1), [&](std::size_t ri) {
        const std::int64_t n = static_cast<std::int64_t>(ri) - M;
        RowResult rr;
        const double g1n = B.b * static_cast<double>(n);
        const double g2n = B.d * static_cast<double>(n);
        double g1 = g1n + B.a * static_cast<double>(-M);
        double g2 = g2n + B.c * static_cast<double>(-M);
        for (std::int64_t m = -M; m <= M; ++m, g1 += B.a, g2 += B.c) {
            if (m == 0 && n == 0) continue;
            const double v = std::abs(g1 * g2);
            if (v <= rr.min_val + band) {
                if (v < rr.min_val) rr.min_val = v;
                if (rr.candidates.size() >= 4096) {
                    // Drop entries that can no longer be within band of the
                    // row minimum (it only decreases, so this is safe).
                    std::erase_if(rr.candidates, [&](const auto& c) {
                        const double w = std::abs((B.a * c.first + B.b * c.second) *
                                                  (B.c * c.first + B.d * c.second));
                        return w > rr.min_val + band;
                    });
                }
                if (rr.candidates.size() < 4096) rr.candidates.emplace_back(m, n);
            }
        }
        return rr;
    });

    double plain_min = std::numeric_limits<double>::infinity();
    for (const auto& rr : rows) plain_min = std::min(plain_min, rr.min_val);

    const Mat2DD Bdd = effective_basis_dd(lat);
    AdmissibilityMargin out;
    out.coeff_bound = M;
    out.margin = std::numeric_limits<double>::infinity();
    for (const auto& rr : rows) {
        for (const auto& [m, n] : rr.candidates) {
            const double plain = std::abs((B.a * m + B.b * n) * (B.c * m + B.d * n));
            if (plain > plain_min + band) continue;
            const double v = product_dd(Bdd, m, n);
            if (v < out.margin ||
                (v == out.margin && std::make_pair(m, n) < std::make_pair(out.argmin_m, out.argmin_n))) {
                out.margin = v;
                out.argmin_m = m;
                out.argmin_n = n;
            }
        }
    }
    return out;
}

CoveringCheck min_box_count(const Lattice& lat) {
    // N_rho is piecewise constant on the arrangement with breakpoints at
    // lambda_i and lambda_i - 1 per axis; scanning cell centers over one
    // padded fundamental domain gives the exact global minimum.
    const Mat2 B = lat.effective_basis();
    const Vec2 b0 = B.col0(), b1 = B.col1();
    double xlo = std::min({0.0, b0.x, b1.x, b0.x + b1.x});
    double xhi = std::max({0.0, b0.x, b1.x, b0.x + b1.x});
    double ylo = std::min({0.0, b0.y, b1.y, b0.y + b1.y});
    double yhi = std::max({0.0, b0.y, b1.y, b0.y + b1.y});
    const Rect anchor_box{xlo, xhi, ylo, yhi};

    const Rect cloud_box = Rect{xlo, xhi + 1.0, ylo, yhi + 1.0}.inflated(2 * kBoxTol + 1e-9);
    PointSet cloud = enumerate_in_box(lat, cloud_box);
    cloud.sort_by_xy();

    std::vector<double> xev = {anchor_box.x0, anchor_box.x1};
    std::vector<double> yev = {anchor_box.y0, anchor_box.y1};
    for (const Vec2& p : cloud.points) {
        for (const double e : {p.x, p.x - 1.0})
            if (e > anchor_box.x0 && e < anchor_box.x1) xev.push_back(e);
        for (const double e : {p.y, p.y - 1.0})
            if (e > anchor_box.y0 && e < anchor_box.y1) yev.push_back(e);
    }
    std::sort(xev.begin(), xev.end());
    xev.erase(std::unique(xev.begin(), xev.end()), xev.end());
    std::sort(yev.begin(), yev.end());
    yev.erase(std::unique(yev.begin(), yev.end()), yev.end());

    CoveringCheck out;
    out.min_count = std::numeric_limits<std::int64_t>::max();
    std::vector<double> strip_y;
    for (std::size_t i = 0; i + 1 < xev.size(); ++i) {
        if (!(xev[i + 1] > xev[i])) continue;
        const double cx = 0.5 * (xev[i] + xev[i + 1]);
        strip_y.clear();
        const auto lo = std::lower_bound(cloud.points.begin(), cloud.points.end(), cx,
                                         [](const Vec2& p, double v) { return p.x < v; });
        for (auto it = lo; it != cloud.points.end() && it->x <= cx + 1.0; ++it)
            strip_y.push_back(it->y);
        std::sort(strip_y.begin(), strip_y.end());
        for (std::size_t j = 0; j + 1 < yev.size(); ++j) {
            if (!(yev[j + 1] > yev[j])) continue;
            const double cy = 0.5 * (yev[j] + yev[j + 1]);
            const auto ylo = std::lower_bound(strip_y.begin(), strip_y.end(), cy);
            const auto yhi = std::upper_bound(strip_y.begin(), strip_y.end(), cy + 1.0);
            const std::int64_t cnt = yhi - ylo;
            if (cnt < out.min_count) {
                out.min_count = cnt;
                out.argmin_rho = {cx, cy};
            }
        }
    }
    if (out.min_count == std::numeric_limits<std::int64_t>::max()) out.min_count = 0;
    return out;
}

namespace {

DD parse_entry_dd(std::string tok) {
    auto trim = [](std::string& s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    };
    trim(tok);
    double sign = 1.0;
    if (!tok.empty() && (tok[0] == '-' || tok[0] == '+')) {
        if (tok[0] == '-') sign = -1.0;
        tok.erase(tok.begin());
        trim(tok);
    }
    if (tok == "phi") {
        const DD ip = inv_phi_dd();
        const DD phi = dd_add(ip, DD{1.0});
        return {sign * phi.hi, sign * phi.lo};
    }
    if (tok == "inv_phi") {
        const DD ip = inv_phi_dd();
        return {sign * ip.hi, sign * ip.lo};
    }
    if (tok == "sqrt2") {
        const DD s2 = dd_sqrt(2.0);
        return {sign * s2.hi, sign * s2.lo};
    }
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("lattice config: bad numeric entry '" + tok + "'");
    return {sign * v, 0.0};
}

double parse_entry(const std::string& tok) { return parse_entry_dd(tok).hi; }

}  // namespace

Lattice parse_lattice_config(const std::string& text) {
    Mat2 basis;
    Mat2 basis_lo{0.0, 0.0, 0.0, 0.0};
    bool have_basis = false;
    double a = 1.0, tau = 1.0;

    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        key.erase(std::remove_if(key.begin(), key.end(),
                                 [](unsigned char c) { return std::isspace(c); }),
                  key.end());
        if (key == "basis") {
            // expected shape: [[r, s], [u, v]]
            std::vector<DD> entries;
            std::string cur;
            for (char c : val) {
                if (c == '[' || c == ']' || c == ',') {
                    if (!cur.empty() && cur.find_first_not_of(" \t") != std::string::npos)
                        entries.push_back(parse_entry_dd(cur));
                    cur.clear();
                } else {
                    cur.push_back(c);
                }
            }
            if (!cur.empty() && cur.find_first_not_of(" \t") != std::string::npos)
                entries.push_back(parse_entry_dd(cur));
            if (entries.size() != 4)
                throw std::invalid_argument("lattice config: basis needs 4 entries");
            // row-major [[r, s], [u, v]] -> columns (r, u), (s, v)
            basis = {entries[0].hi, entries[1].hi, entries[2].hi, entries[3].hi};
            basis_lo = {entries[0].lo, entries[1].lo, entries[2].lo, entries[3].lo};
            have_basis = true;
        } else if (key == "a") {
            a = parse_entry(val);
        } else if (key == "tau") {
            tau = parse_entry(val);
        } else {
            throw std::invalid_argument("lattice config: unknown key '" + key + "'");
        }
    }
    if (!have_basis) throw std::invalid_argument("lattice config: missing basis");
    Lattice l = make_lattice(basis, a, tau);
    l.basis_lo = basis_lo;
    return l;
}

Lattice load_lattice_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_lattice_config: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_lattice_config(ss.str());
}

}  // namespace qmcf
