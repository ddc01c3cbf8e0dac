#include "qmcf/integrand.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qmcf {

namespace {
constexpr double kPi = std::numbers::pi;
}

ExpQuadratic::Envelope ExpQuadratic::envelope() const {
    const double axx = cxx.real(), ayy = cyy.real(), axy = 0.5 * cxy.real();
    // lambda_max of [[axx, axy], [axy, ayy]]
    const double tr = axx + ayy;
    const double disc = std::sqrt(std::max(0.0, 0.25 * (axx - ayy) * (axx - ayy) + axy * axy));
    const double lmax = 0.5 * tr + disc;
    if (!(lmax < 0.0))
        throw std::invalid_argument("ExpQuadratic: real quadratic part must be negative definite");
    const double bnorm = std::hypot(cx.real(), cy.real());
    return {c0.real(), bnorm, lmax};
}

double ExpQuadratic::radius_for(double abs_bound) const {
    const Envelope e = envelope();
    const double logb = std::log(abs_bound);
    // solve e0 + e1 r + e2 r^2 = log(abs_bound), taking the larger root
    const double A = e.e2, B = e.e1, C = e.e0 - logb;
    const double disc = B * B - 4.0 * A * C;
    if (disc <= 0.0) return 0.0;  // envelope never exceeds the bound
    return (-B - std::sqrt(disc)) / (2.0 * A);
}

ExpQuadratic::Peak ExpQuadratic::peak() const {
    const double axx = cxx.real(), ayy = cyy.real(), axy = 0.5 * cxy.real();
    const double bx = cx.real(), by = cy.real();
    const double det = 4.0 * axx * ayy - 4.0 * axy * axy;
    if (det <= 0.0)
        throw std::invalid_argument("ExpQuadratic::peak: real quadratic part must be negative definite");
    // solve grad(Re Q) = 0: [2axx 2axy; 2axy 2ayy] p = -b
    const Vec2 p{(-bx * 2.0 * ayy + by * 2.0 * axy) / det, (-by * 2.0 * axx + bx * 2.0 * axy) / det};
    const double re = c0.real() + bx * p.x + by * p.y + axx * p.x * p.x + ayy * p.y * p.y +
                      2.0 * axy * p.x * p.y;
    const double tr = axx + ayy;
    const double disc = std::sqrt(std::max(0.0, 0.25 * (axx - ayy) * (axx - ayy) + axy * axy));
    return {p, re, 0.5 * tr + disc};
}

SmoothFn2D make_exp_quadratic_fn(const ExpQuadratic& q) {
    SmoothFn2D f;
    f.exp_form = q;
    f.eval = [q](Vec2 p) { return q.eval(p); };
    f.d1 = [q](Vec2 p) { return q.dx_exponent(p) * q.eval(p); };
    f.d2 = [q](Vec2 p) { return q.dy_exponent(p) * q.eval(p); };
    f.d12 = [q](Vec2 p) {
        return (q.cxy + q.dx_exponent(p) * q.dy_exponent(p)) * q.eval(p);
    };
    const ExpQuadratic::Envelope env = q.envelope();
    f.envelope = [env](double r) { return env(r); };
    // Polynomial prefactors of the derivatives, bounded linearly in r.
    const double lin = std::abs(q.cx) + std::abs(q.cy) + std::abs(q.cxy);
    const double quad = 2.0 * (std::abs(q.cxx) + std::abs(q.cyy)) + std::abs(q.cxy);
    f.deriv_envelope = [env, lin, quad](double r) {
        const double pref = lin + quad * r;
        return (1.0 + pref) * (1.0 + pref) * env(r);
    };
    return f;
}

SmoothFn2D gaussian_integrand(double sx, double sy) {
    if (!(sx > 0.0) || !(sy > 0.0))
        throw std::invalid_argument("gaussian_integrand: widths must be positive");
    ExpQuadratic q;
    q.cxx = {-kPi / (sx * sx), 0.0};
    q.cyy = {-kPi / (sy * sy), 0.0};
    SmoothFn2D f = make_exp_quadratic_fn(q);
    f.exact_integral = Complex{sx * sy, 0.0};
    f.exact_partial_l1 = std::array<double, 3>{2.0 * sy, 2.0 * sx, 4.0};
    return f;
}

SmoothFn2D dilate_fn(const SmoothFn2D& h, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("dilate_fn: tau must be positive");
    if (tau == 1.0) return h;
    if (h.exp_form) {
        SmoothFn2D f = make_exp_quadratic_fn(h.exp_form->dilated(tau));
        f.exact_integral = h.exact_integral;
        if (h.exact_partial_l1) {
            const auto& n = *h.exact_partial_l1;
            f.exact_partial_l1 = std::array<double, 3>{tau * n[0], n[1] / tau, n[2]};
        }
        return f;
    }
    SmoothFn2D f;
    auto he = h.eval, hd1 = h.d1, hd2 = h.d2, hd12 = h.d12;
    f.eval = [he, tau](Vec2 p) { return he({tau * p.x, p.y / tau}); };
    f.d1 = [hd1, tau](Vec2 p) { return tau * hd1({tau * p.x, p.y / tau}); };
    f.d2 = [hd2, tau](Vec2 p) { return hd2({tau * p.x, p.y / tau}) / tau; };
    f.d12 = [hd12, tau](Vec2 p) { return hd12({tau * p.x, p.y / tau}); };
    const double shrink = std::min(tau, 1.0 / tau);
    auto env = h.envelope;
    f.envelope = [env, shrink](double r) { return env(r * shrink); };
    auto denv = h.deriv_envelope;
    const double grow = std::max(tau, 1.0 / tau);
    f.deriv_envelope = [denv, shrink, grow](double r) { return grow * denv(r * shrink); };
    f.exact_integral = h.exact_integral;
    if (h.exact_partial_l1) {
        const auto& n = *h.exact_partial_l1;
        f.exact_partial_l1 = std::array<double, 3>{tau * n[0], n[1] / tau, n[2]};
    }
    return f;
}

SmoothFn2D integrand_by_name(const std::string& name) {
    if (name == "gauss") return gaussian_integrand();
    const std::string prefix = "gauss_aniso:";
    if (name.rfind(prefix, 0) == 0) {
        const std::string args = name.substr(prefix.size());
        const auto comma = args.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("integrand_by_name: expected gauss_aniso:sx,sy");
        const double sx = std::stod(args.substr(0, comma));
        const double sy = std::stod(args.substr(comma + 1));
        return gaussian_integrand(sx, sy);
    }
    throw std::invalid_argument("integrand_by_name: unknown integrand '" + name + "'");
}

}  // namespace qmcf
