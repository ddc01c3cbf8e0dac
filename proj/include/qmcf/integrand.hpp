#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>

#include "qmcf/geometry.hpp"
#include "qmcf/quad.hpp"

namespace qmcf {

// Bivariate complex quadratic exponent: exp(c0 + cx*x + cy*y + cxx*x^2 +
// cyy*y^2 + cxy*x*y) with negative-definite real quadratic part. Closed under
// products, translations and the area-preserving dilation, which keeps every
// shipped integrand (Gaussians and iterated Gabor kernels) in one family.
struct ExpQuadratic {
    Complex c0{0.0, 0.0};
    Complex cx{0.0, 0.0}, cy{0.0, 0.0};
    Complex cxx{0.0, 0.0}, cyy{0.0, 0.0}, cxy{0.0, 0.0};

    Complex exponent(const Vec2& p) const {
        return c0 + cx * p.x + cy * p.y + cxx * (p.x * p.x) + cyy * (p.y * p.y) + cxy * (p.x * p.y);
    }
    Complex eval(const Vec2& p) const { return std::exp(exponent(p)); }

    Complex dx_exponent(const Vec2& p) const { return cx + 2.0 * cxx * p.x + cxy * p.y; }
    Complex dy_exponent(const Vec2& p) const { return cy + 2.0 * cyy * p.y + cxy * p.x; }

    ExpQuadratic operator*(const ExpQuadratic& o) const {
        return {c0 + o.c0, cx + o.cx, cy + o.cy, cxx + o.cxx, cyy + o.cyy, cxy + o.cxy};
    }

    // h_tau(x, y) = h(tau*x, y/tau)
    ExpQuadratic dilated(double tau) const {
        return {c0, cx * tau, cy / tau, cxx * (tau * tau), cyy / (tau * tau), cxy};
    }

    // Envelope parameters: |exp(Q)| = exp(Re Q) <= exp(e0 + e1*r + e2*r^2)
    // with e2 = lambda_max of the real quadratic part (must be < 0).
    struct Envelope {
        double e0, e1, e2;
        double operator()(double r) const { return std::exp(e0 + e1 * r + e2 * r * r); }
    };
    Envelope envelope() const;

    // Radius beyond which the envelope drops below abs_bound.
    double radius_for(double abs_bound) const;

    // Stationary point of Re Q and its value; about the peak the modulus is
    // bounded by exp(re_peak + lambda_max * r^2) with no linear term.
    struct Peak {
        Vec2 location;
        double re_value;
        double lambda_max;  // < 0
    };
    Peak peak() const;
};

// Integrand contract for quadrature over R^2: value, partial derivatives,
// a radial decay envelope with finite integral, and optional exact data.
struct SmoothFn2D {
    std::function<Complex(Vec2)> eval;
    std::function<Complex(Vec2)> d1, d2, d12;
    std::function<double(double)> envelope;        // |eval(p)| <= envelope(|p|)
    std::function<double(double)> deriv_envelope;  // bounds |d1|, |d2|, |d12|
    std::optional<Complex> exact_integral;
    std::optional<std::array<double, 3>> exact_partial_l1;  // ||d1||, ||d2||, ||d12||
    std::optional<ExpQuadratic> exp_form;  // fast lattice-sum path when present
};

// Wraps an exp-quadratic into the full contract (derivatives by chain rule,
// envelope from the quadratic form).
SmoothFn2D make_exp_quadratic_fn(const ExpQuadratic& q);

// exp(-pi * (x^2/sx^2 + y^2/sy^2)); integral sx*sy, partial L1 norms
// (2*sy, 2*sx, 4).
SmoothFn2D gaussian_integrand(double sx = 1.0, double sy = 1.0);

// h_tau(x, y) = h(tau*x, y/tau); the area-preserving coordinate change with
// chain-rule factors tau, 1/tau, 1 on d1, d2, d12. Integral invariant.
SmoothFn2D dilate_fn(const SmoothFn2D& h, double tau);

// Parses "gauss" or "gauss_aniso:sx,sy".
SmoothFn2D integrand_by_name(const std::string& name);

}  // namespace qmcf
