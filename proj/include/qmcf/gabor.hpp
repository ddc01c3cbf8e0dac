#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qmcf/geometry.hpp"
#include "qmcf/integrand.hpp"

namespace qmcf {

// L2-normalized Gaussian window g_sigma(t) = sigma^{-1/2} exp(-pi t^2 /
// (2 sigma^2)) with dilation g_tau(t) = tau^{-1/2} g(t/tau). The dilated
// window is again a normalized Gaussian with width sigma * tau.
struct GaussianWindow {
    double sigma = 1.0;
    double tau = 1.0;

    GaussianWindow() = default;
    GaussianWindow(double sigma_, double tau_ = 1.0);

    double effective_sigma() const { return sigma * tau; }
    double operator()(double t) const;

    // Radius where the window drops below 1e-12 of its peak.
    double support_radius() const;
    // Frequency radius where the window transform drops below 1e-12 of peak.
    double band_radius() const;
};

// Closed-form ambiguity V_g g(x, w) = exp(-pi x^2/(4 s^2) - pi s^2 w^2 -
// i pi x w) for the effective width s. The phase factor is pinned by the
// STFT definition V_g f(x, w) = int f(t) conj(g(t-x)) exp(-2 pi i t w) dt.
Complex ambiguity(const GaussianWindow& w, const Vec2& eta);

// Reproducing kernel R(eta, nu) = <pi(nu) g, pi(eta) g>
//                  = exp(-2 pi i nu_x (eta_y - nu_y)) * V_g g(eta - nu).
Complex kernel_R(const GaussianWindow& w, const Vec2& eta, const Vec2& nu);

// Iterated kernel K^{(eta,nu)}(rho) = R(eta, rho) R(rho, nu) as a function of
// rho, exposed through the SmoothFn2D contract. Its exact integral is
// R(eta, nu) by the reproducing identity.
SmoothFn2D iterated_kernel(const GaussianWindow& w, const Vec2& eta, const Vec2& nu);
ExpQuadratic iterated_kernel_exponent(const GaussianWindow& w, const Vec2& eta, const Vec2& nu);

// Closed form of the oscillation functional for the Gaussian frame:
// Omega(G_sigma) = 4 pi (1/(sqrt2 sigma) + sqrt2 sigma) + 4 pi^2.
// Minimal at sigma0 = 1/sqrt2 and invariant under sigma -> 1/(2 sigma).
double omega_gaussian_closed(double sigma);

// Golden-section minimizer of omega_gaussian_closed over [lo, hi].
double omega_minimizer(double lo = 0.1, double hi = 10.0, double tol = 1e-8);

struct OmegaNumeric {
    double bound = 0.0;  // 2 [ n_g n_D + n_g n_Z + n_g n_ZD + n_D n_Z ]
    double norm_g = 0.0;    // ||V_g g||_1       (analytically 2)
    double norm_dg = 0.0;   // ||V_g Dg||_1      (analytically pi / sigma)
    double norm_zg = 0.0;   // ||V_g Zg||_1      (analytically 2 pi sigma)
    double norm_zdg = 0.0;  // ||V_g ZDg||_1
    double closed = 0.0;
    double deviation_from_closed = 0.0;  // relative
    bool large_deviation = false;        // > 2% flag; see README on exactness
};

// Numerically integrated upper-bound combination for the oscillation
// functional of the short-time Fourier transform with Gaussian window.
OmegaNumeric omega_numeric(const GaussianWindow& w, double abs_tol = 1e-8);

// Uniformly sampled signal on t0 + j*dt.
struct SampledSignal {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<Complex> samples;

    double t(std::size_t j) const { return t0 + static_cast<double>(j) * dt; }
    double norm2() const;  // dt * sum |f|^2
};

struct StftResult {
    std::vector<double> times;
    std::vector<double> freqs;
    std::vector<std::vector<Complex>> values;  // [time][freq]

    // (sum |V|^2 dx dw) / ||f||^2 with the grid cell measures.
    double parseval_ratio(double signal_norm2) const;
};

// Discrete STFT of a sampled signal over the requested time/frequency grid.
// Used to validate the closed forms, not the other way around. Throws when
// the sample rate cannot represent the requested frequencies.
StftResult stft_numeric(const SampledSignal& f, const GaussianWindow& w,
                        double time_step, double freq_step, double time_halfspan,
                        double freq_halfspan);

// Direct numeric evaluation of the STFT definition at one point by adaptive
// integration; the oracle for the closed-form ambiguity.
Complex stft_integral_oracle(const GaussianWindow& w, const Vec2& eta, double abs_tol = 1e-10);

// Signal CSV (t, re, im) and STFT matrix CSV with coordinate header row and
// column.
void write_signal_csv(const std::string& path, const SampledSignal& f);
SampledSignal read_signal_csv(const std::string& path);
void write_stft_csv(const std::string& path, const StftResult& m);

}  // namespace qmcf
