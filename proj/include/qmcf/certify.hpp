#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "qmcf/discrepancy.hpp"
#include "qmcf/gabor.hpp"
#include "qmcf/lattice.hpp"
#include "qmcf/quadrature.hpp"

namespace qmcf {

enum class OmegaProvenance { ClosedForm, NumericBound };

// Frame-bound certificate: epsilon = D* x Omega, bounds (1 - eps, 1 + eps),
// valid iff eps < 1. epsilon uses the conservative end of the discrepancy
// bracket (the refined estimate); the lower_bound-based optimistic value is
// carried alongside.
struct Certificate {
    double epsilon = 0.0;
    double epsilon_optimistic = 0.0;
    double lower_bound_A = 0.0;  // 1 - epsilon
    double upper_bound_B = 0.0;  // 1 + epsilon
    bool valid = false;          // epsilon < 1
    DiscrepancyEstimate discrepancy;
    double omega = 0.0;
    OmegaProvenance omega_provenance = OmegaProvenance::ClosedForm;
    bool dilation_uniform = false;
    double dilation_argmax_tau = 1.0;

    static Certificate from_components(const DiscrepancyEstimate& d, double omega,
                                       OmegaProvenance prov);
};

// Theorem-4 style certificate for the lattice a * Gamma_tau and window w,
// with Omega from the closed form by default.
Certificate certificate(const Lattice& gamma, double a, const GaussianWindow& w,
                        const ShiftOptions& opt = {}, bool omega_closed = true);

// Proposition-4 style certificate: epsilon = (max over tau samples of
// D*_shift(a Gamma_tau)) x Omega(g). Covers every window dilation g_tau with
// the same bounds. Requires a positive empirical admissibility margin; the
// margin is never a proof, so the certificate is labeled "empirically
// admissible".
Certificate dilation_uniform_certificate(const Lattice& gamma, double a, const GaussianWindow& w,
                                         std::span<const double> tau_samples,
                                         const ShiftOptions& opt = {},
                                         std::int64_t admissibility_M = 1000);

struct SchurOptions {
    int nu_grid = 16;        // samples per axis over one fundamental domain
    double tail_tol = 1e-12; // truncation target per inner quadrature error
    double ring_rel_stop = 1e-4;
    // Test seam: overrides the inner error |e(K^{(eta,nu)}, Lambda)|.
    std::function<double(const Vec2& eta, const Vec2& nu)> error_override;
};

struct SchurEpsilon {
    double epsilon = 0.0;  // max over sampled nu of the eta-integral of |e|
    double budget = 0.0;   // truncation + rounding allowance on epsilon
    Vec2 argmax_nu;
    std::vector<double> per_nu;
};

// Direct numeric estimate of the Schur-test epsilon: for each sampled nu the
// quadrature error of the iterated kernel is integrated in eta over a
// midpoint grid whose pitch resolves the lattice-scale oscillation of |e|
// whenever |e| stands above the rounding floor. Values at or below the
// reported budget mean "zero within numerical resolution".
SchurEpsilon schur_epsilon(const Lattice& lat, const GaussianWindow& w,
                           const SchurOptions& opt = {});

struct FrameBoundModel {
    int signal_length = 512;
    double time_span = 18.0;
    double box_halfwidth = 0.0;  // 0 = auto: concentration radius + 5 sigma
    int test_subspace_dim = 6;
    int iterations = 500;
    std::uint64_t seed = 20240;
};

struct EmpiricalBounds {
    double A_emp = 0.0;
    double B_emp = 0.0;
    std::int64_t atoms = 0;
    double boundary_energy = 0.0;  // coefficient energy in the outer shell
    double grid_dt = 0.0;
    // Truncation bias note: the Rayleigh range is over a concentrated test
    // subspace of a sampled model, not all of L2(R); treat +-delta slack.
};

// Empirical frame bounds of S = sum a_lambda <f, psi_lambda> psi_lambda on a
// concentrated Hermite-type test subspace: compresses S to the subspace with
// matrix-free applies and takes extremal Rayleigh quotients via power
// iteration on M and on (c I - M) with c = 2 B_guess.
EmpiricalBounds empirical_frame_bounds(const Lattice& gamma, double a, const GaussianWindow& w,
                                       const FrameBoundModel& model = {});

// One matrix-free frame-operator apply on the sampled model; exposed for the
// self-adjointness test.
struct FrameOperatorModel {
    std::vector<double> grid;   // sample times
    double dt = 0.0;
    PointSet atoms;             // phase-space points with weights
    GaussianWindow window;

    std::vector<Complex> apply(const std::vector<Complex>& f) const;
    Complex inner(const std::vector<Complex>& f, const std::vector<Complex>& g) const;
};
FrameOperatorModel build_frame_operator_model(const Lattice& gamma, double a,
                                              const GaussianWindow& w, const FrameBoundModel& model);

}  // namespace qmcf
