#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmcf/geometry.hpp"
#include "qmcf/pointset.hpp"

namespace qmcf {

// Planar lattice a * Gamma_tau, where Gamma = basis * Z^2 and the dilation
// Gamma_tau = { (tau*g1, g2/tau) } is area-preserving. Points are always
// generated from integer coefficients, never by accumulating floating steps.
//
// basis_lo carries second limbs for irrational basis entries (set by
// golden_lattice() and by symbolic tokens in config files); only the
// admissibility scan consumes them.
struct Lattice {
    Mat2 basis;        // columns are the generators of Gamma
    double a = 1.0;    // scale
    double tau = 1.0;  // dilation
    Mat2 basis_lo{0.0, 0.0, 0.0, 0.0};

    // Basis of the effective lattice a * Gamma_tau.
    Mat2 effective_basis() const {
        return {a * tau * basis.a, a * tau * basis.b, a / tau * basis.c, a / tau * basis.d};
    }
    double det_effective() const { return std::abs(effective_basis().det()); }

    Vec2 point(std::int64_t m, std::int64_t n) const {
        return effective_basis().apply(static_cast<double>(m), static_cast<double>(n));
    }

    Lattice with_scale(double a_) const {
        Lattice l = *this;
        l.a = a_;
        return l;
    }
    Lattice with_tau(double tau_) const {
        Lattice l = *this;
        l.tau = tau_;
        return l;
    }
};

Lattice make_lattice(const Mat2& basis, double a, double tau);

// The admissible lattice from the golden-ratio example:
// basis [[1, 1/phi], [-1/phi, 1]], a = tau = 1.
Lattice golden_lattice();

// Z^2 with a = tau = 1.
Lattice integer_lattice();

// All lattice points inside the closed box, boundary included
// (membership tolerance kBoxTol).
PointSet enumerate_in_box(const Lattice& lat, const Rect& box);
std::int64_t count_in_box(const Lattice& lat, const Rect& box);

struct AdmissibilityMargin {
    double margin = 0.0;  // min over 0 < |m|,|n| <= M of |g1 * g2|
    std::int64_t coeff_bound = 0;
    std::int64_t argmin_m = 0;
    std::int64_t argmin_n = 0;
};

// Empirical admissibility margin of the effective lattice: an upper bound on
// inf |g1*g2| obtained from the finite coefficient box |m|,|n| <= M. Never a
// proof of admissibility; monotonically non-increasing in M. Near-minimal
// products are re-evaluated in compensated (double-double) arithmetic so the
// reported margin is accurate to ~1e-12 even for large coefficients.
AdmissibilityMargin admissibility_margin(const Lattice& lat, std::int64_t M);

// Exact minimum of N_rho = #(Lambda cap ([0,1]^2 + rho)) over all anchors,
// computed on the event arrangement of one padded fundamental domain.
// A result of 0 means the lattice violates the unit-square covering
// assumption (some closed unit square is empty).
struct CoveringCheck {
    std::int64_t min_count = 0;
    Vec2 argmin_rho;
};
CoveringCheck min_box_count(const Lattice& lat);

// Parses the lattice config format:
//   basis = [[r, s], [u, v]]
//   a = <float>
//   tau = <float>
// Entries are decimal literals or the tokens phi, inv_phi, sqrt2 (optionally
// negated), expanded to 17 significant digits.
Lattice parse_lattice_config(const std::string& text);
Lattice load_lattice_config(const std::string& path);

}  // namespace qmcf
