#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qmcf/geometry.hpp"
#include "qmcf/lattice.hpp"
#include "qmcf/pointset.hpp"

namespace qmcf {

// Result of a sampled supremum: every evaluated anchor gives an exact local
// discrepancy, so lower_bound and estimate are both certified lower bounds on
// the true sup; estimate is the max after local refinement.
struct DiscrepancyEstimate {
    double lower_bound = 0.0;  // max over the initial anchor grid
    double estimate = 0.0;     // max after refinement + event straddling
    double grid_resolution = 0.0;
    std::int64_t anchors_evaluated = 0;
    Vec2 argmax_anchor;

    // Heuristic inflation for use as an upper proxy in inequality checks:
    // the refined estimate plus the larger of the refinement gain and 5%.
    double upper_proxy() const {
        return estimate + std::max(estimate - lower_bound, 0.05 * estimate);
    }
};

// Exact star discrepancy of P in the closed unit square with external
// normalizer N: sup over eta of |#(P cap [0,eta]) / N - eta1*eta2|, taking
// both the closed and open counting envelopes at every critical corner.
// O(#P log #P + mx*my) with mx, my the distinct coordinate counts.
double star_discrepancy_unit(std::span<const Vec2> pts, std::int64_t normalizer);
double star_discrepancy_unit(const PointSet& ps);

// Local star discrepancy anchored at rho: translates Lambda cap (rho+[0,1]^2)
// by -rho and delegates to star_discrepancy_unit with normalizer N_rho.
// Throws if the anchored unit square is empty (covering violation).
double anchored_discrepancy(const Lattice& lat, const Vec2& rho);
double anchored_discrepancy(const PointSet& ps, const Vec2& rho);

struct ShiftOptions {
    int grid_n = 64;            // anchors per axis over one fundamental domain
    int refine_rounds = 3;      // local rounds, step shrinks 4x each
    int top_candidates = 8;     // refinement seeds per round
    double straddle_delta = 1e-9;  // offset for event-straddling anchors
};

// Sampled sup over anchors of the local discrepancy, restricted to one
// fundamental domain (D*_rho is Lambda-periodic in rho). The anchor set is a
// uniform grid plus anchors straddling point entry/exit events near the best
// candidates. Deterministic for any worker count.
DiscrepancyEstimate shift_discrepancy(const Lattice& lat, const ShiftOptions& opt = {});

struct DilationDiscrepancy {
    DiscrepancyEstimate combined;  // max over the tau samples
    double argmax_tau = 1.0;
    std::vector<double> tau_samples;
    std::vector<DiscrepancyEstimate> per_tau;
};

// Sampled sup over tau of shift_discrepancy(a * Gamma_tau); a certified
// lower bound on D*_dil(a * Gamma).
DilationDiscrepancy dilation_discrepancy(const Lattice& gamma, double a,
                                         std::span<const double> tau_samples,
                                         const ShiftOptions& opt = {});

struct DecayRow {
    double a = 0.0;
    DiscrepancyEstimate est;
};

struct DecayFit {
    double slope = 0.0;  // least-squares slope of log D* against log a
    double C_hat = 0.0;  // max over a of D* / (a^2 ln(2 + 1/a))
    std::vector<DecayRow> table;
};

// Discrepancy decay study over a list of scales (>= 4 entries in (0,1)).
DecayFit decay_fit(const Lattice& gamma, std::span<const double> a_list,
                   const ShiftOptions& opt = {});

}  // namespace qmcf
