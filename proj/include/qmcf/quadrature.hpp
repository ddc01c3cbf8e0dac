#pragma once

#include <complex>
#include <cstdint>
#include <optional>

#include "qmcf/integrand.hpp"
#include "qmcf/lattice.hpp"
#include "qmcf/pointset.hpp"

namespace qmcf {

// N_rho = #(Lambda cap ([0,1]^2 + rho)), closed-box convention. A return of 0
// signals a covering violation to the caller; it does not throw.
std::int64_t box_count(const Lattice& lat, const Vec2& rho);

// Quadrature weights a_lambda = integral of 1/N_rho over the anchors whose
// unit square contains lambda. The rectangle arrangement induced by nearby
// points is integrated exactly by a sweep; no Monte Carlo.
//
// Lattice entry point: validates the unit-square covering assumption (throws
// on violation, since the det shortcut of the lattice case needs it) and
// returns det(Lambda) for every point in the region.
PointSet qmc_weights(const Lattice& lat, const Rect& region);

// Point-set entry point: runs the exact sweep for every point of `core`
// using `ambient` as the surrounding configuration. `ambient` must contain
// every point within L-infinity distance 1 of any core point.
PointSet qmc_weights_sweep(const PointSet& ambient, const Rect& core);

// Exact sweep for one point (index into ambient.points).
double weight_sweep_at(const PointSet& ambient, std::size_t index);

struct QuadratureResult {
    Complex value{0.0, 0.0};   // e(h, Lambda) = integral - weighted sum
    double tail_budget = 0.0;  // envelope bound on truncated sum + integral tails
    double rounding_budget = 0.0;
    std::int64_t points_used = 0;
    double truncation_radius = 0.0;

    double total_budget() const { return tail_budget + rounding_budget; }
};

struct QuadratureOptions {
    double tol = 1e-12;               // target for the combined truncation budget
    std::optional<double> radius;     // override the envelope-derived radius
    Vec2 center{0.0, 0.0};            // truncation disc center
};

// Weighted quadrature error for a lattice (weights det(Lambda), Remark-2
// rule; covering is not required for the rule itself). The sum is truncated
// at an envelope-derived radius and both truncation tails are budgeted.
QuadratureResult quadrature_error(const SmoothFn2D& h, const Lattice& lat,
                                  const QuadratureOptions& opt = {});

// Same for an explicit weighted point set (sums all given points whose
// envelope value is relevant; the tail beyond the supplied set is budgeted
// with the envelope as if the set were complete up to its radius).
QuadratureResult quadrature_error(const SmoothFn2D& h, const PointSet& ps,
                                  const QuadratureOptions& opt = {});

// Right-hand side of the global Koksma-Hlawka inequality:
// D_star * (||d1 h||_1 + ||d2 h||_1 + ||d12 h||_1). Uses exact_partial_l1
// when present, else adaptive integration under the derivative envelope.
double kh_bound(const SmoothFn2D& h, double d_star);

// L1 norms of (d1, d2, d12); numeric fallback of kh_bound, exposed for tests.
std::array<double, 3> partial_l1_norms(const SmoothFn2D& h, double abs_tol = 1e-10);

// Fast deterministic lattice sum of an exp-quadratic over points within
// `radius` of `center`: returns (plain sum, sum of moduli, point count).
// Row-by-row geometric recurrences; fixed traversal order.
struct LatticeSum {
    Complex sum{0.0, 0.0};
    double abs_sum = 0.0;
    std::int64_t points = 0;
};
LatticeSum sum_exp_quadratic(const ExpQuadratic& q, const Lattice& lat, const Vec2& center,
                             double radius);

}  // namespace qmcf
