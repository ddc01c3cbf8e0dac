#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qmcf/discrepancy.hpp"
#include "qmcf/parallel.hpp"

using namespace qmcf;

TEST_CASE("star discrepancy fixed values") {
    CHECK(star_discrepancy_unit(std::vector<Vec2>{{0.0, 0.0}}, 1) == 1.0);
    CHECK(star_discrepancy_unit(std::vector<Vec2>{{0.5, 0.5}}, 1) == 0.75);

    // centered m x m grid, m = 2: 1/m - 1/(4 m^2)
    const std::vector<Vec2> grid4 = {{0.25, 0.25}, {0.25, 0.75}, {0.75, 0.25}, {0.75, 0.75}};
    CHECK(star_discrepancy_unit(grid4, 4) == 0.4375);
}

TEST_CASE("star discrepancy input validation") {
    CHECK_THROWS_AS(star_discrepancy_unit(std::vector<Vec2>{}, 1), std::invalid_argument);
    CHECK_THROWS_AS(star_discrepancy_unit(std::vector<Vec2>{{1.2, 0.5}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(star_discrepancy_unit(std::vector<Vec2>{{0.5, -0.1}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(star_discrepancy_unit(std::vector<Vec2>{{0.5, 0.5}}, 0), std::invalid_argument);
}

TEST_CASE("star discrepancy agrees with the eta-grid oracle on random sets") {
    auto g = oracle::rng(1234);
    std::uniform_int_distribution<std::size_t> count(1, 64);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pts = oracle::random_unit_points(g, count(g));
        const double exact = star_discrepancy_unit(pts, static_cast<std::int64_t>(pts.size()));
        const double brute =
            oracle::brute_star_discrepancy(pts, static_cast<std::int64_t>(pts.size()), 512);
        CHECK(exact >= brute - 1e-12);       // brute is a sampled lower bound
        CHECK(exact - brute <= 2.0 / 512);   // within the grid's volume resolution
    }
}

TEST_CASE("anchored discrepancy fixed cases") {
    const Lattice z = integer_lattice();
    CHECK(anchored_discrepancy(z, {-0.5, -0.5}) == 0.75);  // single centered point
    CHECK(anchored_discrepancy(z, {0.0, 0.0}) == 0.75);    // four closed corners

    // (1/m) Z^2 anchored at cell centers reproduces the centered grid, m = 2
    CHECK(anchored_discrepancy(z.with_scale(0.5), {-0.25, -0.25}) == 0.4375);
}

TEST_CASE("anchored discrepancy hard-errors on an empty unit square") {
    // deep hole of the golden lattice at scale 1
    const Vec2 hole{(1.0 + kInvPhi) / 2.0 - 0.5, (1.0 - kInvPhi) / 2.0 - 0.5};
    CHECK_THROWS_AS(anchored_discrepancy(golden_lattice(), hole), std::runtime_error);
}

TEST_CASE("anchored values lie in [0,1] and are lattice-periodic in rho") {
    const Lattice g = golden_lattice().with_scale(0.25);
    const Mat2 B = g.effective_basis();
    auto rng = oracle::rng(5150);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec2 rho{u(rng), u(rng)};
        const double v = anchored_discrepancy(g, rho);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        const Vec2 shifted = rho + B.apply(1.0, -2.0);
        CHECK(anchored_discrepancy(g, shifted) == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("shift discrepancy of the quarter integer lattice") {
    ShiftOptions opt;
    const DiscrepancyEstimate e = shift_discrepancy(integer_lattice().with_scale(0.25), opt);
    CHECK(e.estimate >= 0.40);
    CHECK(e.estimate <= 0.47);
    // worst anchor pushes a full row and column to the far boundary
    CHECK(e.estimate == doctest::Approx(2.0 * 0.25 - 0.25 * 0.25).epsilon(1e-6));
    CHECK(e.lower_bound <= e.estimate);
    CHECK(e.estimate <= 1.0);

    // dense anchor-grid brute force (resolution 1/256 of the cell) is a lower
    // bound and the estimator must dominate it
    const double dense = oracle::dense_anchor_grid_max(integer_lattice().with_scale(0.25), 256);
    CHECK(dense >= 0.40);
    CHECK(dense <= 0.47);
    CHECK(e.estimate >= dense - 1e-9);
}

TEST_CASE("golden lattice beats the integer lattice at the same scale") {
    ShiftOptions opt;
    opt.grid_n = 48;
    opt.refine_rounds = 2;
    const double dz = shift_discrepancy(integer_lattice().with_scale(0.25), opt).estimate;
    const double dg = shift_discrepancy(golden_lattice().with_scale(0.25), opt).estimate;
    CHECK(dg < dz);
}

TEST_CASE("refinement only improves the estimate") {
    const Lattice g = golden_lattice().with_scale(0.25);
    ShiftOptions o0;
    o0.grid_n = 32;
    o0.refine_rounds = 0;
    ShiftOptions o3 = o0;
    o3.refine_rounds = 3;
    const auto e0 = shift_discrepancy(g, o0);
    const auto e3 = shift_discrepancy(g, o3);
    CHECK(e0.lower_bound <= e3.lower_bound + 1e-15);
    CHECK(e0.estimate <= e3.estimate + 1e-15);
    CHECK(e3.lower_bound <= e3.estimate);
}

TEST_CASE("lower bound is non-decreasing under nested grid refinement") {
    // (i+0.5)/n anchors nest when n grows by odd factors: grid 3n contains
    // grid n, so the max over anchors cannot decrease.
    const Lattice g = golden_lattice().with_scale(0.25);
    double prev = 0.0;
    for (const int n : {8, 24, 72}) {
        ShiftOptions o;
        o.grid_n = n;
        o.refine_rounds = 0;
        const double lb = shift_discrepancy(g, o).lower_bound;
        CHECK(lb >= prev - 1e-15);
        prev = lb;
    }
}

TEST_CASE("dilation discrepancy basics") {
    const Lattice g = golden_lattice();
    ShiftOptions opt;
    opt.grid_n = 32;
    opt.refine_rounds = 2;

    const double single[] = {1.0};
    const auto dd = dilation_discrepancy(g, 0.25, single, opt);
    const auto sd = shift_discrepancy(g.with_scale(0.25), opt);
    CHECK(dd.combined.estimate == sd.estimate);  // singleton sup

    const double taus[] = {0.5, 1.0, 2.0};
    const auto dd3 = dilation_discrepancy(g, 0.25, taus, opt);
    CHECK(dd3.combined.estimate >= sd.estimate);  // sup dominates the member
    CHECK(dd3.per_tau.size() == 3);

    CHECK_THROWS_AS(dilation_discrepancy(g, -0.1, single, opt), std::invalid_argument);
    CHECK_THROWS_AS(dilation_discrepancy(g, 0.25, std::vector<double>{}, opt), std::invalid_argument);
    CHECK_THROWS_AS(dilation_discrepancy(g, 0.25, std::vector<double>{1.0, -2.0}, opt),
                    std::invalid_argument);
}

TEST_CASE("dilation spread of the golden lattice is mild at a = 1/8") {
    ShiftOptions opt;
    opt.grid_n = 32;
    opt.refine_rounds = 2;
    const double taus[] = {0.25, 0.5, 1.0, 2.0, 4.0};
    const auto dd = dilation_discrepancy(golden_lattice(), 0.125, taus, opt);
    double lo = dd.per_tau[0].estimate, hi = lo;
    for (const auto& e : dd.per_tau) {
        lo = std::min(lo, e.estimate);
        hi = std::max(hi, e.estimate);
    }
    CHECK(hi / lo <= 2.0);  // empirical tau-uniformity
    CHECK(dd.argmax_tau >= 0.25);
    CHECK(dd.argmax_tau <= 4.0);
}

TEST_CASE("decay_fit input validation") {
    const double three[] = {0.5, 0.25, 0.125};
    CHECK_THROWS_AS(decay_fit(golden_lattice(), three, {}), std::invalid_argument);
    const double bad[] = {0.5, 0.25, 0.125, 1.5};
    CHECK_THROWS_AS(decay_fit(golden_lattice(), bad, {}), std::invalid_argument);
}

TEST_CASE("shift discrepancy bitwise equal for serial and parallel") {
    ShiftOptions opt;
    opt.grid_n = 24;
    opt.refine_rounds = 1;
    const Lattice g = golden_lattice().with_scale(0.125);
    set_worker_threads(1);
    const auto s = shift_discrepancy(g, opt);
    set_worker_threads(0);
    const auto p = shift_discrepancy(g, opt);
    CHECK(s.estimate == p.estimate);
    CHECK(s.lower_bound == p.lower_bound);
    CHECK(s.argmax_anchor.x == p.argmax_anchor.x);
    CHECK(s.argmax_anchor.y == p.argmax_anchor.y);
}
