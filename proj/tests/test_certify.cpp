#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qmcf/certify.hpp"
#include "qmcf/parallel.hpp"

using namespace qmcf;

namespace {
constexpr double kOmega0 = 64.611158833075777;  // 8 pi + 4 pi^2
}

TEST_CASE("certificate arithmetic from components") {
    DiscrepancyEstimate d;
    d.lower_bound = 0.009;
    d.estimate = 0.01;
    const Certificate c = Certificate::from_components(d, kOmega0, OmegaProvenance::ClosedForm);
    CHECK(c.epsilon == doctest::Approx(0.64611158833).epsilon(1e-10));
    CHECK(c.epsilon_optimistic == doctest::Approx(0.009 * kOmega0).epsilon(1e-12));
    CHECK(c.valid);
    // B - 1 = 1 - A = epsilon exactly
    CHECK(c.upper_bound_B - 1.0 == c.epsilon);
    CHECK(1.0 - c.lower_bound_A == c.epsilon);

    DiscrepancyEstimate big;
    big.lower_bound = big.estimate = 0.02;
    const Certificate inv = Certificate::from_components(big, kOmega0, OmegaProvenance::ClosedForm);
    CHECK_FALSE(inv.valid);  // epsilon = 1.29 >= 1, reported but non-certifying
    CHECK(inv.epsilon > 1.0);
    CHECK(inv.lower_bound_A < 0.0);
}

TEST_CASE("certificate runs the discrepancy estimator") {
    ShiftOptions opt;
    opt.grid_n = 24;
    opt.refine_rounds = 1;
    const Certificate c = certificate(golden_lattice(), 0.25, GaussianWindow(0.7071067811865476), opt);
    CHECK(c.omega == doctest::Approx(kOmega0).epsilon(1e-12));
    CHECK(c.epsilon == doctest::Approx(c.discrepancy.estimate * kOmega0).epsilon(1e-12));
    CHECK_FALSE(c.valid);  // D* ~ 0.24 at a = 1/4, far above 1/Omega
    CHECK(c.epsilon_optimistic <= c.epsilon);
}

TEST_CASE("dilation-uniform certificate refuses non-admissible lattices") {
    const double taus[] = {0.5, 1.0, 2.0};
    CHECK_THROWS_AS(
        dilation_uniform_certificate(integer_lattice(), 0.25, GaussianWindow(1.0), taus),
        std::runtime_error);
}

TEST_CASE("dilation-uniform epsilon dominates the single-tau certificate") {
    ShiftOptions opt;
    opt.grid_n = 24;
    opt.refine_rounds = 1;
    const GaussianWindow w(0.7071067811865476);
    const double taus[] = {0.25, 0.5, 1.0, 2.0, 4.0};
    const Certificate dil = dilation_uniform_certificate(golden_lattice(), 0.125, w, taus, opt, 200);
    const Certificate single = certificate(golden_lattice(), 0.125, w, opt);
    CHECK(dil.dilation_uniform);
    CHECK(dil.epsilon >= single.epsilon - 1e-12);
    // the certificate depends only on the base window, not on its dilation
    const Certificate dil2 =
        dilation_uniform_certificate(golden_lattice(), 0.125, GaussianWindow(w.sigma, 2.0), taus,
                                     opt, 200);
    CHECK(dil2.epsilon == dil.epsilon);
}

TEST_CASE("schur epsilon degenerate check: zero error integrand gives zero") {
    SchurOptions so;
    so.nu_grid = 2;
    so.error_override = [](const Vec2&, const Vec2&) { return 0.0; };
    const SchurEpsilon se = schur_epsilon(golden_lattice().with_scale(0.25), GaussianWindow(1.0), so);
    CHECK(se.epsilon == 0.0);
}

TEST_CASE("schur epsilon is bounded by the KH route") {
    const GaussianWindow w(0.7071067811865476);
    const Lattice g = golden_lattice().with_scale(0.25);
    SchurOptions so;
    so.nu_grid = 4;
    const SchurEpsilon se = schur_epsilon(g, w, so);

    ShiftOptions opt;
    opt.grid_n = 32;
    opt.refine_rounds = 2;
    const double d_star = shift_discrepancy(g, opt).upper_proxy();
    const double omega_num = omega_numeric(w).bound;
    CHECK(se.epsilon <= d_star * omega_num + se.budget);
    CHECK(se.epsilon >= 0.0);
}

TEST_CASE("schur epsilon decreases along the density ladder within budgets") {
    const GaussianWindow w(0.7071067811865476);
    SchurOptions so;
    so.nu_grid = 4;
    double prev = -1.0, prev_budget = 0.0;
    for (const double a : {0.25, 0.125, 0.0625}) {
        const SchurEpsilon se = schur_epsilon(golden_lattice().with_scale(a), w, so);
        if (prev >= 0.0) CHECK(se.epsilon <= prev + prev_budget + se.budget);
        prev = se.epsilon;
        prev_budget = se.budget;
    }
}

TEST_CASE("frame operator is self-adjoint on the sampled model") {
    FrameBoundModel model;
    model.signal_length = 560;
    model.time_span = 20.0;
    model.test_subspace_dim = 4;
    const FrameOperatorModel fo =
        build_frame_operator_model(golden_lattice(), 0.25, GaussianWindow(0.7071067811865476), model);

    auto rng = oracle::rng(101);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Complex> f(fo.grid.size()), h(fo.grid.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double t = fo.grid[j];
        const double conc = std::exp(-0.5 * t * t);
        f[j] = Complex{u(rng), u(rng)} * conc;
        h[j] = Complex{u(rng), u(rng)} * conc;
    }
    const auto Sf = fo.apply(f);
    const auto Sh = fo.apply(h);
    const Complex lhs = fo.inner(Sf, h);
    const Complex rhs = fo.inner(f, Sh);
    CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(lhs)));
}

TEST_CASE("empirical bounds approach the Parseval limit for dense sampling") {
    FrameBoundModel model;
    const EmpiricalBounds eb =
        empirical_frame_bounds(golden_lattice(), 0.0625, GaussianWindow(0.7071067811865476), model);
    CHECK(eb.A_emp == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(eb.B_emp == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(eb.A_emp <= eb.B_emp);
}

TEST_CASE("too-small phase-space boxes are rejected") {
    FrameBoundModel model;
    model.box_halfwidth = 1.5;
    CHECK_THROWS_AS(
        empirical_frame_bounds(golden_lattice(), 0.125, GaussianWindow(0.7071067811865476), model),
        std::runtime_error);
}

TEST_CASE("schur epsilon bitwise equal for serial and parallel") {
    SchurOptions so;
    so.nu_grid = 3;
    const Lattice g = golden_lattice().with_scale(0.25);
    const GaussianWindow w(0.7071067811865476);
    set_worker_threads(1);
    const SchurEpsilon s = schur_epsilon(g, w, so);
    set_worker_threads(0);
    const SchurEpsilon p = schur_epsilon(g, w, so);
    CHECK(s.epsilon == p.epsilon);
    CHECK(s.budget == p.budget);
}

TEST_CASE("frame operator apply bitwise equal for serial and parallel") {
    FrameBoundModel model;
    model.signal_length = 560;
    model.time_span = 20.0;
    const FrameOperatorModel fo =
        build_frame_operator_model(golden_lattice(), 0.25, GaussianWindow(0.7071067811865476), model);
    std::vector<Complex> f(fo.grid.size());
    for (std::size_t j = 0; j < f.size(); ++j)
        f[j] = std::exp(-0.4 * fo.grid[j] * fo.grid[j]) * Complex{1.0, 0.25};
    set_worker_threads(1);
    const auto s = fo.apply(f);
    set_worker_threads(0);
    const auto p = fo.apply(f);
    REQUIRE(s.size() == p.size());
    for (std::size_t j = 0; j < s.size(); ++j) CHECK(s[j] == p[j]);
}
