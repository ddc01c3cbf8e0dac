#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "oracles.hpp"
#include "qmcf/discrepancy.hpp"
#include "qmcf/gabor.hpp"
#include "qmcf/parallel.hpp"
#include "qmcf/quad.hpp"
#include "qmcf/quadrature.hpp"

using namespace qmcf;

namespace {
const double kGoldenDet = 1.0 + kInvPhi * kInvPhi;

SmoothFn2D zero_fn() {
    SmoothFn2D f;
    f.eval = [](Vec2) { return Complex{0.0, 0.0}; };
    f.d1 = f.d2 = f.d12 = f.eval;
    f.envelope = [](double) { return 0.0; };
    f.deriv_envelope = f.envelope;
    f.exact_integral = Complex{0.0, 0.0};
    return f;
}
}  // namespace

TEST_CASE("box_count closed-box convention") {
    CHECK(box_count(integer_lattice(), {0.25, 0.25}) == 1);
    CHECK(box_count(integer_lattice(), {0.0, 0.0}) == 4);

    const Lattice g = golden_lattice().with_scale(0.25);
    auto rng = oracle::rng(99);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 25; ++trial) {
        const Vec2 rho{u(rng), u(rng)};
        const Rect sq = Rect::unit_square_at(rho);
        CHECK(box_count(g, rho) ==
              static_cast<std::int64_t>(oracle::brute_lattice_scan(g, sq, 40).size()));
    }
}

TEST_CASE("lattice weights equal the determinant") {
    const PointSet wz = qmc_weights(integer_lattice(), {-2, 2, -2, 2});
    for (const double w : wz.weights) CHECK(w == 1.0);

    const PointSet wh = qmc_weights(integer_lattice().with_scale(0.5), {-2, 2, -2, 2});
    for (const double w : wh.weights) CHECK(w == 0.25);

    const PointSet wg = qmc_weights(golden_lattice().with_scale(0.5), {-2, 2, -2, 2});
    for (const double w : wg.weights)
        CHECK(w == doctest::Approx(0.25 * kGoldenDet).epsilon(1e-14));
}

TEST_CASE("lattice det rule refuses non-covering lattices") {
    // golden at a = 1 has empty unit squares, so the det shortcut does not apply
    CHECK_THROWS_AS(qmc_weights(golden_lattice(), {-2, 2, -2, 2}), std::runtime_error);
}

TEST_CASE("exact sweep reproduces the determinant for covering lattices") {
    for (const Lattice lat : {integer_lattice(), integer_lattice().with_scale(0.5),
                              golden_lattice().with_scale(0.5)}) {
        PointSet ambient = enumerate_in_box(lat, Rect{-3, 3, -3, 3});
        ambient.sort_by_xy();
        const PointSet w = qmc_weights_sweep(ambient, Rect{-1.5, 1.5, -1.5, 1.5});
        REQUIRE(w.size() > 0);
        const double det = lat.det_effective();
        for (const double wt : w.weights) CHECK(wt == doctest::Approx(det).epsilon(1e-9));
    }
}

TEST_CASE("sweep weights for the perturbed integer lattice") {
    // Z^2 plus an extra point at the cell center
    PointSet ambient = enumerate_in_box(integer_lattice(), Rect{-4, 4, -4, 4});
    ambient.push_back({0.5, 0.5});
    ambient.sort_by_xy();

    const PointSet w = qmc_weights_sweep(ambient, Rect{-0.1, 1.1, -0.1, 1.1});
    double w_center = -1.0, w_corner = -1.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w.points[i].x == 0.5 && w.points[i].y == 0.5) w_center = w.weights[i];
        if (w.points[i].x == 0.0 && w.points[i].y == 0.0) w_corner = w.weights[i];
    }
    REQUIRE(w_center >= 0.0);
    REQUIRE(w_corner >= 0.0);
    CHECK(w_center == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w_corner == doctest::Approx(0.875).epsilon(1e-12));

    // fine-grid numeric oracle (grid aligned with the half-integer events)
    CHECK(w_center == doctest::Approx(oracle::fine_grid_weight(ambient.points, {0.5, 0.5}, 2000))
                          .epsilon(1e-6));
    CHECK(w_corner == doctest::Approx(oracle::fine_grid_weight(ambient.points, {0.0, 0.0}, 2000))
                          .epsilon(1e-6));
}

TEST_CASE("weights of covering-perturbed sets stay in (0, 1]") {
    auto rng = oracle::rng(4242);
    std::uniform_real_distribution<double> u(-0.18, 0.18);
    PointSet ambient;
    for (int m = -8; m <= 8; ++m)
        for (int n = -8; n <= 8; ++n)
            ambient.push_back({0.5 * m + u(rng), 0.5 * n + u(rng)});
    ambient.sort_by_xy();
    const PointSet w = qmc_weights_sweep(ambient, Rect{-2, 2, -2, 2});
    REQUIRE(w.size() > 0);
    for (const double wt : w.weights) {
        CHECK(wt > 0.0);
        CHECK(wt <= 1.0 + 1e-12);
    }
}

TEST_CASE("quadrature error against the theta-sum oracle") {
    const SmoothFn2D h = gaussian_integrand();

    // e(h, Z^2) = 1 - theta^2
    const double theta = oracle::theta_sum(1.0, 1.0);
    const QuadratureResult r1 = quadrature_error(h, integer_lattice());
    CHECK(r1.value.imag() == 0.0);
    CHECK(r1.value.real() == doctest::Approx(1.0 - theta * theta).epsilon(1e-12));
    CHECK(std::abs(r1.value.real() - (-0.1803406)) < 1e-6);
    CHECK(r1.total_budget() < 1e-9);

    // e(h, (1/2) Z^2) via the scaled theta sum, weights det = 1/4
    const double theta_half = oracle::theta_sum(0.5, 1.0);
    const double expected = 1.0 - 0.25 * theta_half * theta_half;
    const QuadratureResult r2 = quadrature_error(h, integer_lattice().with_scale(0.5));
    CHECK(r2.value.real() == doctest::Approx(expected).epsilon(1e-9));
    CHECK(std::abs(r2.value.real() - (-1.39e-5)) < 1e-7);
}

TEST_CASE("zero integrand has exactly zero error") {
    const QuadratureResult r = quadrature_error(zero_fn(), integer_lattice());
    CHECK(r.value == Complex{0.0, 0.0});
}

TEST_CASE("dilate_fn basics") {
    const SmoothFn2D h = gaussian_integrand();
    // tau = 1 is the identity
    const SmoothFn2D h1 = dilate_fn(h, 1.0);
    CHECK(h1.eval({0.3, -0.4}) == h.eval({0.3, -0.4}));

    // area-preserving: the integral is unchanged; check by direct quadrature
    const SmoothFn2D h3 = dilate_fn(h, 3.0);
    const Complex num = integrate_2d_complex(
        [&](double x, double y) { return h3.eval({x, y}); }, -8, 8, -8, 8, 1e-10);
    CHECK(num.real() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(h3.exact_integral->real() == 1.0);

    // chain-rule factors against finite differences
    const Vec2 p{0.4, -0.7};
    const double eps = 1e-6;
    const Complex d1_fd = (h3.eval({p.x + eps, p.y}) - h3.eval({p.x - eps, p.y})) / (2 * eps);
    CHECK(h3.d1(p).real() == doctest::Approx(d1_fd.real()).epsilon(1e-6));
    const Complex d2_fd = (h3.eval({p.x, p.y + eps}) - h3.eval({p.x, p.y - eps})) / (2 * eps);
    CHECK(h3.d2(p).real() == doctest::Approx(d2_fd.real()).epsilon(1e-6));

    CHECK_THROWS_AS(dilate_fn(h, 0.0), std::invalid_argument);
}

TEST_CASE("dilation identity e(h_tau, a Gamma) = e(h, a Gamma_tau)") {
    const SmoothFn2D h = gaussian_integrand();
    const Lattice g = golden_lattice().with_scale(0.25);
    for (const double tau : {0.25, 1.0, 4.0}) {
        const QuadratureResult lhs = quadrature_error(dilate_fn(h, tau), g);
        const QuadratureResult rhs = quadrature_error(h, g.with_tau(tau));
        CHECK(std::abs(lhs.value - rhs.value) <= 1e-10);
    }
}

TEST_CASE("partitioned local errors reassemble the global error") {
    // Riemann sample of the anchor integral: sum over a midpoint rho-grid of
    // delta^2 * e_rho. For Z^2 the induced weights are exactly det = 1 on
    // interior points, so the partition sum reproduces e(h, Z^2) up to the
    // truncated far field.
    const Lattice z = integer_lattice();
    const double delta = 0.5;
    const int R = 7;
    auto seg = [](double a, double b) {
        return 0.5 * (std::erf(std::sqrt(oracle::kPi) * b) - std::erf(std::sqrt(oracle::kPi) * a));
    };

    PointSet cloud = enumerate_in_box(z, Rect{-R - 2.0, R + 2.0, -R - 2.0, R + 2.0});
    cloud.sort_by_xy();

    double partition_sum = 0.0;
    const int steps = static_cast<int>(std::lround((2.0 * R - 1.0) / delta));
    for (int kx = 0; kx < steps; ++kx) {
        for (int ky = 0; ky < steps; ++ky) {
            const Vec2 rho{-R + (kx + 0.5) * delta, -R + (ky + 0.5) * delta};
            double cell_sum = 0.0;
            std::int64_t n = 0;
            for (const Vec2& p : cloud.points) {
                if (p.x >= rho.x && p.x <= rho.x + 1.0 && p.y >= rho.y && p.y <= rho.y + 1.0) {
                    ++n;
                    cell_sum += std::exp(-oracle::kPi * p.norm2());
                }
            }
            REQUIRE(n >= 1);
            const double cell_integral = seg(rho.x, rho.x + 1.0) * seg(rho.y, rho.y + 1.0);
            partition_sum += delta * delta * (cell_integral - cell_sum / static_cast<double>(n));
        }
    }

    const QuadratureResult e = quadrature_error(gaussian_integrand(), z);
    CHECK(partition_sum == doctest::Approx(e.value.real()).epsilon(1e-9));
}

TEST_CASE("kh_bound uses exact norms and matches numeric integration") {
    const SmoothFn2D h = gaussian_integrand();
    CHECK(kh_bound(h, 0.0) == 0.0);
    CHECK(kh_bound(h, 0.5) == doctest::Approx(0.5 * 8.0).epsilon(1e-14));

    SmoothFn2D hn = h;
    hn.exact_partial_l1.reset();  // force the numeric path
    const auto norms = partial_l1_norms(hn, 1e-9);
    CHECK(norms[0] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(norms[1] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(norms[2] == doctest::Approx(4.0).epsilon(1e-6));

    // anisotropic norms (2 sy, 2 sx, 4)
    SmoothFn2D ha = gaussian_integrand(1.3, 0.7);
    ha.exact_partial_l1.reset();
    const auto na = partial_l1_norms(ha, 1e-9);
    CHECK(na[0] == doctest::Approx(2.0 * 0.7).epsilon(1e-6));
    CHECK(na[1] == doctest::Approx(2.0 * 1.3).epsilon(1e-6));
    CHECK(na[2] == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("KH inequality holds on a randomized mini-suite") {
    auto rng = oracle::rng(2026);
    std::uniform_real_distribution<double> su(0.6, 1.6);
    ShiftOptions opt;
    opt.grid_n = 32;
    opt.refine_rounds = 2;
    const double scales[] = {0.5, 0.25, 0.125};
    for (int trial = 0; trial < 15; ++trial) {
        const double a = scales[trial % 3];
        const Lattice lat =
            (trial % 2 == 0) ? integer_lattice().with_scale(a) : golden_lattice().with_scale(a);
        const double d_up = shift_discrepancy(lat, opt).upper_proxy();
        const SmoothFn2D h = gaussian_integrand(su(rng), su(rng));
        const QuadratureResult e = quadrature_error(h, lat);
        CHECK(std::abs(e.value) <= kh_bound(h, d_up) + e.total_budget());
    }
}

TEST_CASE("fast lattice sum equals the direct loop") {
    auto rng = oracle::rng(808);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        ExpQuadratic q;
        q.c0 = {0.3 * u(rng), u(rng)};
        q.cx = {u(rng), u(rng)};
        q.cy = {u(rng), u(rng)};
        q.cxx = {-1.0 - 0.5 * std::abs(u(rng)), 0.4 * u(rng)};
        q.cyy = {-1.0 - 0.5 * std::abs(u(rng)), 0.4 * u(rng)};
        q.cxy = {0.3 * u(rng), 0.3 * u(rng)};
        const Lattice lat = golden_lattice().with_scale(0.5);
        const Vec2 center{u(rng), u(rng)};
        const double radius = 3.0 + std::abs(u(rng));

        const LatticeSum fast = sum_exp_quadratic(q, lat, center, radius);
        Complex direct{0.0, 0.0};
        std::int64_t npts = 0;
        for (std::int64_t m = -40; m <= 40; ++m)
            for (std::int64_t n = -40; n <= 40; ++n) {
                const Vec2 p = lat.point(m, n);
                if ((p - center).norm() <= radius) {
                    direct += q.eval(p);
                    ++npts;
                }
            }
        CHECK(fast.points == npts);
        CHECK(std::abs(fast.sum - direct) <= 1e-12 * (1.0 + std::abs(direct)));
    }
}

TEST_CASE("point-set CSV round trip") {
    PointSet ps;
    auto rng = oracle::rng(11);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 50; ++i) ps.push_back({u(rng), u(rng)}, 0.5 + 0.001 * i);
    const std::string path = (std::filesystem::temp_directory_path() / "qmcf_ps.csv").string();
    write_pointset_csv(path, ps, {"case = round-trip"});
    const PointSet back = read_pointset_csv(path);
    REQUIRE(back.size() == ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
        CHECK(back.points[i].x == ps.points[i].x);
        CHECK(back.points[i].y == ps.points[i].y);
        CHECK(back.weights[i] == ps.weights[i]);
    }
    std::filesystem::remove(path);
}

TEST_CASE("quadrature over an explicit weighted point set") {
    const Lattice g = golden_lattice().with_scale(0.5);
    const SmoothFn2D h = gaussian_integrand();
    PointSet ps = enumerate_in_box(g, Rect{-9, 9, -9, 9});
    ps.sort_by_xy();
    for (double& w : ps.weights) w = g.det_effective();
    const QuadratureResult from_points = quadrature_error(h, ps);
    const QuadratureResult from_lattice = quadrature_error(h, g);
    CHECK(std::abs(from_points.value - from_lattice.value) <=
          from_points.total_budget() + from_lattice.total_budget() + 1e-12);
}

TEST_CASE("lattice quadrature bitwise equal for serial and parallel") {
    const SmoothFn2D h = gaussian_integrand(1.2, 0.8);
    const Lattice g = golden_lattice().with_scale(0.25);
    set_worker_threads(1);
    const auto s = quadrature_error(h, g);
    set_worker_threads(0);
    const auto p = quadrature_error(h, g);
    CHECK(s.value.real() == p.value.real());
    CHECK(s.value.imag() == p.value.imag());
}
