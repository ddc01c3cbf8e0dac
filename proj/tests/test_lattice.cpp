#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qmcf/lattice.hpp"
#include "qmcf/parallel.hpp"
#include "qmcf/surd.hpp"

using namespace qmcf;

namespace {
const double kGoldenDet = 1.0 + kInvPhi * kInvPhi;  // 1.3819660112501051
}

TEST_CASE("make_lattice basics and area preservation") {
    const Lattice z = make_lattice({1, 0, 0, 1}, 1.0, 1.0);
    CHECK(z.det_effective() == doctest::Approx(1.0).epsilon(1e-15));

    const Lattice zt = make_lattice({1, 0, 0, 1}, 1.0, 2.0);
    CHECK(zt.point(1, 0).x == doctest::Approx(2.0));
    CHECK(zt.point(0, 1).y == doctest::Approx(0.5));
    CHECK(zt.det_effective() == doctest::Approx(1.0).epsilon(1e-15));

    const Lattice g = golden_lattice().with_scale(0.5);
    CHECK(g.det_effective() == doctest::Approx(0.25 * kGoldenDet).epsilon(1e-14));

    // dilation is area-preserving for any tau
    for (const double tau : {0.25, 1.0, 3.0, 7.5})
        CHECK(golden_lattice().with_tau(tau).det_effective() ==
              doctest::Approx(kGoldenDet).epsilon(1e-14));
}

TEST_CASE("make_lattice rejects bad input") {
    CHECK_THROWS_AS(make_lattice({1, 2, 2, 4}, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_lattice({1, 0, 0, 1}, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_lattice({1, 0, 0, 1}, -2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_lattice({1, 0, 0, 1}, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("golden lattice generators match the reference matrix") {
    const Lattice g = golden_lattice();
    CHECK(g.basis.col0().x == doctest::Approx(1.0));
    CHECK(g.basis.col0().y == doctest::Approx(-kInvPhi).epsilon(1e-16));
    CHECK(g.basis.col1().x == doctest::Approx(kInvPhi).epsilon(1e-16));
    CHECK(g.basis.col1().y == doctest::Approx(1.0));
    CHECK(g.det_effective() == doctest::Approx(kGoldenDet).epsilon(1e-15));
}

TEST_CASE("enumerate_in_box fixed cases") {
    const Lattice z = integer_lattice();
    CHECK(enumerate_in_box(z, {0, 1, 0, 1}).size() == 4);  // closed box corners
    CHECK(enumerate_in_box(z, {0.25, 0.75, 0.25, 0.75}).size() == 0);
    CHECK_THROWS_AS(enumerate_in_box(z, {1, 1, 0, 2}), std::invalid_argument);

    const PointSet g = enumerate_in_box(golden_lattice(), {-2, 2, -2, 2});
    CHECK(g.size() == oracle::brute_lattice_scan(golden_lattice(), {-2, 2, -2, 2}, 10).size());
}

TEST_CASE("enumerate_in_box agrees with the integer scan oracle") {
    auto g = oracle::rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        Mat2 B{1.0 + 0.5 * u(g), 0.6 * u(g), 0.6 * u(g), 1.0 + 0.5 * u(g)};
        if (std::abs(B.det()) < 0.2) continue;
        const Lattice lat = make_lattice(B, 0.4 + 0.4 * std::abs(u(g)), 1.0);
        const double cx = 2.0 * u(g), cy = 2.0 * u(g);
        const Rect box{cx - 1.5, cx + 1.5, cy - 1.5, cy + 1.5};
        PointSet mine = enumerate_in_box(lat, box);
        mine.sort_by_xy();
        const auto ref = oracle::brute_lattice_scan(lat, box, 40);
        REQUIRE(mine.size() == ref.size());
        for (std::size_t i = 0; i < ref.size(); ++i) {
            CHECK(mine.points[i].x == ref[i].x);
            CHECK(mine.points[i].y == ref[i].y);
        }
        CHECK(count_in_box(lat, box) == static_cast<std::int64_t>(ref.size()));
    }
}

TEST_CASE("admissibility margin fixed cases") {
    CHECK(admissibility_margin(integer_lattice(), 10).margin == 0.0);
    // a generator on an axis forces margin 0
    CHECK(admissibility_margin(make_lattice({1.0 / kSqrt2, 0.0, 0.0, 1.0}, 1, 1), 50).margin == 0.0);

    const auto am = admissibility_margin(golden_lattice(), 100);
    CHECK(am.margin == doctest::Approx(kInvPhi).epsilon(1e-14));
}

TEST_CASE("admissibility margin is non-increasing in M") {
    const Lattice g = golden_lattice();
    double prev = admissibility_margin(g, 1).margin;
    for (const std::int64_t M : {2, 5, 20, 100, 500}) {
        const double cur = admissibility_margin(g, M).margin;
        CHECK(cur <= prev + 1e-15);
        prev = cur;
    }
    // golden stays at inv phi for every M
    CHECK(prev == doctest::Approx(kInvPhi).epsilon(1e-14));

    const Lattice skew = make_lattice({1.0, 0.3, 0.7, 1.2}, 1, 1);
    double p2 = admissibility_margin(skew, 1).margin;
    for (const std::int64_t M : {3, 10, 50, 200}) {
        const double cur = admissibility_margin(skew, M).margin;
        CHECK(cur <= p2 + 1e-15);
        p2 = cur;
    }
}

TEST_CASE("unit-square covering check") {
    CHECK(min_box_count(integer_lattice()).min_count == 1);
    CHECK(min_box_count(golden_lattice().with_scale(0.5)).min_count >= 1);
    // at a = 1 the golden lattice leaves empty unit squares near deep holes
    CHECK(min_box_count(golden_lattice()).min_count == 0);
}

TEST_CASE("continued fraction of the golden ratio") {
    const auto cf = cf_partial_quotients(QuadraticSurd::golden_ratio(), 50);
    CHECK_FALSE(cf.rational);
    CHECK(cf.period_found);
    CHECK(cf.period == 1);
    for (const auto q : cf.quotients) CHECK(q == 1);
}

TEST_CASE("continued fraction of sqrt(2)") {
    const auto cf = cf_partial_quotients(QuadraticSurd::sqrt2(), 50);
    CHECK_FALSE(cf.rational);
    CHECK(cf.period_found);
    CHECK(cf.period == 1);
    CHECK(cf.quotients[0] == 1);
    for (std::size_t i = 1; i < cf.quotients.size(); ++i) CHECK(cf.quotients[i] == 2);
}

TEST_CASE("continued fraction of a rational terminates and is flagged") {
    const auto cf = cf_partial_quotients(QuadraticSurd(7, 0, 3, 2), 10);
    CHECK(cf.rational);
    REQUIRE(cf.quotients.size() == 2);
    CHECK(cf.quotients[0] == 2);
    CHECK(cf.quotients[1] == 3);
}

TEST_CASE("pure square roots detect their period within 2d quotients") {
    for (std::int64_t d = 2; d <= 60; ++d) {
        const std::int64_t s = static_cast<std::int64_t>(std::sqrt(double(d)));
        if (s * s == d) continue;
        const auto cf = cf_partial_quotients(QuadraticSurd(0, 1, 1, d),
                                             static_cast<std::size_t>(2 * d));
        CHECK(cf.period_found);
        CHECK(cf.period >= 1);
        CHECK(static_cast<std::int64_t>(cf.quotients[0]) == s);
    }
}

TEST_CASE("general surds are eventually periodic") {
    // the effective radicand after normalization is q^2 d r^2, so the state
    // space (hence the detection budget) scales with its square root
    auto g = oracle::rng(77);
    std::uniform_int_distribution<std::int64_t> small(1, 30);
    const std::int64_t nonsquare[] = {2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23};
    for (int trial = 0; trial < 40; ++trial) {
        const std::int64_t d = nonsquare[trial % 15];
        const std::int64_t p = small(g) - 15, q = small(g), r = small(g);
        const QuadraticSurd x(p, q, r, d);
        const double sqrtN = std::sqrt(double(q * q * d)) * double(r);
        const std::size_t budget = static_cast<std::size_t>(40.0 * sqrtN * std::log(sqrtN + 2.0)) + 64;
        const auto cf = cf_partial_quotients(x, budget);
        CHECK(cf.period_found);
        CHECK(cf.period >= 1);
        // first quotient agrees with the floating value
        CHECK(static_cast<double>(cf.quotients[0]) == doctest::Approx(std::floor(x.approx())));
    }
}

TEST_CASE("surd validation") {
    CHECK_THROWS_AS(QuadraticSurd(1, 1, 0, 2), std::invalid_argument);   // r = 0
    CHECK_THROWS_AS(QuadraticSurd(1, 1, 1, 4), std::invalid_argument);   // square d
    CHECK_THROWS_AS(QuadraticSurd(1, 1, 1, -3), std::invalid_argument);  // negative d
    CHECK_THROWS_AS(cf_partial_quotients(QuadraticSurd::sqrt2(), 0), std::invalid_argument);
}

TEST_CASE("lattice config parser") {
    const Lattice l = parse_lattice_config(
        "basis = [[1, inv_phi], [-inv_phi, 1]]\n"
        "a = 0.5\n"
        "tau = 2.0\n");
    const Lattice ref = golden_lattice();
    CHECK(l.basis.a == ref.basis.a);
    CHECK(l.basis.b == ref.basis.b);
    CHECK(l.basis.c == ref.basis.c);
    CHECK(l.basis.d == ref.basis.d);
    CHECK(l.basis_lo.b == ref.basis_lo.b);  // second limb of the surd entries
    CHECK(l.a == 0.5);
    CHECK(l.tau == 2.0);

    CHECK_THROWS(parse_lattice_config("basis = [[1, 0], [0, 1]]\nwidth = 3\n"));
    CHECK_THROWS(parse_lattice_config("a = 1\n"));
    CHECK_THROWS(parse_lattice_config("basis = [[1, zzz], [0, 1]]\n"));
    CHECK_THROWS(parse_lattice_config("basis = [[1, 0], [0, 1]]\na = -1\n"));
}

TEST_CASE("admissibility margin bitwise equal for serial and parallel") {
    set_worker_threads(1);
    const auto s = admissibility_margin(golden_lattice(), 300);
    set_worker_threads(0);
    const auto p = admissibility_margin(golden_lattice(), 300);
    CHECK(s.margin == p.margin);
    CHECK(s.argmin_m == p.argmin_m);
    CHECK(s.argmin_n == p.argmin_n);
}
