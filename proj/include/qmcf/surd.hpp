#pragma once

#include <cstdint>
#include <vector>

namespace qmcf {

// Exact quadratic surd (p + q*sqrt(d)) / r with integer p, q, r != 0 and
// positive non-square d. Arithmetic on the surd itself never goes through
// floating point; continued-fraction quotients are computed exactly.
struct QuadraticSurd {
    std::int64_t p = 0;
    std::int64_t q = 0;
    std::int64_t r = 1;
    std::int64_t d = 2;

    // Normalizes to r > 0 and gcd(p, q, r) = 1, validating that d is a
    // positive non-square (unless q == 0, in which case d is irrelevant).
    QuadraticSurd(std::int64_t p_, std::int64_t q_, std::int64_t r_, std::int64_t d_);

    bool is_rational() const { return q == 0; }
    double approx() const;

    static QuadraticSurd golden_ratio();  // (1 + sqrt(5)) / 2
    static QuadraticSurd sqrt2();         // (0 + sqrt(2)) / 1
};

struct ContinuedFraction {
    std::vector<std::int64_t> quotients;
    bool rational = false;      // expansion terminated
    bool period_found = false;  // for irrational inputs
    std::size_t preperiod = 0;  // index where the cycle starts
    std::size_t period = 0;     // cycle length (0 if not detected)
};

// First n partial quotients of x. For irrational surds the state recurrence
// is tracked until it repeats, so the reported expansion is exact for any n
// once the period is found.
ContinuedFraction cf_partial_quotients(const QuadraticSurd& x, std::size_t n);

}  // namespace qmcf
