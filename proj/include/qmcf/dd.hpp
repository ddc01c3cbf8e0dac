#pragma once

#include <cmath>

namespace qmcf {

// Double-double value hi + lo with |lo| <= ulp(hi)/2. Used where double
// rounding of irrational basis entries would spoil ~1e-12 accuracy targets
// (admissibility margins at large coefficient bounds).
struct DD {
    double hi = 0.0;
    double lo = 0.0;

    DD() = default;
    DD(double h) : hi(h), lo(0.0) {}
    DD(double h, double l) : hi(h), lo(l) {}

    double to_double() const { return hi + lo; }
};

inline DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DD two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return two_sum(s.hi, s.lo);
}

inline DD dd_sub(DD a, DD b) { return dd_add(a, {-b.hi, -b.lo}); }

inline DD dd_mul(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return two_sum(p.hi, p.lo);
}

inline DD dd_mul_int(DD a, long long k) {
    DD p = two_prod(a.hi, static_cast<double>(k));
    p.lo += a.lo * static_cast<double>(k);
    return two_sum(p.hi, p.lo);
}

inline DD dd_abs(DD a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? DD{-a.hi, -a.lo} : a; }

inline bool dd_less(DD a, DD b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }

// sqrt(x) refined one Newton step in double-double; error O(eps^2).
inline DD dd_sqrt(double x) {
    const double s = std::sqrt(x);
    const DD s2 = two_prod(s, s);
    const DD r = dd_sub(DD{x}, s2);
    return dd_add(DD{s}, DD{r.to_double() / (2.0 * s)});
}

}  // namespace qmcf
