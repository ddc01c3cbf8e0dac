#include "qmcf/surd.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace qmcf {

namespace {

using i128 = __int128;

constexpr i128 kStateLimit = static_cast<i128>(1) << 100;

void check_range(i128 v, const char* what) {
    if (v > kStateLimit || v < -kStateLimit)
        throw std::overflow_error(std::string("cf_partial_quotients: ") + what + " overflow");
}

std::int64_t isqrt64(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative value");
    auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (s > 0 && s * s > n) --s;
    while ((s + 1) * (s + 1) <= n) ++s;
    return s;
}

i128 isqrt128(i128 n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative value");
    i128 s = static_cast<i128>(std::sqrt(static_cast<double>(n)));
    while (s > 0 && s * s > n) --s;
    while ((s + 1) * (s + 1) <= n) ++s;
    return s;
}

i128 floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

QuadraticSurd::QuadraticSurd(std::int64_t p_, std::int64_t q_, std::int64_t r_, std::int64_t d_)
    : p(p_), q(q_), r(r_), d(d_) {
    if (r == 0) throw std::invalid_argument("QuadraticSurd: r must be nonzero");
    if (q != 0) {
        if (d <= 0) throw std::invalid_argument("QuadraticSurd: d must be positive");
        const std::int64_t s = isqrt64(d);
        if (s * s == d) throw std::invalid_argument("QuadraticSurd: d must be non-square");
    }
    if (r < 0) {
        p = -p;
        q = -q;
        r = -r;
    }
    std::int64_t g = std::gcd(std::gcd(std::llabs(p), std::llabs(q)), r);
    if (g > 1) {
        p /= g;
        q /= g;
        r /= g;
    }
}

double QuadraticSurd::approx() const {
    return (static_cast<double>(p) + static_cast<double>(q) * std::sqrt(static_cast<double>(d))) /
           static_cast<double>(r);
}

QuadraticSurd QuadraticSurd::golden_ratio() { return {1, 1, 2, 5}; }
QuadraticSurd QuadraticSurd::sqrt2() { return {0, 1, 1, 2}; }

ContinuedFraction cf_partial_quotients(const QuadraticSurd& x, std::size_t n) {
    if (n == 0) throw std::invalid_argument("cf_partial_quotients: n must be >= 1");

    ContinuedFraction out;
    out.quotients.reserve(n);

    if (x.is_rational()) {
        // Euclidean expansion of p / r, flagged rational.
        out.rational = true;
        std::int64_t a = x.p, b = x.r;
        while (b != 0 && out.quotients.size() < n) {
            const std::int64_t q = static_cast<std::int64_t>(floor_div(a, b));
            out.quotients.push_back(q);
            const std::int64_t rem = a - q * b;
            a = b;
            b = rem;
        }
        return out;
    }

    // Bring x to the form (P + sqrt(N)) / Q with Q | (N - P^2).
    const std::int64_t sgn = x.q > 0 ? 1 : -1;
    i128 P = static_cast<i128>(sgn) * x.p;
    i128 Q = static_cast<i128>(sgn) * x.r;
    i128 N = static_cast<i128>(x.q) * x.q * x.d;
    if ((N - P * P) % Q != 0) {
        const i128 absQ = Q < 0 ? -Q : Q;
        P *= absQ;
        N *= absQ * absQ;
        Q *= absQ;
    }
    check_range(N, "radicand");
    const i128 f = isqrt128(N);

    std::map<std::pair<long long, long long>, std::size_t> seen;
    std::vector<std::int64_t> cycle;

    while (out.quotients.size() < n) {
        if (!out.period_found) {
            const auto key = std::make_pair(static_cast<long long>(P), static_cast<long long>(Q));
            auto it = seen.find(key);
            if (it != seen.end()) {
                out.period_found = true;
                out.preperiod = it->second;
                out.period = out.quotients.size() - it->second;
                cycle.assign(out.quotients.begin() + static_cast<std::ptrdiff_t>(out.preperiod),
                             out.quotients.end());
            } else {
                seen.emplace(key, out.quotients.size());
            }
        }
        if (out.period_found) {
            // Replay the detected cycle; no further state arithmetic needed.
            const std::size_t k = (out.quotients.size() - out.preperiod) % out.period;
            out.quotients.push_back(cycle[k]);
            continue;
        }
        const i128 a = floor_div(P + f + (Q < 0 ? 1 : 0), Q);
        check_range(a, "partial quotient");
        out.quotients.push_back(static_cast<std::int64_t>(a));
        const i128 Pn = a * Q - P;
        check_range(Pn, "state P");
        const i128 Qn = (N - Pn * Pn) / Q;
        if (Qn == 0) throw std::logic_error("cf_partial_quotients: degenerate state");
        check_range(Qn, "state Q");
        P = Pn;
        Q = Qn;
    }
    return out;
}

}  // namespace qmcf
