#include "cas/rootfind.hpp"

#include "cas/errors.hpp"

#include <cmath>

namespace cas::preint {

namespace {
constexpr double kBracket0 = 12.0;
constexpr double kBracketMax = 40.0;
}

RootResult find_root_monotone(const MonotoneFn& g, double tol_x, double tol_f,
                              const double* hint) {
    double slope = 0.0;
    double lo = -kBracket0, hi = kBracket0;
    double glo = g(lo, &slope);
    double ghi = g(hi, &slope);
    while (glo > 0.0 && lo > -kBracketMax) {
        lo = std::max(lo * 2.0, -kBracketMax);
        glo = g(lo, &slope);
    }
    while (ghi < 0.0 && hi < kBracketMax) {
        hi = std::min(hi * 2.0, kBracketMax);
        ghi = g(hi, &slope);
    }
    if (glo > 0.0 && ghi < 0.0)
        throw MonotoneContractViolation("find_root_monotone: g decreases across the bracket");
    if (glo > 0.0) return RootResult::all_above();
    if (ghi < 0.0) return RootResult::all_below();
    if (glo == 0.0) return RootResult::root(lo);
    if (ghi == 0.0) return RootResult::root(hi);

    // Bracket invariant from here: g(lo) < 0 < g(hi).
    double x = (hint && *hint > lo && *hint < hi) ? *hint : 0.5 * (lo + hi);
    double prev_abs = HUGE_VAL;
    for (int it = 0; it < 100; ++it) {
        const double gx = g(x, &slope);
        if (std::fabs(gx) <= tol_f) return RootResult::root(x);
        if (gx > 0.0) hi = x;
        else lo = x;
        if (hi - lo <= tol_x) return RootResult::root(0.5 * (lo + hi));

        double next = 0.5 * (lo + hi);
        if (slope > 0.0 && std::fabs(gx) < prev_abs) {
            const double newton = x - gx / slope;
            if (newton > lo && newton < hi) next = newton;
        }
        prev_abs = std::fabs(gx);
        x = next;
    }
    return RootResult::root(0.5 * (lo + hi));
}

} // namespace cas::preint
