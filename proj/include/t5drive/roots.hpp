#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "t5drive/errors.hpp"

namespace t5drive::roots {

/// Real roots of a·x² + b·x + c = 0, ascending. Uses the cancellation-free
/// form of the quadratic formula; degenerates to the linear case when a = 0.
struct QuadraticRoots {
    int count = 0;
    double lo = 0.0;
    double hi = 0.0;
};

inline QuadraticRoots solve_quadratic(double a, double b, double c) {
    QuadraticRoots out;
    if (a == 0.0) {
        if (b == 0.0) {
            return out;
        }
        out.count = 1;
        out.lo = out.hi = -c / b;
        return out;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
        return out;
    }
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (b + std::copysign(sq, b));
    double r1 = 0.0;
    double r2 = 0.0;
    if (q == 0.0) {
        // b = 0 and c = 0: double root at zero
        r1 = r2 = 0.0;
    } else {
        r1 = q / a;
        r2 = c / q;
    }
    out.count = 2;
    out.lo = std::min(r1, r2);
    out.hi = std::max(r1, r2);
    return out;
}

struct BracketOptions {
    double abs_tol = 1e-10; // on |f|
    int max_iter = 200;
};

struct BracketResult {
    double root = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// Root of f on [lo, hi] given a sign change. Each iteration tries a secant
/// step from the bracket ends and falls back to bisection when the secant
/// point leaves the bracket or the bracket fails to shrink by half.
///
/// Throws NoBracket when f(lo) and f(hi) have the same strict sign.
template <typename F>
BracketResult find_root_bracketed(F &&f, double lo, double hi,
                                  const BracketOptions &opt = {}) {
    double flo = f(lo);
    if (std::abs(flo) <= opt.abs_tol) {
        return {lo, flo, 0};
    }
    double fhi = f(hi);
    if (std::abs(fhi) <= opt.abs_tol) {
        return {hi, fhi, 0};
    }
    if (!std::isfinite(flo) || !std::isfinite(fhi) ||
        (flo > 0.0) == (fhi > 0.0)) {
        throw Error(ErrorKind::NoBracket, "no sign change over the search interval");
    }

    BracketResult best{std::abs(flo) < std::abs(fhi) ? lo : hi,
                       std::abs(flo) < std::abs(fhi) ? flo : fhi, 0};
    double width = hi - lo;
    for (int it = 1; it <= opt.max_iter; ++it) {
        double x = hi - fhi * (hi - lo) / (fhi - flo);
        if (!(x > lo && x < hi)) {
            x = 0.5 * (lo + hi);
        }
        double fx = f(x);
        if (std::abs(fx) < std::abs(best.residual)) {
            best = {x, fx, it};
        }
        best.iterations = it;
        if (std::abs(fx) <= opt.abs_tol) {
            return {x, fx, it};
        }
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        // secant stalls against one end on convex pieces; force a halving
        if (hi - lo > 0.5 * width) {
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            if (std::abs(fm) < std::abs(best.residual)) {
                best = {mid, fm, it};
            }
            if (std::abs(fm) <= opt.abs_tol) {
                return {mid, fm, it};
            }
            if ((fm > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
                fhi = fm;
            }
        }
        width = hi - lo;
        if (width <= 4.0 * std::numeric_limits<double>::epsilon() *
                         std::max(std::abs(lo), std::abs(hi))) {
            break;
        }
    }
    return best;
}

} // namespace t5drive::roots
