#ifndef SPONGEDIM_ROOTS_HPP
#define SPONGEDIM_ROOTS_HPP

#include <cmath>
#include <stdexcept>

namespace spongedim {

// Root of a continuous strictly monotone increasing g on (0, inf):
// brackets by doubling/halving from x0, then bisection with a secant
// midpoint.  Stops when |g(x)| <= tol_f or the bracket is exhausted.
template <class G>
double solve_increasing(G&& g, double x0, double tol_f, int max_iter = 200) {
    double lo = x0, hi = x0;
    double glo = g(lo), ghi = glo;
    int guard = 0;
    while (glo > 0.0) {
        lo *= 0.5;
        glo = g(lo);
        if (++guard > 2000) throw std::runtime_error("solve_increasing: no lower bracket");
    }
    guard = 0;
    while (ghi < 0.0) {
        hi *= 2.0;
        ghi = g(hi);
        if (++guard > 2000) throw std::runtime_error("solve_increasing: no upper bracket");
    }
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    double x = lo, gx = glo;
    for (int it = 0; it < max_iter; ++it) {
        // Secant proposal, clamped into the middle 90% of the bracket.
        double xs = (ghi != glo) ? lo - glo * (hi - lo) / (ghi - glo) : 0.5 * (lo + hi);
        const double lim_lo = lo + 0.05 * (hi - lo), lim_hi = hi - 0.05 * (hi - lo);
        if (!(xs > lim_lo && xs < lim_hi)) xs = 0.5 * (lo + hi);
        x = xs;
        gx = g(x);
        if (std::abs(gx) <= tol_f) return x;
        if (gx < 0.0) { lo = x; glo = gx; } else { hi = x; ghi = gx; }
        if (hi - lo <= 1e-15 * hi) break;
    }
    return x;
}

// Golden-section minimization of a unimodal-near-minimum f on [a, b]
// to absolute abscissa tolerance tol.  Returns the abscissa.
template <class F>
double golden_section_min(F&& f, double a, double b, double tol,
                          int max_iter = 200) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
        if (f1 <= f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

// Monotone scalar fixed point t = c + g(t) with 0 < g' bounded away from -1:
// solved as a root of t - c - g(t), bracketing around c.
template <class G>
double solve_fixed_point(G&& g, double c, double slack, double tol,
                         int max_iter = 200) {
    auto f = [&](double t) { return t - c - g(t); };
    double lo = c - slack, hi = c + slack;
    double flo = f(lo), fhi = f(hi);
    int guard = 0;
    while (flo > 0.0) { lo -= slack; flo = f(lo); if (++guard > 100) break; }
    guard = 0;
    while (fhi < 0.0) { hi += slack; fhi = f(hi); if (++guard > 100) break; }
    for (int it = 0; it < max_iter; ++it) {
        const double m = 0.5 * (lo + hi);
        const double fm = f(m);
        if (std::abs(fm) <= tol) return m;
        if (fm < 0.0) lo = m; else hi = m;
    }
    return 0.5 * (lo + hi);
}

}  // namespace spongedim

#endif
