#ifndef SPONGEDIM_QUADRATURE_HPP
#define SPONGEDIM_QUADRATURE_HPP

#include <cmath>
#include <functional>

namespace spongedim {

namespace detail {

template <class F>
double simpson_step(F&& f, double a, double fa, double b, double fb, double m,
                    double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // Corrections below the rounding noise of the sampled values cannot be
    // refined away; without this floor a zero integrand recurses to the
    // full depth-48 tree.
    const double fscale = std::max({1.0, std::abs(fa), std::abs(fm),
                                    std::abs(fb), std::abs(flm),
                                    std::abs(frm)});
    const double noise = 1.5e-15 * (b - a) * fscale;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol ||
        std::abs(delta) <= noise)
        return left + right + delta / 15.0;
    return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson with Richardson acceptance test.  `tol` is absolute;
// callers convert relative tolerances using a scale estimate.
template <class F>
double integrate(F&& f, double a, double b, double tol, int max_depth = 48) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, fa, b, fb, m, fm, whole,
                                std::max(tol, 1e-300), max_depth);
}

// Integrate with a relative tolerance against a caller-supplied magnitude
// scale (panel integrals of h(...) use the enclosing value's scale).
template <class F>
double integrate_rel(F&& f, double a, double b, double rel_tol, double scale) {
    const double tol = rel_tol * std::max(std::abs(scale), 1e-12);
    return integrate(f, a, b, tol);
}

}  // namespace spongedim

#endif
