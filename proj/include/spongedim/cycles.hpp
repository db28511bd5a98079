#ifndef SPONGEDIM_CYCLES_HPP
#define SPONGEDIM_CYCLES_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "common.hpp"
#include "measures.hpp"
#include "quadrature.hpp"
#include "roots.hpp"

namespace spongedim {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// The cosine bump triple driving the circular cycle: a probability vector
// for every t, averaging to (1/3,1/3,1/3) over a period.
inline Vec circle_z(double t) {
    return {(1.0 + std::cos(t)) / 3.0,
            (1.0 + std::cos(t + kTwoPi / 3.0)) / 3.0,
            (1.0 + std::cos(t + 2.0 * kTwoPi / 3.0)) / 3.0};
}

// Mean-zero antiderivative of circle_z - u.
inline Vec circle_Z(double t) {
    return {std::sin(t) / 3.0, std::sin(t + kTwoPi / 3.0) / 3.0,
            std::sin(t + 2.0 * kTwoPi / 3.0) / 3.0};
}

// Derivative of circle_Z, equal to circle_z - u.
inline Vec circle_Zp(double t) {
    return {std::cos(t) / 3.0, std::cos(t + kTwoPi / 3.0) / 3.0,
            std::cos(t + 2.0 * kTwoPi / 3.0) / 3.0};
}

// An exponentially lambda-periodic path b -> r_b into the probability
// simplex: r_{lambda b} = r_b.
//   constant  — r_b = p for all b
//   knots     — n values at b_m = lambda^(m/n), linear in t = log b between
//               them, wrapped
//   circular  — r_b = z(log(b)/gamma) with lambda = exp(2*pi*gamma);
//               3 components, used with reduced block coordinates
struct Cycle {
    enum class Form { Constant, Knots, Circular };

    Form form = Form::Constant;
    double lambda = 1.0;
    std::vector<Vec> values;  // constant: 1 entry; knots: n >= 2 entries
    double gamma = 0.0;       // circular only

    static Cycle constant(Vec p) {
        Cycle c;
        c.form = Form::Constant;
        c.lambda = 1.0;
        c.values = {std::move(p)};
        return c;
    }
    static Cycle knots(double lambda, std::vector<Vec> vals) {
        Cycle c;
        c.form = Form::Knots;
        c.lambda = lambda;
        c.values = std::move(vals);
        return c;
    }
    static Cycle circular(double gamma) {
        Cycle c;
        c.form = Form::Circular;
        c.gamma = gamma;
        c.lambda = std::exp(kTwoPi * gamma);
        return c;
    }

    std::size_t value_size() const {
        return form == Form::Circular ? 3 : values.at(0).size();
    }
};

inline ValidationReport validate_cycle(const Cycle& c, std::size_t space_size) {
    ValidationReport rep;
    auto bad = [&](std::string m) { rep.violations.push_back(std::move(m)); };
    switch (c.form) {
        case Cycle::Form::Constant:
            if (c.values.size() != 1) bad("constant cycle needs exactly one value");
            break;
        case Cycle::Form::Knots:
            if (!(c.lambda > 1.0)) bad("knot cycle needs lambda > 1");
            if (c.values.size() < 2) bad("knot cycle needs >= 2 knots");
            break;
        case Cycle::Form::Circular:
            if (!(c.gamma > 0.0)) bad("circular cycle needs gamma > 0");
            if (std::abs(c.lambda - std::exp(kTwoPi * c.gamma)) >
                1e-9 * c.lambda)
                bad("circular cycle: lambda != exp(2*pi*gamma)");
            if (space_size != 3) bad("circular cycle requires 3 blocks");
            break;
    }
    for (const auto& v : c.values) {
        if (v.size() != space_size) bad("cycle value size does not match space");
        if (!is_prob_vector(v, 1e-9)) bad("cycle value is not a probability vector");
    }
    return rep;
}

inline Vec cycle_value(const Cycle& c, double b) {
    switch (c.form) {
        case Cycle::Form::Constant:
            return c.values[0];
        case Cycle::Form::Circular:
            return circle_z(std::log(b) / c.gamma);
        case Cycle::Form::Knots: {
            const double L = std::log(c.lambda);
            const std::size_t n = c.values.size();
            const double seg = L / double(n);
            double tau = std::fmod(std::log(b), L);
            if (tau < 0.0) tau += L;
            std::size_t m = std::min(std::size_t(tau / seg), n - 1);
            const double frac = (tau - double(m) * seg) / seg;
            const Vec& p0 = c.values[m];
            const Vec& p1 = c.values[(m + 1) % n];
            Vec v(p0.size());
            for (std::size_t a = 0; a < v.size(); ++a)
                v[a] = (1.0 - frac) * p0[a] + frac * p1[a];
            return v;
        }
    }
    throw std::logic_error("cycle_value: bad form");
}

namespace detail {

// integral of (p0 + slope*(t - t0)) * e^t over [lo, hi]; the antiderivative
// of (a + s*t) e^t is (a + s*t - s) e^t.
inline void add_linear_exp_integral(Vec& acc, const Vec& p0, const Vec& slope,
                                    double t0, double lo, double hi) {
    const double elo = std::exp(lo), ehi = std::exp(hi);
    for (std::size_t a = 0; a < acc.size(); ++a) {
        const double c0 = p0[a] - slope[a] * (t0 + 1.0);
        acc[a] += (c0 + slope[a] * hi) * ehi - (c0 + slope[a] * lo) * elo;
    }
}

// Exact one-sided accumulation of a knot cycle over b in (0, e^T]:
// collapse the infinitely many periods below T - L onto the top one
// (each full period contributes a factor 1/lambda less), then sweep the
// top period's segments in closed form.
inline Vec knot_accumulate(const Cycle& c, double T) {
    const double L = std::log(c.lambda);
    const std::size_t n = c.values.size();
    const double seg = L / double(n);
    const std::size_t sz = c.values[0].size();

    // One full period ending at T: integral over [T - L, T].
    Vec period(sz, 0.0);
    double tau0 = std::fmod(T, L);
    if (tau0 < 0.0) tau0 += L;
    // Walk segments of the canonical period [0, L] shifted so that the
    // period window is [T - L, T]; segment m covers tau in [m seg,(m+1) seg].
    for (std::size_t m = 0; m < n; ++m) {
        const Vec& p0 = c.values[m];
        const Vec& p1 = c.values[(m + 1) % n];
        Vec slope(sz);
        for (std::size_t a = 0; a < sz; ++a) slope[a] = (p1[a] - p0[a]) / seg;
        const double a_tau = double(m) * seg, b_tau = double(m + 1) * seg;
        // The window [T - L, T] in tau-space is [tau0 - L, tau0] wrapped;
        // map each segment piece into real t and integrate.
        // Piece below tau0: tau in [a_tau, min(b_tau, tau0)] maps to
        // t = T - tau0 + tau.
        {
            const double lo = a_tau, hi = std::min(b_tau, tau0);
            if (hi > lo) {
                const double shift = T - tau0;
                add_linear_exp_integral(period, p0, slope, shift + a_tau,
                                        shift + lo, shift + hi);
            }
        }
        // Piece above tau0: tau in [max(a_tau, tau0), b_tau] maps to
        // t = T - L - tau0 + tau.
        {
            const double lo = std::max(a_tau, tau0), hi = b_tau;
            if (hi > lo) {
                const double shift = T - L - tau0;
                add_linear_exp_integral(period, p0, slope, shift + a_tau,
                                        shift + lo, shift + hi);
            }
        }
    }
    // Geometric collapse: total = period * lambda/(lambda - 1).
    const double f = c.lambda / (c.lambda - 1.0);
    for (auto& x : period) x *= f;
    return period;
}

}  // namespace detail

// R_B = integral of r_b db over (0, B]; total mass is exactly B.
inline Vec accumulate(const Cycle& c, double B, double rel_tol = 1e-10) {
    if (!(B > 0.0)) throw std::invalid_argument("accumulate: B <= 0");
    switch (c.form) {
        case Cycle::Form::Constant: {
            Vec v = c.values[0];
            for (auto& x : v) x *= B;
            return v;
        }
        case Cycle::Form::Knots:
            return detail::knot_accumulate(c, std::log(B));
        case Cycle::Form::Circular: {
            // Collapse all periods onto (B/lambda, B], then quadrature
            // componentwise over the single remaining period.
            Vec out(3);
            const double f = c.lambda / (c.lambda - 1.0);
            for (int a = 0; a < 3; ++a) {
                auto comp = [&](double b) { return cycle_value(c, b)[a]; };
                out[a] = f * integrate_rel(comp, B / c.lambda, B, rel_tol,
                                           B / 3.0);
            }
            return out;
        }
    }
    throw std::logic_error("accumulate: bad form");
}

struct ScaleSolution {
    double B = 0.0;
    Vec Bi;         // per-coordinate scale, chi_i(R_{B_i}) = B
    Vec residual;   // |chi_i(R_{B_i}) - B| achieved
};

// chi_i(R_x) is continuous, strictly increasing, 0 at 0+ and unbounded,
// so each scale equation has a unique root.
template <class Space>
ScaleSolution solve_scale(const Space& sp, const Cycle& c, double B,
                          double rel_tol = 1e-10) {
    ScaleSolution s;
    s.B = B;
    s.Bi.resize(sp.dim());
    s.residual.resize(sp.dim());
    for (int i = 0; i < sp.dim(); ++i) {
        auto g = [&](double x) { return sp.chi(i, accumulate(c, x)) - B; };
        const double guess = B / std::max(sp.chi(i, cycle_value(c, 1.0)), 1e-12);
        s.Bi[i] = solve_increasing(g, guess, rel_tol * B);
        s.residual[i] = std::abs(g(s.Bi[i]));
    }
    return s;
}

namespace detail {

// b-values inside (lo, hi) where the cycle is not smooth (knot images),
// used as quadrature panel boundaries.
inline std::vector<double> kink_points(const Cycle& c, double lo, double hi) {
    std::vector<double> pts;
    if (c.form != Cycle::Form::Knots || !(hi > lo)) return pts;
    const double L = std::log(c.lambda);
    const std::size_t n = c.values.size();
    const double seg = L / double(n);
    const double tlo = std::log(lo), thi = std::log(hi);
    const long long k0 = (long long)std::floor(tlo / seg) - 1;
    const long long k1 = (long long)std::ceil(thi / seg) + 1;
    for (long long k = k0; k <= k1; ++k) {
        const double t = double(k) * seg;
        if (t > tlo && t < thi) pts.push_back(std::exp(t));
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

// integral over (lo, hi) of f(r_b) db with panels at the cycle's kinks.
// Each panel's tolerance scales with its own magnitude estimate, so the
// routine stays robust whether the integrand is O(1) or O(10^4).
template <class F>
double panel_integrate(const Cycle& c, F&& f, double lo, double hi,
                       double rel_tol) {
    if (!(hi > lo)) return 0.0;
    std::vector<double> pts = kink_points(c, lo, hi);
    pts.insert(pts.begin(), lo);
    pts.push_back(hi);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double a = pts[k], b = pts[k + 1];
        const double scale =
            (std::abs(f(a)) + std::abs(f(0.5 * (a + b)))) * (b - a);
        total += integrate_rel(f, a, b, rel_tol, scale);
    }
    return total;
}

// integral over (0, X] of a lambda-periodic-in-log integrand: collapse onto
// one period (X/lambda, X].  Constant cycles integrate exactly.
template <class F>
double tail_integrate(const Cycle& c, F&& f, double X, double rel_tol) {
    if (!(X > 0.0)) return 0.0;
    if (c.form == Cycle::Form::Constant) return f(X) * X;
    const double fac = c.lambda / (c.lambda - 1.0);
    return fac * panel_integrate(c, f, X / c.lambda, X, rel_tol);
}

}  // namespace detail

// delta(r, B) by the direct segment form: (1/B) * integral over b of
// h({i : b <= B_i}; r_b), split at the sorted B_i.
template <class Space>
double delta_rB(const Space& sp, const Cycle& c, double B,
                double rel_tol = 1e-9) {
    const ScaleSolution s = solve_scale(sp, c, B, rel_tol * 0.1);
    std::vector<int> order(sp.dim());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return s.Bi[a] > s.Bi[b]; });

    double total = 0.0;
    CoordSet active = full_set(sp.dim());
    // Bottom segment (0, B_min] with all coordinates live, then peel off
    // one coordinate at each B_(k) going up.
    double b_lo = 0.0;
    for (int k = sp.dim() - 1; k >= 0; --k) {
        const double b_hi = s.Bi[order[k]];
        auto f = [&](double b) { return sp.entropy(active, cycle_value(c, b)); };
        if (b_lo == 0.0)
            total += detail::tail_integrate(c, f, b_hi, rel_tol);
        else if (b_hi > b_lo)
            total += detail::panel_integrate(c, f, b_lo, b_hi, rel_tol);
        active &= ~(CoordSet(1) << order[k]);
        b_lo = b_hi;
    }
    return total / B;
}

// delta(r, B) by the telescoped form: relabel so B_1 >= ... >= B_d, then
// sum_i (1/B) * integral over (0, B_i] of h(I_<=i | I_<=i-1; r_b).
template <class Space>
double delta_rB_telescoped(const Space& sp, const Cycle& c, double B,
                           double rel_tol = 1e-9) {
    const ScaleSolution s = solve_scale(sp, c, B, rel_tol * 0.1);
    std::vector<int> order(sp.dim());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return s.Bi[a] > s.Bi[b]; });
    double total = 0.0;
    CoordSet I = 0;
    for (int k = 0; k < sp.dim(); ++k) {
        const CoordSet Inext = I | (CoordSet(1) << order[k]);
        auto f = [&](double b) {
            const Vec v = cycle_value(c, b);
            return sp.entropy(Inext, v) - sp.entropy(I, v);
        };
        total += detail::tail_integrate(c, f, s.Bi[order[k]], rel_tol);
        I = Inext;
    }
    return total / B;
}

// Upper bound via the normalized accumulations: sum_i
// h(I_<=i | I_<=i-1; R_{B_i}/B_i) / chi_i(R_{B_i}/B_i).
template <class Space>
double delta_rB_upper(const Space& sp, const Cycle& c, double B,
                      double rel_tol = 1e-9) {
    const ScaleSolution s = solve_scale(sp, c, B, rel_tol * 0.1);
    std::vector<int> order(sp.dim());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return s.Bi[a] > s.Bi[b]; });
    double total = 0.0;
    CoordSet I = 0;
    for (int k = 0; k < sp.dim(); ++k) {
        const int i = order[k];
        Vec Rhat = accumulate(c, s.Bi[i]);
        const double mass = sum(Rhat);
        for (auto& x : Rhat) x /= mass;
        const CoordSet Inext = I | (CoordSet(1) << i);
        total += (sp.entropy(Inext, Rhat) - sp.entropy(I, Rhat)) /
                 sp.chi(i, Rhat);
        I = Inext;
    }
    return total;
}

struct CycleDimConfig {
    int grid_points = 256;
    int refine_basins = 3;
    double refine_rel = 1e-8;  // |dB|/B stopping width for golden section
    double quad_rel = 1e-9;
};

struct CycleDimResult {
    double value = 0.0;
    double argmin_B = 1.0;
    Vec grid_B;
    Vec grid_delta;
    double grid_residual = 0.0;  // max |second difference| near the minimum
    std::vector<double> near_minima;  // grid minima within 1e-8 of the best
};

// delta(r) = inf over one period B in [1, lambda] of delta(r, B):
// log-uniform grid, then golden-section refinement in the best few basins.
template <class Space>
CycleDimResult delta_r(const Space& sp, const Cycle& c,
                       const CycleDimConfig& cfg = {}) {
    CycleDimResult res;
    if (c.form == Cycle::Form::Constant || c.lambda <= 1.0 + 1e-15) {
        res.value = delta_rB(sp, c, 1.0, cfg.quad_rel);
        res.argmin_B = 1.0;
        res.grid_B = {1.0};
        res.grid_delta = {res.value};
        return res;
    }
    const double L = std::log(c.lambda);
    const int n = std::max(cfg.grid_points, 8);
    res.grid_B.resize(n);
    res.grid_delta.resize(n);
    for (int k = 0; k < n; ++k) {
        res.grid_B[k] = std::exp(L * double(k) / double(n));
        res.grid_delta[k] = delta_rB(sp, c, res.grid_B[k], cfg.quad_rel);
    }
    // Local minima on the periodic grid, best first.
    std::vector<int> minima;
    for (int k = 0; k < n; ++k) {
        const double v = res.grid_delta[k];
        if (v <= res.grid_delta[(k + n - 1) % n] &&
            v <= res.grid_delta[(k + 1) % n])
            minima.push_back(k);
    }
    std::sort(minima.begin(), minima.end(), [&](int a, int b) {
        return res.grid_delta[a] < res.grid_delta[b];
    });
    if (int(minima.size()) > cfg.refine_basins)
        minima.resize(cfg.refine_basins);

    res.value = std::numeric_limits<double>::infinity();
    for (int k : minima) {
        const double t0 = L * double(k - 1) / double(n);
        const double t1 = L * double(k + 1) / double(n);
        // In t = log B, absolute width equals relative width in B.
        auto f = [&](double t) { return delta_rB(sp, c, std::exp(t), cfg.quad_rel); };
        const double t_min = golden_section_min(f, t0, t1, cfg.refine_rel);
        const double v = f(t_min);
        if (v < res.value) {
            res.value = v;
            res.argmin_B = std::exp(t_min);
        }
    }
    // Report every grid minimum statistically tied with the best.
    for (int k : minima)
        if (res.grid_delta[k] <= res.value + 1e-8)
            res.near_minima.push_back(res.grid_B[k]);
    // Curvature residual: bounds the refinement error left by the grid.
    int kbest = int(std::min_element(res.grid_delta.begin(), res.grid_delta.end()) -
                    res.grid_delta.begin());
    const double d2 = res.grid_delta[(kbest + 1) % n] +
                      res.grid_delta[(kbest + n - 1) % n] -
                      2.0 * res.grid_delta[kbest];
    res.grid_residual = std::abs(d2);
    return res;
}

// Nondegeneracy: {b : r_b positive on all of E_r} must be dense.  For knot
// cycles the only way to fail is a symbol of E_r vanishing on an entire
// segment (both endpoint knots zero); circular values vanish only at
// isolated angles; constants never fail.
inline bool is_nondegenerate(const Cycle& c) {
    switch (c.form) {
        case Cycle::Form::Constant:
        case Cycle::Form::Circular:
            return true;
        case Cycle::Form::Knots: {
            const std::size_t n = c.values.size();
            const std::size_t sz = c.values[0].size();
            for (std::size_t a = 0; a < sz; ++a) {
                bool in_support = false;
                for (const auto& v : c.values)
                    if (v[a] > 0.0) in_support = true;
                if (!in_support) continue;
                for (std::size_t m = 0; m < n; ++m)
                    if (c.values[m][a] == 0.0 && c.values[(m + 1) % n][a] == 0.0)
                        return false;
            }
            return true;
        }
    }
    return true;
}

}  // namespace spongedim

#endif
