#ifndef SPONGEDIM_OPTIMIZE_HPP
#define SPONGEDIM_OPTIMIZE_HPP

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "common.hpp"
#include "cycles.hpp"
#include "ifs.hpp"
#include "measures.hpp"
#include "rng.hpp"

namespace spongedim {

inline int thread_count() {
    if (const char* env = std::getenv("SPONGE_DIM_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(hc) : 1;
}

// Static-partition parallel map; every index owns its output slot, so the
// result is independent of scheduling.
template <class F>
void parallel_for(int n, F&& body) {
    const int workers = std::min(thread_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < n; i += workers) body(i);
        });
    for (auto& t : pool) t.join();
}

struct OptimizerConfig {
    int starts = 16;
    int max_iters = 4000;
    double tol = 1e-10;
    std::uint64_t seed = 0;
};

struct DimensionReport {
    std::string quantity;
    double value = 0.0;
    Vec argmax;                     // optimizing weights (E order or block q)
    double argmin_B = 0.0;          // cycle quantities only
    double residual = 0.0;          // optimizer spread or grid curvature
    int iterations = 0;
    int starts = 0;
    std::vector<std::string> flags;
    std::vector<std::pair<std::string, double>> checks;
    std::vector<std::pair<int, double>> trace;  // (iteration, best value)
};

namespace detail {

struct NmResult {
    Vec x;            // best simplex point (probability vector)
    double value = -std::numeric_limits<double>::infinity();
    double spread = 0.0;
    int iterations = 0;
    std::vector<std::pair<int, double>> trace;
};

// Nelder-Mead maximization over the probability simplex on `n` weights.
// Points live in R^(n-1) (last weight implied) and every evaluation
// projects onto the simplex, which handles the boundary gracefully.
inline NmResult nelder_mead_simplex(
    const std::function<double(const Vec&)>& F, const Vec& start, int max_iters,
    double tol, bool keep_trace = false) {
    const int n = int(start.size());
    const int m = n - 1;  // free coordinates
    auto to_prob = [n](const Vec& y) {
        Vec p(n);
        double s = 0.0;
        for (int i = 0; i + 1 < n; ++i) s += (p[i] = y[i]);
        p[n - 1] = 1.0 - s;
        return project_simplex(std::move(p));
    };
    auto eval = [&](const Vec& y) { return F(to_prob(y)); };

    NmResult res;
    if (m == 0) {
        res.x = {1.0};
        res.value = F(res.x);
        return res;
    }
    std::vector<Vec> pts(m + 1, Vec(start.begin(), start.end() - 1));
    for (int i = 0; i < m; ++i) pts[i + 1][i] += 0.1;
    Vec fv(m + 1);
    for (int i = 0; i <= m; ++i) fv[i] = eval(pts[i]);

    std::vector<int> order(m + 1);
    int it = 0;
    for (; it < max_iters; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return fv[a] > fv[b]; });
        const double spread = fv[order[0]] - fv[order[m]];
        if (keep_trace && it % 16 == 0) res.trace.emplace_back(it, fv[order[0]]);
        if (spread <= tol) break;

        const int worst = order[m];
        Vec centroid(m, 0.0);
        for (int k = 0; k < m; ++k)
            for (int i = 0; i < m; ++i) centroid[i] += pts[order[k]][i] / m;

        auto blend = [&](double alpha) {
            Vec y(m);
            for (int i = 0; i < m; ++i)
                y[i] = centroid[i] + alpha * (pts[worst][i] - centroid[i]);
            return y;
        };
        const Vec refl = blend(-1.0);
        const double f_refl = eval(refl);
        if (f_refl > fv[order[0]]) {
            const Vec expd = blend(-2.0);
            const double f_expd = eval(expd);
            if (f_expd > f_refl) { pts[worst] = expd; fv[worst] = f_expd; }
            else { pts[worst] = refl; fv[worst] = f_refl; }
        } else if (f_refl > fv[order[m - 1]]) {
            pts[worst] = refl;
            fv[worst] = f_refl;
        } else {
            const Vec ctr = blend(f_refl > fv[worst] ? -0.5 : 0.5);
            const double f_ctr = eval(ctr);
            if (f_ctr > std::max(f_refl, fv[worst])) {
                pts[worst] = ctr;
                fv[worst] = f_ctr;
            } else {
                // Shrink toward the best vertex.
                for (int k = 1; k <= m; ++k) {
                    const int idx = order[k];
                    for (int i = 0; i < m; ++i)
                        pts[idx][i] =
                            0.5 * (pts[idx][i] + pts[order[0]][i]);
                    fv[idx] = eval(pts[idx]);
                }
            }
        }
    }
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return fv[a] > fv[b]; });
    res.x = to_prob(pts[order[0]]);
    res.value = fv[order[0]];
    res.spread = fv[order[0]] - fv[order[m]];
    res.iterations = it;
    if (keep_trace) res.trace.emplace_back(it, res.value);
    return res;
}

// Multi-start driver: barycenter first, then Dirichlet(1,...,1) draws from
// per-start counter streams.  Starts run concurrently; the merge is by value
// with index tie-break, so reports are reproducible for a fixed seed.
inline NmResult multistart_max(const std::function<double(const Vec&)>& F,
                               std::size_t n, const OptimizerConfig& cfg,
                               const std::vector<Vec>& extra_starts = {}) {
    std::vector<Vec> starts;
    starts.emplace_back(Vec(n, 1.0 / double(n)));
    for (const auto& s : extra_starts) starts.push_back(s);
    for (int s = int(starts.size()); s < cfg.starts; ++s) {
        SplitMix64 rng(cfg.seed, std::uint64_t(s));
        starts.push_back(rng.dirichlet(n));
    }
    std::vector<NmResult> results(starts.size());
    parallel_for(int(starts.size()), [&](int i) {
        results[i] = nelder_mead_simplex(F, starts[i], cfg.max_iters, cfg.tol,
                                         /*keep_trace=*/i == 0);
    });
    int best = 0;
    for (int i = 1; i < int(results.size()); ++i)
        if (results[i].value > results[best].value) best = i;
    NmResult out = results[best];
    out.trace = results[0].trace;
    int iters = 0;
    for (const auto& r : results) iters += r.iterations;
    out.iterations = iters;
    return out;
}

}  // namespace detail

// sup over Bernoulli measures of delta(p); flags the result as an upper
// bound if the argmax measure fails the goodness predicate.
inline DimensionReport dynamical_dimension(const DiagonalIFS& ifs,
                                           const OptimizerConfig& cfg = {}) {
    const ExplicitSpace sp(ifs);
    auto F = [&](const Vec& p) { return detail::delta_sorted(sp, p); };
    auto nm = detail::multistart_max(F, sp.size(), cfg);
    DimensionReport rep;
    rep.quantity = "dynamical_dimension";
    rep.value = nm.value;
    rep.argmax = nm.x;
    rep.residual = nm.spread;
    rep.iterations = nm.iterations;
    rep.starts = cfg.starts;
    rep.trace = nm.trace;
    if (!is_good_measure(ifs, nm.x))
        rep.flags.push_back("argmax measure not good: value is an upper bound");
    return rep;
}

inline DimensionReport dynamical_dimension(const BlockIFS& b,
                                           const OptimizerConfig& cfg = {}) {
    const BlockSpace sp(b);
    auto F = [&](const Vec& q) { return detail::delta_sorted(sp, q); };
    auto nm = detail::multistart_max(F, sp.size(), cfg);
    DimensionReport rep;
    rep.quantity = "dynamical_dimension";
    rep.value = nm.value;
    rep.argmax = nm.x;
    rep.residual = nm.spread;
    rep.iterations = nm.iterations;
    rep.starts = cfg.starts;
    rep.trace = nm.trace;
    return rep;
}

// The search family for Hausdorff lower bounds: constant cycles always,
// optionally piecewise-log-linear cycles and (blocks only) circular cycles.
struct CycleFamily {
    bool constants = true;
    std::vector<double> knot_lambdas = {2.0};
    int knot_count = 3;
    std::vector<double> circular_gammas;  // block sponges only
};

namespace detail {

// Goodness of a cycle: every normalized accumulation R_B/B must be a good
// measure; checked on a 64-point log grid over one period.
inline bool cycle_is_good(const DiagonalIFS& ifs, const Cycle& c) {
    const int grid = 64;
    const double L = std::log(std::max(c.lambda, 1.0 + 1e-12));
    for (int k = 0; k < grid; ++k) {
        const double B = std::exp(L * double(k) / grid);
        Vec R = accumulate(c, B);
        const double mass = sum(R);
        for (auto& x : R) x /= mass;
        if (!is_good_measure(ifs, R)) return false;
    }
    return true;
}

template <class Space>
Cycle knots_from_flat(const Space&, std::size_t n_values, std::size_t sz,
                      double lambda, const Vec& flat) {
    std::vector<Vec> vals(n_values);
    for (std::size_t m = 0; m < n_values; ++m) {
        Vec v(flat.begin() + m * sz, flat.begin() + (m + 1) * sz);
        vals[m] = project_simplex(std::move(v));
    }
    return Cycle::knots(lambda, std::move(vals));
}

// Unconstrained Nelder-Mead over a flat vector (constraints are handled by
// projection inside the objective).
inline std::pair<double, Vec> nelder_mead_flat(
    const std::function<double(const Vec&)>& F, const Vec& start, double step,
    int max_iters, double tol) {
    const int dims = int(start.size());
    std::vector<Vec> pts(dims + 1, start);
    for (int k = 0; k < dims; ++k) pts[k + 1][k] += step;
    Vec fv(dims + 1);
    for (int k = 0; k <= dims; ++k) fv[k] = F(pts[k]);
    std::vector<int> order(dims + 1);
    for (int it = 0; it < max_iters; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return fv[a] > fv[b]; });
        if (fv[order[0]] - fv[order[dims]] <= tol) break;
        const int worst = order[dims];
        Vec centroid(dims, 0.0);
        for (int k = 0; k < dims; ++k)
            for (int j = 0; j < dims; ++j)
                centroid[j] += pts[order[k]][j] / dims;
        auto blend = [&](double alpha) {
            Vec y(dims);
            for (int j = 0; j < dims; ++j)
                y[j] = centroid[j] + alpha * (pts[worst][j] - centroid[j]);
            return y;
        };
        const Vec refl = blend(-1.0);
        const double fr = F(refl);
        if (fr > fv[order[0]]) {
            const Vec ex = blend(-2.0);
            const double fe = F(ex);
            if (fe > fr) { pts[worst] = ex; fv[worst] = fe; }
            else { pts[worst] = refl; fv[worst] = fr; }
        } else if (fr > fv[order[dims - 1]]) {
            pts[worst] = refl;
            fv[worst] = fr;
        } else {
            const Vec ctr = blend(fr > fv[worst] ? -0.5 : 0.5);
            const double fc = F(ctr);
            if (fc > std::max(fr, fv[worst])) {
                pts[worst] = ctr;
                fv[worst] = fc;
            } else {
                for (int k = 1; k <= dims; ++k) {
                    const int idx = order[k];
                    for (int j = 0; j < dims; ++j)
                        pts[idx][j] = 0.5 * (pts[idx][j] + pts[order[0]][j]);
                    fv[idx] = F(pts[idx]);
                }
            }
        }
    }
    int bi = 0;
    for (int k = 1; k <= dims; ++k)
        if (fv[k] > fv[bi]) bi = k;
    return {fv[bi], pts[bi]};
}

}  // namespace detail

// Certified lower bound for the Hausdorff dimension: maximize delta(r) over
// the family.  Search runs with a cheap delta(r) evaluation; the winning
// cycle is re-evaluated at full precision.  Only nondegenerate, good cycles
// make a certified claim; others are flagged and skipped in favor of the
// best certified candidate.
template <class IfsT>
DimensionReport hausdorff_lb(const IfsT& ifs, const CycleFamily& family = {},
                             const OptimizerConfig& cfg = {}) {
    using SpaceT = std::conditional_t<std::is_same_v<IfsT, BlockIFS>,
                                      BlockSpace, ExplicitSpace>;
    const SpaceT sp(ifs);
    const std::size_t sz = sp.size();

    DimensionReport rep;
    rep.quantity = "hausdorff_lower_bound";
    rep.starts = cfg.starts;

    const CycleDimConfig coarse{32, 1, 1e-4, 1e-6};
    const CycleDimConfig fine{256, 3, 1e-8, 1e-9};

    // Constant cycles reduce to the Bernoulli optimum.
    DimensionReport dynd = dynamical_dimension(ifs, cfg);
    Cycle best_cycle = Cycle::constant(dynd.argmax);
    double best_value = dynd.value;
    rep.checks.emplace_back("dynamical_dimension", dynd.value);

    auto consider = [&](const Cycle& c, double value) {
        if (value > best_value) {
            best_value = value;
            best_cycle = c;
        }
    };

    const int knot_starts = std::max(2, cfg.starts / 4);
    for (double lambda : family.knot_lambdas) {
        const std::size_t nk = std::size_t(std::max(family.knot_count, 2));
        auto F = [&](const Vec& flat) {
            const Cycle c = detail::knots_from_flat(sp, nk, sz, lambda, flat);
            return delta_r(sp, c, coarse).value;
        };
        // Start at the constant optimum plus random knot sets.
        std::vector<Vec> starts;
        {
            Vec flat;
            for (std::size_t m = 0; m < nk; ++m)
                flat.insert(flat.end(), dynd.argmax.begin(), dynd.argmax.end());
            starts.push_back(std::move(flat));
        }
        for (int s = 1; s < knot_starts; ++s) {
            SplitMix64 rng(cfg.seed ^ 0xC1C1E5ull, std::uint64_t(s));
            Vec flat;
            for (std::size_t m = 0; m < nk; ++m) {
                Vec v = rng.dirichlet(sz);
                flat.insert(flat.end(), v.begin(), v.end());
            }
            starts.push_back(std::move(flat));
        }
        std::vector<std::pair<double, Vec>> results(starts.size());
        parallel_for(int(starts.size()), [&](int i) {
            // Proposals are projected knot-by-knot inside the objective, so
            // the flat concatenation is unconstrained.
            results[i] = detail::nelder_mead_flat(F, starts[i], 0.15,
                                                  cfg.max_iters / 8, 1e-7);
        });
        for (const auto& [val, flat] : results) {
            const Cycle c = detail::knots_from_flat(sp, nk, sz, lambda, flat);
            const double vfine = delta_r(sp, c, fine).value;
            (void)val;
            consider(c, vfine);
        }
    }

    if constexpr (std::is_same_v<IfsT, BlockIFS>) {
        for (double gamma : family.circular_gammas) {
            if (sz != 3) break;
            const Cycle c = Cycle::circular(gamma);
            consider(c, delta_r(sp, c, fine).value);
        }
    }

    // Certification: the claimed bound needs a nondegenerate good cycle.
    bool certified = is_nondegenerate(best_cycle);
    if constexpr (std::is_same_v<IfsT, DiagonalIFS>) {
        certified = certified && detail::cycle_is_good(ifs, best_cycle);
    }
    if (!certified) {
        rep.flags.push_back(
            "best cycle degenerate or not good: upper bound only; "
            "falling back to the constant-cycle bound");
        best_cycle = Cycle::constant(dynd.argmax);
        best_value = dynd.value;
    }

    const CycleDimResult final_eval = delta_r(sp, best_cycle, fine);
    rep.value = std::max(final_eval.value, dynd.value);
    rep.argmax = best_cycle.form == Cycle::Form::Constant ? best_cycle.values[0]
                                                          : Vec{};
    rep.argmin_B = final_eval.argmin_B;
    rep.residual = final_eval.grid_residual;
    rep.iterations = dynd.iterations;
    if (best_cycle.form == Cycle::Form::Knots)
        rep.flags.push_back("optimum attained by a knot cycle");
    if (best_cycle.form == Cycle::Form::Circular)
        rep.flags.push_back("optimum attained by a circular cycle");
    return rep;
}

struct BoundsReport {
    double dynd = 0.0;
    double hausdorff_lb = 0.0;
    double bound_rhs = 0.0;  // max(1, d-1) * dynd
    bool bound_holds = false;
    std::vector<double> etas;
    std::vector<double> probe_deltas;  // |DynD(perturbed) - DynD| per eta
    bool probe_monotone = false;
};

// Perturb every ratio (multiplicative shrink) and offset (shift within the
// available slack) along a fixed direction scaled by eta; stays valid for
// any eta in [0, 1/2].
inline DiagonalIFS perturb(const DiagonalIFS& ifs, double eta,
                           std::uint64_t seed) {
    DiagonalIFS out = ifs;
    SplitMix64 rng(seed, 0xBEEF);
    for (auto& maps : out.bases)
        for (auto& m : maps) {
            const double xi = rng.uniform(0.2, 1.0);
            const double zeta = rng.uniform(-1.0, 1.0);
            m.ratio *= (1.0 - eta * xi);
            const double slack =
                zeta > 0 ? 1.0 - m.image_hi() : m.image_lo();
            m.offset += eta * zeta * slack;
        }
    return out;
}

// Checks that the cycle lower bound respects the dimension upper bound,
// plus a numerical continuity probe.
inline BoundsReport verify_bounds(const DiagonalIFS& ifs,
                                  const OptimizerConfig& cfg = {},
                                  const CycleFamily& family = {}) {
    BoundsReport rep;
    rep.dynd = dynamical_dimension(ifs, cfg).value;
    rep.hausdorff_lb = hausdorff_lb(ifs, family, cfg).value;
    rep.bound_rhs = std::max(1.0, double(ifs.d - 1)) * rep.dynd;
    rep.bound_holds = rep.hausdorff_lb <= rep.bound_rhs + 1e-6;
    rep.etas = {1e-2, 1e-3, 1e-4};
    for (double eta : rep.etas) {
        const DiagonalIFS pert = perturb(ifs, eta, cfg.seed + 17);
        rep.probe_deltas.push_back(
            std::abs(dynamical_dimension(pert, cfg).value - rep.dynd));
    }
    rep.probe_monotone = rep.probe_deltas[0] > rep.probe_deltas[1] &&
                         rep.probe_deltas[1] > rep.probe_deltas[2];
    return rep;
}

}  // namespace spongedim

#endif
