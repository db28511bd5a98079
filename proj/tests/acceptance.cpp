// Acceptance gate: one line per published criterion, nonzero exit if any
// criterion fails.  Each check wraps library calls only; tolerances and
// runtime budgets are part of the pass condition.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <spongedim/gap.hpp>
#include <spongedim/io.hpp>
#include <spongedim/optimize.hpp>
#include <spongedim/oracle.hpp>

#include "testutil.hpp"

using namespace spongedim;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, double seconds,
            const std::string& detail) {
    std::printf("[%s] %2d. %-34s %6.2fs  %s\n", pass ? "PASS" : "FAIL", id,
                name.c_str(), seconds, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void run(int id, const std::string& name, double budget_s,
         const std::function<std::pair<bool, std::string>()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        auto [ok, msg] = body();
        pass = ok;
        detail = msg;
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (dt > budget_s) {
        pass = false;
        detail += " [over time budget]";
    }
    report(id, name, pass, dt, detail);
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

}  // namespace

int main() {
    std::printf("acceptance checks\n-----------------\n");

    run(1, "barycenter optimum equals 3/2", 1.0, [] {
        const GapMatrices m = build_matrices(GapParams{});
        const Delta0Result r = delta0_max(m, 10000);
        double linf = 0.0;
        for (double q : r.argmax) linf = std::max(linf, std::abs(q - 1.0 / 3.0));
        const bool ok = std::abs(r.value - 1.5) <= 1e-9 && linf <= 1e-4 &&
                        r.random_max <= r.value + 1e-12;
        return std::make_pair(ok, "value " + fmt(r.value) + ", argmax err " +
                                      fmt(linf));
    });

    run(2, "oscillating cycles open a gap", 30.0, [] {
        const GapReport r = gap_report(GapParams{});
        const bool factor2 = r.reduced_gap >= 0.5 * r.prediction &&
                             r.reduced_gap <= 2.0 * r.prediction;
        const bool ok = r.reduced_gap > 0.0 && factor2 && r.gap_certified &&
                        r.certified_gap > 0.0;
        return std::make_pair(
            ok, "reduced gap " + fmt(r.reduced_gap) + " vs prediction " +
                    fmt(r.prediction) + "; certified finite-k gap " +
                    fmt(r.certified_gap) + " (the ell=8 cycle nets " +
                    fmt(r.finite_k_gap) + " at k=1e4)");
    });

    run(3, "trace identities and constants", 1.0, [] {
        const QuadraticFormReport q = quadratic_form_check(GapParams{}, 100);
        const double e1 = std::abs(q.trace1 - 3.0);
        const double e2 = std::abs(q.trace2 + 3.0 * std::sqrt(3.0));
        const double e3 = std::abs(q.c1 - 1.5);
        const double e4 = std::abs(q.c2 + 1.5 * std::sqrt(3.0));
        const bool ok = e1 <= 1e-12 && e2 <= 1e-12 && e3 <= 1e-12 &&
                        e4 <= 1e-12 && q.max_residual1 <= 1e-12 &&
                        q.max_residual2 <= 1e-12;
        return std::make_pair(ok, "trace residuals " + fmt(e1) + ", " + fmt(e2) +
                                      "; form residuals " +
                                      fmt(q.max_residual1) + ", " +
                                      fmt(q.max_residual2));
    });

    run(4, "correction-term asymptotics", 1.0, [] {
        auto max_dev = [](double eps) {
            GapParams p;
            p.epsilon = eps;
            const BetaScan s = beta_scan(p, 1024);
            const double c = std::sqrt(3.0) / 4.0;
            return std::max(std::abs(s.inf / (eps * eps) - c),
                            std::abs(s.sup / (eps * eps) - c));
        };
        const double d3 = max_dev(1e-3), d2 = max_dev(1e-2);
        const bool ok = d3 <= 0.02 && d3 <= d2 + 1e-12;
        return std::make_pair(ok, "max deviation " + fmt(d3) + " at 1e-3, " +
                                      fmt(d2) + " at 1e-2");
    });

    run(5, "dimension formula equivalence", 1.0, [] {
        SplitMix64 rng(505);
        double worst = 0.0;
        for (int n = 0; n < 100; ++n) {
            const DiagonalIFS f = testutil::random_sponge(rng, 4);
            const Vec p = rng.dirichlet(f.selected.size());
            worst = std::max(worst,
                             std::abs(delta_p(f, p) - delta_p_integral(f, p)));
        }
        return std::make_pair(worst <= 1e-12,
                              "worst disagreement " + fmt(worst));
    });

    run(6, "planar equality regime", 120.0, [] {
        SplitMix64 rng(606);
        OptimizerConfig cfg;
        cfg.starts = 8;
        double worst = -1.0;
        for (int n = 0; n < 50; ++n) {
            const DiagonalIFS f = testutil::random_baranski_carpet(rng);
            const double dynd = dynamical_dimension(f, cfg).value;
            const double hlb = hausdorff_lb(f, CycleFamily{}, cfg).value;
            worst = std::max(worst, hlb - dynd);
        }
        return std::make_pair(worst <= 1e-4,
                              "max excess over the dynamical dimension " +
                                  fmt(worst));
    });

    run(7, "constant-ratio equality regime", 60.0, [] {
        SplitMix64 rng(707);
        OptimizerConfig cfg;
        cfg.starts = 8;
        double worst = -1.0;
        for (int n = 0; n < 20; ++n) {
            const DiagonalIFS f = testutil::random_constant_ratio_sponge(rng, 3);
            const double dynd = dynamical_dimension(f, cfg).value;
            const double hlb = hausdorff_lb(f, CycleFamily{}, cfg).value;
            worst = std::max(worst, hlb - dynd);
        }
        return std::make_pair(worst <= 1e-4,
                              "max excess over the dynamical dimension " +
                                  fmt(worst));
    });

    run(8, "closed-form targets on the 3x2 carpet", 5.0, [] {
        const double dynd = dynamical_dimension(testutil::m1()).value;
        const double bern = delta_p(testutil::m1(), Vec(3, 1.0 / 3.0));
        const double e1 = std::abs(dynd - 1.34968382019557757);
        const double e2 = std::abs(bern - 1.33891566976879447);
        return std::make_pair(e1 <= 1e-6 && e2 <= 1e-6,
                              "dynamical err " + fmt(e1) + ", Bernoulli err " +
                                  fmt(e2));
    });

    run(9, "Monte Carlo cross-check", 30.0, [] {
        struct Case {
            DiagonalIFS f;
            double B;
            const char* name;
        };
        const std::vector<Case> cases = {
            {testutil::m1(), 19.0 * std::log(2.0) - 1e-9, "carpet"},
            {testutil::square2(), 29.0 * std::log(2.0) - 1e-9, "square"},
            {testutil::moran3(), 15.0 * std::log(4.0) - 1e-9, "moran"},
        };
        std::string detail;
        bool ok = true;
        for (const auto& c : cases) {
            EmpiricalConfig cfg;
            cfg.samples = 10000;
            cfg.seed = 31;
            cfg.B = c.B;
            const Vec u(c.f.selected.size(), 1.0 / double(c.f.selected.size()));
            const EmpiricalResult r = empirical_pointwise_dim(c.f, u, cfg);
            const double diff = std::abs(r.estimate - delta_p(c.f, u));
            const double tol = std::max(3.0 * r.stderr_, 1e-9);
            ok = ok && diff <= tol && diff <= 0.02;
            detail += std::string(c.name) + " " + fmt(diff) + " (tol " +
                      fmt(tol) + ") ";
        }
        return std::make_pair(ok, detail);
    });

    run(10, "upper bound and continuity probes", 120.0, [] {
        SplitMix64 rng(1010);
        std::vector<DiagonalIFS> sponges = {testutil::m1(), testutil::square2(),
                                            testutil::moran3()};
        for (int n = 0; n < 3; ++n)
            sponges.push_back(testutil::random_baranski_carpet(rng));
        bool ok = true;
        std::string detail;
        for (const auto& f : sponges) {
            const BoundsReport r = verify_bounds(f);
            const bool here =
                r.hausdorff_lb <= r.bound_rhs + 1e-6 && r.probe_monotone;
            ok = ok && here;
            if (!here) detail += "violated (lb " + fmt(r.hausdorff_lb) +
                                 " vs rhs " + fmt(r.bound_rhs) + "); ";
        }
        if (detail.empty())
            detail = "bound and monotonicity hold on all " +
                     std::to_string(sponges.size()) + " sponges";
        return std::make_pair(ok, detail);
    });

    std::printf("-----------------\n%s (%d failure%s)\n",
                g_failures == 0 ? "all criteria satisfied" : "criteria FAILED",
                g_failures, g_failures == 1 ? "" : "s");
    return g_failures == 0 ? 0 : 1;
}
