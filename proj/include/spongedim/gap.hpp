#ifndef SPONGEDIM_GAP_HPP
#define SPONGEDIM_GAP_HPP

// Explicit three-dimensional sponge family whose Hausdorff dimension
// strictly exceeds its dynamical dimension, together with the circle-cycle
// machinery that certifies the gap numerically.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "common.hpp"
#include "cycles.hpp"
#include "ifs.hpp"
#include "measures.hpp"
#include "optimize.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "roots.hpp"

namespace spongedim {

using Mat3 = std::array<std::array<double, 3>, 3>;

struct GapParams {
    double epsilon = 0.05;
    int ell = 8;      // gamma = log 2 / (ell * rho), rho = 2*pi
    double k = 1e4;   // construction scale (real, not necessarily integer)
    Mat3 Ktilde{{{1, 0, -1}, {-1, 1, 0}, {0, -1, 1}}};
    Mat3 Ytilde{{{1, -1, 0}, {0, 1, -1}, {-1, 0, 1}}};

    double rho() const { return kTwoPi; }
    double gamma() const { return std::log(2.0) / (double(ell) * rho()); }
};

inline std::vector<std::string> validate(const GapParams& p) {
    std::vector<std::string> v;
    if (!(p.epsilon > 0.0)) v.push_back("epsilon must be positive");
    if (p.ell < 1) v.push_back("ell must be a positive integer");
    if (!(p.k > 0.0)) v.push_back("k must be positive");
    for (int i = 0; i < 3; ++i) {
        double rk = 0.0, ry = 0.0;
        for (int j = 0; j < 3; ++j) {
            rk += p.Ktilde[i][j];
            ry += p.Ytilde[i][j];
        }
        if (std::abs(rk) > 1e-14)
            v.push_back("Ktilde row " + std::to_string(i) +
                        " does not sum to zero");
        if (std::abs(ry) > 1e-14)
            v.push_back("Ytilde row " + std::to_string(i) +
                        " does not sum to zero");
    }
    for (int j = 0; j < 3; ++j) {
        double ck = 0.0;
        for (int i = 0; i < 3; ++i) ck += p.Ktilde[i][j];
        if (std::abs(ck) > 1e-14)
            v.push_back("Ktilde column " + std::to_string(j) +
                        " does not sum to zero");
    }
    return v;
}

// Rows are indexed 0..2 here; the defining scale factors are 2^(i+1) so
// that row r satisfies H_r . u = 2^r and X_r . u = 2^(r+1) with
// u = (1/3, 1/3, 1/3).
struct GapMatrices {
    Mat3 H{}, X{}, K{}, Y{};
    double epsilon = 0.0;
};

inline GapMatrices build_matrices(const GapParams& p) {
    if (auto v = validate(p); !v.empty()) throw std::invalid_argument(v.front());
    GapMatrices m;
    m.epsilon = p.epsilon;
    for (int i = 0; i < 3; ++i) {
        const double s = std::exp2(i + 1);
        for (int j = 0; j < 3; ++j) {
            m.K[i][j] = p.epsilon * p.Ktilde[i][j];
            m.Y[i][j] = 1.0 + p.epsilon * p.Ytilde[i][j];
            m.X[i][j] = s * m.Y[i][j];
            m.H[i][j] = s * m.K[i][j] + 0.5 * m.X[i][j];
        }
    }
    auto at = [](int i, int j) {
        return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
    };
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (!(m.H[i][j] > 0.0))
                throw std::invalid_argument("epsilon too large: H" + at(i, j) +
                                            " <= 0");
            if (!(m.H[i][j] < m.X[i][j]))
                throw std::invalid_argument("epsilon too large: H" + at(i, j) +
                                            " >= X" + at(i, j));
        }
    for (int i = 0; i + 1 < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (!(m.X[i][j] < m.X[i + 1][j]))
                throw std::invalid_argument(
                    "epsilon too large: X" + at(i + 1, j) + " <= X" + at(i, j));
    for (int i = 0; i < 3; ++i) {
        double hu = 0.0, xu = 0.0;
        for (int j = 0; j < 3; ++j) {
            hu += m.H[i][j] / 3.0;
            xu += m.X[i][j] / 3.0;
        }
        if (std::abs(hu - std::exp2(i)) > 1e-14 ||
            std::abs(xu - std::exp2(i + 1)) > 1e-14)
            throw std::logic_error("row-average identity violated");
    }
    return m;
}

// The driving circle: z(t) walks the simplex around u, Z is its mean-zero
// antiderivative, and Z' = N Z for the cross-product matrix N of
// v = -sqrt(3) u.
struct CircleData {
    double rho = kTwoPi;
    Vec z(double t) const { return circle_z(t); }
    Vec Z(double t) const { return circle_Z(t); }
    Vec Zp(double t) const { return circle_Zp(t); }
    std::array<double, 3> v() const {
        const double c = -1.0 / std::sqrt(3.0);
        return {c, c, c};
    }
    Mat3 cross_matrix() const {
        const auto w = v();
        return {{{0.0, -w[2], w[1]}, {w[2], 0.0, -w[0]}, {-w[1], w[0], 0.0}}};
    }
    // Orthonormal basis of the zero-sum plane.
    std::array<Vec, 2> plane_basis() const {
        const double s2 = std::sqrt(2.0), s6 = std::sqrt(6.0);
        return {Vec{1.0 / s2, -1.0 / s2, 0.0},
                Vec{1.0 / s6, 1.0 / s6, -2.0 / s6}};
    }
};

struct QuadraticFormReport {
    double trace1 = 0.0;  // sum_i <Ktilde_i, Ytilde_i>
    double trace2 = 0.0;  // sum_i <Ktilde_i N, Ytilde_i>
    double c1 = 0.0;      // trace1 / 2 (restriction to the zero-sum plane)
    double c2 = 0.0;
    double max_residual1 = 0.0;
    double max_residual2 = 0.0;
    int points = 0;
};

// Both forms are scalar multiples of |q|^2 on the zero-sum plane; the
// constants come from the plane trace (half the full trace, since both
// forms kill the u direction), then get confirmed pointwise at random q.
inline QuadraticFormReport quadratic_form_check(const GapParams& p,
                                                int points = 100,
                                                std::uint64_t seed = 2024) {
    const CircleData cd;
    const Mat3 N = cd.cross_matrix();
    QuadraticFormReport rep;
    rep.points = points;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            rep.trace1 += p.Ktilde[i][j] * p.Ytilde[i][j];
            double kn = 0.0;
            for (int m = 0; m < 3; ++m) kn += p.Ktilde[i][m] * N[m][j];
            rep.trace2 += kn * p.Ytilde[i][j];
        }
    rep.c1 = rep.trace1 / 2.0;
    rep.c2 = rep.trace2 / 2.0;

    SplitMix64 rng(seed, 0x0F0F);
    for (int n = 0; n < points; ++n) {
        // Random unit vector in the zero-sum plane.
        const double ang = rng.uniform(0.0, kTwoPi);
        const auto [e1, e2] = cd.plane_basis();
        Vec q(3);
        for (int j = 0; j < 3; ++j)
            q[j] = std::cos(ang) * e1[j] + std::sin(ang) * e2[j];
        Vec Nq(3, 0.0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) Nq[i] += N[i][j] * q[j];
        double q1 = 0.0, q2 = 0.0;
        for (int i = 0; i < 3; ++i) {
            double kq = 0.0, yq = 0.0, knq = 0.0;
            for (int j = 0; j < 3; ++j) {
                kq += p.Ktilde[i][j] * q[j];
                yq += p.Ytilde[i][j] * q[j];
                knq += p.Ktilde[i][j] * Nq[j];
            }
            q1 += kq * yq;
            q2 += knq * yq;
        }
        rep.max_residual1 = std::max(rep.max_residual1, std::abs(q1 - rep.c1));
        rep.max_residual2 = std::max(rep.max_residual2, std::abs(q2 - rep.c2));
    }
    return rep;
}

// Unique s with t = s + Y_i . Z(s).  Monotone because
// d/ds [s + Y_i . Z(s)] = sum_j Y[i][j] z_j(s) >= min_j Y[i][j] > 0.
inline double solve_t0(const GapParams& p, double t, int i) {
    auto g = [&](double s) {
        const Vec Z = circle_Z(s);
        double yz = 0.0;
        for (int j = 0; j < 3; ++j)
            yz += (1.0 + p.epsilon * p.Ytilde[i][j]) * Z[j];
        return -yz;
    };
    const double slack = 0.6 * p.epsilon + 1e-9;
    return solve_fixed_point(g, t, slack, 1e-13);
}

inline double beta(const GapParams& p, double t) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Vec Z = circle_Z(solve_t0(p, t, i));
        double kz = 0.0;
        for (int j = 0; j < 3; ++j) kz += p.Ktilde[i][j] * Z[j];
        s += p.epsilon * kz;
    }
    return s;
}

struct BetaScan {
    double inf = 0.0, sup = 0.0;
    double argmin_t = 0.0;
};

inline BetaScan beta_scan(const GapParams& p, int grid = 1024) {
    BetaScan out;
    out.inf = std::numeric_limits<double>::infinity();
    out.sup = -out.inf;
    for (int g = 0; g < grid; ++g) {
        const double t = kTwoPi * double(g) / grid;
        const double b = beta(p, t);
        if (b < out.inf) {
            out.inf = b;
            out.argmin_t = t;
        }
        out.sup = std::max(out.sup, b);
    }
    return out;
}

// The sponge family member at scale k: a 3x3 block system on a base-3 grid
// with N[i][j] = floor(e^{k H[i][j]}) maps of log-ratio -k X[i][j].
inline BlockIFS build_gap_ifs(const GapParams& p) {
    const GapMatrices m = build_matrices(p);
    BlockIFS b;
    b.d = 3;
    b.J = 3;
    b.logN.assign(3, Vec(3));
    b.X.assign(3, Vec(3));
    const double logJ = std::log(3.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            b.logN[i][j] = log_floor_exp(p.k * m.H[i][j]);
            b.X[i][j] = p.k * m.X[i][j];
            if (!(b.logN[i][j] - b.X[i][j] < -logJ))
                throw std::invalid_argument(
                    "k too small: N*r >= 1/3 in coordinate " +
                    std::to_string(i) + ", block " + std::to_string(j));
        }
    if (auto v = validate(b); !v.ok())
        throw std::logic_error(v.violations.front());
    return b;
}

// sum_i H_i.q / X_i.q, the k -> infinity Bernoulli objective.
inline double reduced_objective(const GapMatrices& m, const Vec& q) {
    double val = 0.0;
    for (int i = 0; i < 3; ++i) {
        double hq = 0.0, xq = 0.0;
        for (int j = 0; j < 3; ++j) {
            hq += m.H[i][j] * q[j];
            xq += m.X[i][j] * q[j];
        }
        val += hq / xq;
    }
    return val;
}

struct Delta0Result {
    double value = 0.0;
    Vec argmax;
    double random_max = 0.0;  // best of the random sweep alone
    int random_points = 0;
};

// max_q of the reduced objective: random sweep, then Nelder-Mead, then a
// Newton polish on the zero-sum plane using the exact gradient.
inline Delta0Result delta0_max(const GapMatrices& m, int random_points = 10000,
                               const OptimizerConfig& cfg = {}) {
    auto F0 = [&](const Vec& q) { return reduced_objective(m, q); };
    Delta0Result out;
    out.random_points = random_points;
    out.random_max = -std::numeric_limits<double>::infinity();
    SplitMix64 rng(cfg.seed, 0xD17A);
    for (int n = 0; n < random_points; ++n)
        out.random_max = std::max(out.random_max, F0(rng.dirichlet(3)));

    auto nm = detail::multistart_max(F0, 3, cfg);
    Vec q = nm.x;

    const CircleData cd;
    const auto [e1, e2] = cd.plane_basis();
    auto grad2 = [&](const Vec& w) {
        Vec g(3, 0.0);
        for (int i = 0; i < 3; ++i) {
            double hq = 0.0, xq = 0.0;
            for (int j = 0; j < 3; ++j) {
                hq += m.H[i][j] * w[j];
                xq += m.X[i][j] * w[j];
            }
            for (int j = 0; j < 3; ++j)
                g[j] += (m.H[i][j] * xq - hq * m.X[i][j]) / (xq * xq);
        }
        std::array<double, 2> out2{0.0, 0.0};
        for (int j = 0; j < 3; ++j) {
            out2[0] += g[j] * e1[j];
            out2[1] += g[j] * e2[j];
        }
        return out2;
    };
    for (int iter = 0; iter < 40; ++iter) {
        const auto g = grad2(q);
        if (std::hypot(g[0], g[1]) < 1e-14) break;
        // Finite-difference Hessian of the plane gradient.
        const double h = 1e-6;
        double Hm[2][2];
        for (int a = 0; a < 2; ++a) {
            const Vec& e = a == 0 ? e1 : e2;
            Vec qp = q, qm = q;
            for (int j = 0; j < 3; ++j) {
                qp[j] += h * e[j];
                qm[j] -= h * e[j];
            }
            const auto gp = grad2(qp), gm = grad2(qm);
            Hm[0][a] = (gp[0] - gm[0]) / (2 * h);
            Hm[1][a] = (gp[1] - gm[1]) / (2 * h);
        }
        const double det = Hm[0][0] * Hm[1][1] - Hm[0][1] * Hm[1][0];
        if (!(std::abs(det) > 1e-30)) break;
        const double da = (Hm[1][1] * g[0] - Hm[0][1] * g[1]) / det;
        const double db = (Hm[0][0] * g[1] - Hm[1][0] * g[0]) / det;
        Vec qn = q;
        for (int j = 0; j < 3; ++j) qn[j] -= da * e1[j] + db * e2[j];
        qn = project_simplex(std::move(qn));
        if (F0(qn) + 1e-15 < F0(q)) break;
        q = std::move(qn);
    }
    out.value = std::max(F0(q), nm.value);
    out.argmax = F0(q) >= nm.value ? q : nm.x;
    return out;
}

namespace gapdetail {

// Exact accumulation of the circle driver: integral over (0, B] of
// z(log b / gamma) db.
inline Vec S_of(double B, double gamma) {
    const double T = std::log(B) / gamma;
    const Vec Z = circle_Z(T), Zp = circle_Zp(T);
    const double c = gamma / (1.0 + gamma * gamma);
    Vec s(3);
    for (int j = 0; j < 3; ++j)
        s[j] = B * (1.0 / 3.0 + c * (Z[j] + gamma * Zp[j]));
    return s;
}

// integral over (0, x] of the block-mixing entropy H(z(log b / gamma)) db,
// by periodic collapse onto (x/lambda, x] plus quadrature.
inline double mixing_integral(double x, double gamma, double rel_tol = 1e-11) {
    const double lambda = std::exp(kTwoPi * gamma);
    auto f = [gamma](double b) { return shannon(circle_z(std::log(b) / gamma)); };
    const double one =
        integrate_rel(f, x / lambda, x, rel_tol, shannon(circle_z(0.0)) * x);
    return one * lambda / (lambda - 1.0);
}

}  // namespace gapdetail

// Reduced-form dimension of the circle cycle at accumulation target B.
// Uses the per-coordinate exits B_i with k X_i . S(B_i) = B; the ratio
// H_i . S / X_i . S is evaluated with the solved S so root tolerance
// cancels to first order.  with_mixing adds the finite-k within-block
// entropy term; without it the value is the k -> infinity limit.
inline double delta_reduced_at(const GapMatrices& m, double gamma, double k,
                               double B, bool with_mixing,
                               std::array<double, 3>* Bi_out = nullptr) {
    std::array<double, 3> Bi{};
    double val = 0.0, Bmax = 0.0;
    for (int i = 0; i < 3; ++i) {
        auto chi = [&](double x) {
            const Vec s = gapdetail::S_of(x, gamma);
            double d = 0.0;
            for (int j = 0; j < 3; ++j) d += m.X[i][j] * s[j];
            return k * d - B;
        };
        Bi[i] = solve_increasing(chi, B / (k * std::exp2(i + 1)), 1e-12 * B);
        const Vec s = gapdetail::S_of(Bi[i], gamma);
        double hs = 0.0, xs = 0.0;
        for (int j = 0; j < 3; ++j) {
            hs += m.H[i][j] * s[j];
            xs += m.X[i][j] * s[j];
        }
        val += hs / xs;
        Bmax = std::max(Bmax, Bi[i]);
    }
    if (with_mixing) val += gapdetail::mixing_integral(Bmax, gamma) / B;
    if (Bi_out) *Bi_out = Bi;
    return val;
}

struct ReducedDeltaResult {
    double value = 0.0;
    double argmin_B = 0.0;
};

// Infimum of the reduced form over one multiplicative period of B.
inline ReducedDeltaResult reduced_delta_inf(const GapMatrices& m, double gamma,
                                            double k, bool with_mixing,
                                            int grid = 256) {
    const double L = kTwoPi * gamma;  // period in t = log B
    auto f = [&](double t) {
        return delta_reduced_at(m, gamma, k, std::exp(t), with_mixing);
    };
    Vec ts(grid), vs(grid);
    for (int g = 0; g < grid; ++g) {
        ts[g] = L * double(g) / grid;
        vs[g] = f(ts[g]);
    }
    // Refine every periodic local minimum basin.
    ReducedDeltaResult out;
    out.value = std::numeric_limits<double>::infinity();
    for (int g = 0; g < grid; ++g) {
        const double prev = vs[(g + grid - 1) % grid], next = vs[(g + 1) % grid];
        if (vs[g] <= prev && vs[g] <= next) {
            const double a = ts[g] - L / grid, b = ts[g] + L / grid;
            const double t = golden_section_min(f, a, b, 1e-10);
            const double v = f(t);
            if (v < out.value) {
                out.value = v;
                out.argmin_B = std::exp(t);
            }
        }
    }
    return out;
}

// Largest epsilon on a logarithmic grid for which the matrices satisfy
// their defining inequalities and the Bernoulli objective still peaks at u.
inline double epsilon_max(const GapParams& base = {}, int grid = 64,
                          int check_points = 2000, std::uint64_t seed = 99) {
    double best = 0.0;
    for (int g = 0; g < grid; ++g) {
        GapParams p = base;
        p.epsilon = 1e-3 * std::pow(1e3, double(g) / (grid - 1));
        GapMatrices m;
        try {
            m = build_matrices(p);
        } catch (const std::invalid_argument&) {
            continue;
        }
        SplitMix64 rng(seed, std::uint64_t(g));
        bool ok = true;
        for (int n = 0; n < check_points && ok; ++n)
            ok = reduced_objective(m, rng.dirichlet(3)) <= 1.5 + 1e-12;
        if (ok) best = std::max(best, p.epsilon);
    }
    return best;
}

// Residuals of every checkable identity behind the construction; all
// should sit at numerical noise for valid parameters.
struct GapIdentityReport {
    double row_sum_K = 0.0;        // max |sum_j Ktilde[i][j]|
    double row_sum_Y = 0.0;
    double col_sum_K = 0.0;        // max |sum_i Ktilde[i][j]|
    double maxvalues_H = 0.0;      // max |H_i.u - 2^i|
    double maxvalues_X = 0.0;
    double avg_z = 0.0;            // |(1/rho) int z dt - u| by quadrature
    double Z_antiderivative = 0.0; // |Z' - (z - u)| by finite differences
    double Z_mean = 0.0;           // |(1/rho) int Z dt|
    double Z_cross = 0.0;          // |Z' - N Z| on a grid
    double Z_norm = 0.0;           // max | |Z|^2 - 1/6 |
    double S_closed_form = 0.0;    // closed-form accumulation vs quadrature
    double t0_residual = 0.0;      // fixed-point self-residual on a grid
    QuadraticFormReport quadratic;
};

inline GapIdentityReport gap_identity_report(const GapParams& p) {
    GapIdentityReport rep;
    const GapMatrices m = build_matrices(p);
    for (int i = 0; i < 3; ++i) {
        double rk = 0.0, ry = 0.0, hu = 0.0, xu = 0.0, ck = 0.0;
        for (int j = 0; j < 3; ++j) {
            rk += p.Ktilde[i][j];
            ry += p.Ytilde[i][j];
            ck += p.Ktilde[j][i];
            hu += m.H[i][j] / 3.0;
            xu += m.X[i][j] / 3.0;
        }
        rep.row_sum_K = std::max(rep.row_sum_K, std::abs(rk));
        rep.row_sum_Y = std::max(rep.row_sum_Y, std::abs(ry));
        rep.col_sum_K = std::max(rep.col_sum_K, std::abs(ck));
        rep.maxvalues_H = std::max(rep.maxvalues_H, std::abs(hu - std::exp2(i)));
        rep.maxvalues_X =
            std::max(rep.maxvalues_X, std::abs(xu - std::exp2(i + 1)));
    }
    const CircleData cd;
    const Mat3 N = cd.cross_matrix();
    for (int j = 0; j < 3; ++j) {
        auto zj = [&](double t) { return circle_z(t)[j]; };
        auto Zj = [&](double t) { return circle_Z(t)[j]; };
        rep.avg_z = std::max(
            rep.avg_z,
            std::abs(integrate(zj, 0.0, cd.rho, 1e-13) / cd.rho - 1.0 / 3.0));
        rep.Z_mean = std::max(
            rep.Z_mean, std::abs(integrate(Zj, 0.0, cd.rho, 1e-13) / cd.rho));
    }
    for (int g = 0; g < 64; ++g) {
        const double t = cd.rho * double(g) / 64.0;
        const Vec z = circle_z(t), Z = circle_Z(t), Zp = circle_Zp(t);
        const double h = 1e-6;
        const Vec Zp_fd = [&] {
            const Vec a = circle_Z(t + h), b = circle_Z(t - h);
            Vec r(3);
            for (int j = 0; j < 3; ++j) r[j] = (a[j] - b[j]) / (2 * h);
            return r;
        }();
        double nrm = 0.0;
        for (int j = 0; j < 3; ++j) {
            rep.Z_antiderivative = std::max(
                rep.Z_antiderivative, std::abs(Zp_fd[j] - (z[j] - 1.0 / 3.0)));
            double nz = 0.0;
            for (int l = 0; l < 3; ++l) nz += N[j][l] * Z[l];
            rep.Z_cross = std::max(rep.Z_cross, std::abs(Zp[j] - nz));
            nrm += Z[j] * Z[j];
        }
        rep.Z_norm = std::max(rep.Z_norm, std::abs(nrm - 1.0 / 6.0));
        rep.t0_residual = std::max(rep.t0_residual, [&] {
            double worst = 0.0;
            for (int i = 0; i < 3; ++i) {
                const double s = solve_t0(p, t, i);
                const Vec Zs = circle_Z(s);
                double yz = 0.0;
                for (int j = 0; j < 3; ++j)
                    yz += (1.0 + p.epsilon * p.Ytilde[i][j]) * Zs[j];
                worst = std::max(worst, std::abs(t - s - yz));
            }
            return worst;
        }());
    }
    // Closed-form accumulation against direct quadrature over one period.
    {
        const double gamma = p.gamma();
        const double lambda = std::exp(kTwoPi * gamma);
        const double B = 1.7;
        for (int j = 0; j < 3; ++j) {
            auto f = [&](double b) { return circle_z(std::log(b) / gamma)[j]; };
            const double piece = integrate(f, B / lambda, B, 1e-13);
            const double closed =
                gapdetail::S_of(B, gamma)[j] -
                gapdetail::S_of(B / lambda, gamma)[j];
            rep.S_closed_form =
                std::max(rep.S_closed_form, std::abs(piece - closed));
        }
    }
    rep.quadratic = quadratic_form_check(p);
    return rep;
}

struct GapReport {
    GapParams params;
    double gamma = 0.0;
    double lambda = 0.0;
    // k -> infinity reduced quantities
    double delta0 = 0.0;
    Vec delta0_argmax;
    double delta0_random_max = 0.0;
    double delta_gamma = 0.0;
    double delta_gamma_argmin_B = 0.0;
    double reduced_gap = 0.0;  // delta_gamma - delta0
    double prediction = 0.0;   // gamma * eps^2 * sqrt(3)/4
    // finite-k quantities at params.k
    double dynd_k = 0.0;
    double delta_r_generic = 0.0;      // full cycle pipeline on the block system
    double delta_r_specialized = 0.0;  // closed-form reduced route
    double consistency_residual = 0.0;
    double finite_k_gap = 0.0;  // delta_r_generic - dynd_k
    // strongest circular cycle over gamma = log2/(2 pi m), m = 1..ell
    double best_gamma = 0.0;
    double delta_r_best = 0.0;
    double certified_gap = 0.0;  // delta_r_best - dynd_k
    bool gap_certified = false;
    // beta positivity
    double beta_inf = 0.0, beta_sup = 0.0;
    // DynD(k') -> delta0 convergence
    std::vector<double> k_grid;
    std::vector<double> dynd_deviation;
    bool dynd_monotone = false;
    std::vector<std::string> notes;
};

inline GapReport gap_report(const GapParams& p, const OptimizerConfig& cfg = {}) {
    GapReport rep;
    rep.params = p;
    rep.gamma = p.gamma();
    rep.lambda = std::exp(kTwoPi * rep.gamma);
    const GapMatrices m = build_matrices(p);

    const Delta0Result d0 = delta0_max(m, 10000, cfg);
    rep.delta0 = d0.value;
    rep.delta0_argmax = d0.argmax;
    rep.delta0_random_max = d0.random_max;

    const ReducedDeltaResult dg =
        reduced_delta_inf(m, rep.gamma, p.k, /*with_mixing=*/false);
    rep.delta_gamma = dg.value;
    rep.delta_gamma_argmin_B = dg.argmin_B;
    rep.reduced_gap = rep.delta_gamma - rep.delta0;
    rep.prediction = rep.gamma * p.epsilon * p.epsilon * std::sqrt(3.0) / 4.0;

    const BlockIFS block = build_gap_ifs(p);
    const BlockSpace space(block);
    rep.dynd_k = dynamical_dimension(block, cfg).value;

    const CycleDimConfig fine{256, 3, 1e-8, 1e-10};
    rep.delta_r_generic = delta_r(space, Cycle::circular(rep.gamma), fine).value;
    rep.delta_r_specialized =
        reduced_delta_inf(m, rep.gamma, p.k, /*with_mixing=*/true).value;
    rep.consistency_residual =
        std::abs(rep.delta_r_generic - rep.delta_r_specialized);
    rep.finite_k_gap = rep.delta_r_generic - rep.dynd_k;

    // delta(r) lower-bounds the Hausdorff dimension for every admissible
    // gamma, so certify with the strongest one on the divisibility grid.
    // Coarse pass over the grid, full-precision pass on the winner.
    const CycleDimConfig coarse{64, 1, 1e-8, 1e-9};
    rep.best_gamma = rep.gamma;
    double best_coarse = delta_r(space, Cycle::circular(rep.gamma), coarse).value;
    for (int mm = 1; mm < p.ell; ++mm) {
        const double g = std::log(2.0) / (kTwoPi * mm);
        const double v = delta_r(space, Cycle::circular(g), coarse).value;
        if (v > best_coarse) {
            best_coarse = v;
            rep.best_gamma = g;
        }
    }
    rep.delta_r_best =
        rep.best_gamma == rep.gamma
            ? rep.delta_r_generic
            : delta_r(space, Cycle::circular(rep.best_gamma), fine).value;
    rep.certified_gap = rep.delta_r_best - rep.dynd_k;
    rep.gap_certified = rep.certified_gap > 0.0;

    const BetaScan bs = beta_scan(p);
    rep.beta_inf = bs.inf;
    rep.beta_sup = bs.sup;

    rep.k_grid = {1e2, 1e3, p.k};
    for (double kk : rep.k_grid) {
        GapParams pk = p;
        pk.k = kk;
        const BlockIFS bk = build_gap_ifs(pk);
        rep.dynd_deviation.push_back(
            std::abs(dynamical_dimension(bk, cfg).value - rep.delta0));
    }
    rep.dynd_monotone = rep.dynd_deviation[0] > rep.dynd_deviation[1] &&
                        rep.dynd_deviation[1] > rep.dynd_deviation[2];

    if (rep.reduced_gap > 0.0)
        rep.notes.push_back("reduced gap positive");
    else
        rep.notes.push_back(
            "reduced gap non-positive: parameters falsified, try smaller "
            "epsilon or different ell");
    if (rep.finite_k_gap <= 0.0)
        rep.notes.push_back(
            "cycle at the requested ell does not beat the Bernoulli optimum "
            "at this finite k: the within-block mixing entropy advantage "
            "O(1/k) still dominates; increase k or decrease ell");
    if (rep.gap_certified)
        rep.notes.push_back(
            "Hausdorff dimension strictly exceeds the dynamical dimension at "
            "this k (strongest circular cycle)");
    return rep;
}

}  // namespace spongedim

#endif
