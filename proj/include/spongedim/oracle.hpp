#ifndef SPONGEDIM_ORACLE_HPP
#define SPONGEDIM_ORACLE_HPP

// Independent cross-checks for the dimension formulas: classical closed
// forms for special sponges, and a Monte Carlo estimate of the lower
// pointwise dimension built directly from cylinder masses.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "common.hpp"
#include "cycles.hpp"
#include "ifs.hpp"
#include "measures.hpp"
#include "rng.hpp"

namespace spongedim {

struct ClosedForm {
    bool applicable = false;
    double value = 0.0;
    std::string reason;  // why not, when inapplicable
};

// Equal-ratio separated sponges: dimension log #E / log(1/r).  Separation
// means pairwise disjoint open images (touching boundaries are fine), the
// regime where the classical value is exact.
inline ClosedForm moran_dim(const DiagonalIFS& ifs) {
    if (ifs.selected.empty()) return {false, 0.0, "no selected maps"};
    const double r = ifs.map_of(ifs.selected[0], 0).ratio;
    for (const auto& a : ifs.selected)
        for (int i = 0; i < ifs.d; ++i)
            if (std::abs(ifs.map_of(a, i).ratio - r) > 1e-12 * r)
                return {false, 0.0, "ratios are not all equal"};
    if (!is_good_set(ifs, full_set(ifs.d)))
        return {false, 0.0, "map images overlap"};
    return {true, std::log(double(ifs.selected.size())) / std::log(1.0 / r),
            ""};
}

namespace detail {

// Detects an m-adic grid coordinate: every selected map has ratio 1/m and
// offset j/m with orientation +1.  Returns m, or 0 if not a grid.
inline int grid_base(const DiagonalIFS& ifs, int coord) {
    const double r0 = ifs.map_of(ifs.selected[0], coord).ratio;
    const auto m = std::llround(1.0 / r0);
    if (m < 1 || std::abs(m * r0 - 1.0) > 1e-9) return 0;
    for (const auto& a : ifs.selected) {
        const BaseMap& bm = ifs.map_of(a, coord);
        if (bm.orientation != 1) return 0;
        if (std::abs(bm.ratio - r0) > 1e-12) return 0;
        const double cell = bm.offset * double(m);
        if (std::abs(cell - std::llround(cell)) > 1e-9) return 0;
    }
    return int(m);
}

}  // namespace detail

// Bedford-McMullen grid carpets (m-adic rows, n-adic columns, m <= n):
// dimension log_m of sum over rows of N_row^(log m / log n), derived by
// maximizing the Bernoulli dimension over row-uniform measures.
inline ClosedForm mcmullen_dim(const DiagonalIFS& ifs) {
    if (ifs.d != 2) return {false, 0.0, "not planar"};
    if (ifs.selected.empty()) return {false, 0.0, "no selected maps"};
    const int m0 = detail::grid_base(ifs, 0), m1 = detail::grid_base(ifs, 1);
    if (m0 == 0 || m1 == 0) return {false, 0.0, "not an adic grid carpet"};
    const int rows_coord = m0 <= m1 ? 0 : 1;
    const int m = std::min(m0, m1), n = std::max(m0, m1);
    if (m < 2) return {false, 0.0, "degenerate grid"};
    std::map<long long, int> row_counts;
    for (const auto& a : ifs.selected) {
        const BaseMap& bm = ifs.map_of(a, rows_coord);
        row_counts[std::llround(bm.offset * m)] += 1;
    }
    const double theta = std::log(double(m)) / std::log(double(n));
    double s = 0.0;
    for (const auto& [row, count] : row_counts)
        s += std::pow(double(count), theta);
    return {true, std::log(s) / std::log(double(m)), ""};
}

struct EmpiricalConfig {
    int samples = 10000;
    double B = 20.0;
    std::uint64_t seed = 1;
};

struct EmpiricalResult {
    double estimate = 0.0;
    double stderr_ = 0.0;
    int samples = 0;
    double B = 0.0;
    Vec per_sample;
};

// Monte Carlo lower-pointwise-dimension estimate.  Each sample draws a
// symbolic trajectory, tracks per-coordinate contraction totals X_i, and
// accumulates -log of the projected cylinder mass over the shrinking
// active coordinate set {i : X_i < B}; the estimate is the sample mean of
// (-log mass)/B.  Sample s uses its own counter-split RNG stream, so
// results are seed-deterministic regardless of evaluation order.
inline EmpiricalResult empirical_pointwise_dim(const DiagonalIFS& ifs,
                                               const Cycle& source,
                                               const EmpiricalConfig& cfg) {
    const ExplicitSpace sp(ifs);
    const std::size_t n_sym = sp.size();
    const int d = sp.dim();
    if (auto v = validate_cycle(source, n_sym); !v.ok())
        throw std::invalid_argument(v.violations.front());
    if (cfg.samples < 1) throw std::invalid_argument("samples must be >= 1");

    // Symbol -> projection-class id, one table per active coordinate set.
    std::unordered_map<CoordSet, std::vector<int>> class_cache;
    auto class_ids = [&](CoordSet I) -> const std::vector<int>& {
        if (auto it = class_cache.find(I); it != class_cache.end())
            return it->second;
        std::vector<int> ids(n_sym);
        std::map<std::vector<int>, int> seen;
        for (std::size_t e = 0; e < n_sym; ++e) {
            std::vector<int> key;
            for (int i = 0; i < d; ++i)
                if (in_set(I, i)) key.push_back(ifs.selected[e][i]);
            ids[e] = seen.emplace(std::move(key), int(seen.size()))
                         .first->second;
        }
        return class_cache.emplace(I, std::move(ids)).first->second;
    };

    const bool constant = source.form == Cycle::Form::Constant;
    EmpiricalResult out;
    out.samples = cfg.samples;
    out.B = cfg.B;
    out.per_sample.resize(cfg.samples);
    for (int s = 0; s < cfg.samples; ++s) {
        SplitMix64 rng(cfg.seed, std::uint64_t(s));
        Vec X(d, 0.0);
        CoordSet active = full_set(d);
        double neg_log_mass = 0.0;
        for (long n = 1; active != 0; ++n) {
            const Vec w =
                constant ? source.values[0] : cycle_value(source, double(n));
            const std::size_t a = rng.categorical(w);
            const auto& ids = class_ids(active);
            double mass = 0.0;
            for (std::size_t e = 0; e < n_sym; ++e)
                if (ids[e] == ids[a]) mass += w[e];
            neg_log_mass -= std::log(std::max(mass, kWeightFloor));
            for (int i = 0; i < d; ++i)
                if (in_set(active, i)) {
                    X[i] += sp.loglam(a, i);
                    if (X[i] >= cfg.B) active &= ~(CoordSet(1) << i);
                }
        }
        out.per_sample[s] = neg_log_mass / cfg.B;
    }
    double mean = 0.0;
    for (double v : out.per_sample) mean += v;
    mean /= cfg.samples;
    double ss = 0.0;
    for (double v : out.per_sample) ss += (v - mean) * (v - mean);
    out.estimate = mean;
    out.stderr_ = cfg.samples > 1
                      ? std::sqrt(ss / (double(cfg.samples) - 1.0) /
                                  double(cfg.samples))
                      : 0.0;
    return out;
}

inline EmpiricalResult empirical_pointwise_dim(const DiagonalIFS& ifs,
                                               const Vec& p,
                                               const EmpiricalConfig& cfg) {
    return empirical_pointwise_dim(ifs, Cycle::constant(p), cfg);
}

}  // namespace spongedim

#endif
