#ifndef SPONGEDIM_COMMON_HPP
#define SPONGEDIM_COMMON_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace spongedim {

using Vec = std::vector<double>;

// Weights below this are treated as exact zeros inside entropy sums;
// clipping happens before any log so -inf never propagates.
inline constexpr double kWeightFloor = 1e-300;

inline double xlogx(double x) {
    if (x < kWeightFloor) return 0.0;
    return x * std::log(x);
}

// Shannon entropy of a (sub)probability vector; 0*log(0) = 0.
inline double shannon(const Vec& w) {
    double h = 0.0;
    for (double x : w) h -= xlogx(x);
    return h;
}

inline double sum(const Vec& w) { return std::accumulate(w.begin(), w.end(), 0.0); }

inline bool is_prob_vector(const Vec& w, double tol = 1e-12) {
    if (w.empty()) return false;
    for (double x : w)
        if (!(x >= 0.0) || !std::isfinite(x)) return false;
    return std::abs(sum(w) - 1.0) <= tol;
}

inline void require_prob_vector(const Vec& w, const char* what) {
    if (!is_prob_vector(w))
        throw std::invalid_argument(std::string(what) + ": not a probability vector");
}

// Euclidean projection onto the probability simplex (Held/Wolfe/Crowder).
inline Vec project_simplex(Vec v) {
    const std::size_t n = v.size();
    Vec u = v;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, theta = 0.0;
    std::size_t rho = 0;
    for (std::size_t j = 0; j < n; ++j) {
        css += u[j];
        double t = (css - 1.0) / double(j + 1);
        if (u[j] - t > 0.0) {
            rho = j + 1;
            theta = t;
        }
    }
    (void)rho;
    for (double& x : v) x = std::max(0.0, x - theta);
    // Renormalize away the last few ulps.
    double s = sum(v);
    if (s > 0) for (double& x : v) x /= s;
    return v;
}

// Subset of coordinates {0..d-1} as a bitmask; d stays tiny (<= 16).
using CoordSet = std::uint32_t;

inline CoordSet full_set(int d) { return (CoordSet(1) << d) - 1; }
inline bool in_set(CoordSet I, int i) { return (I >> i) & 1u; }
inline int set_size(CoordSet I) { return std::popcount(I); }

}  // namespace spongedim

#endif
