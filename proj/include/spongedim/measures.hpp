#ifndef SPONGEDIM_MEASURES_HPP
#define SPONGEDIM_MEASURES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "common.hpp"
#include "ifs.hpp"

namespace spongedim {

// The measure-side computations only need two ingredients from a sponge:
// the Lyapunov linear forms chi_i and the coordinate entropies h_I.  Both
// come in an explicit flavor (weights indexed by E) and a reduced flavor
// (weights indexed by blocks, never enumerating E).

class ExplicitSpace {
  public:
    explicit ExplicitSpace(const DiagonalIFS& ifs) : ifs_(&ifs) {
        n_ = ifs.selected.size();
        d_ = ifs.d;
        loglam_.assign(n_, Vec(d_));
        for (std::size_t a = 0; a < n_; ++a)
            for (int i = 0; i < d_; ++i)
                loglam_[a][i] = -std::log(ifs.map_of(ifs.selected[a], i).ratio);
    }

    // The space keeps a reference to the sponge; binding a temporary would
    // dangle as soon as the constructor returns.
    explicit ExplicitSpace(DiagonalIFS&&) = delete;

    int dim() const { return d_; }
    std::size_t size() const { return n_; }
    const DiagonalIFS& ifs() const { return *ifs_; }
    double loglam(std::size_t a, int i) const { return loglam_[a][i]; }

    // chi_i extended linearly to arbitrary nonnegative weight vectors.
    double chi(int i, const Vec& w) const {
        double s = 0.0;
        for (std::size_t a = 0; a < n_; ++a) s += w[a] * loglam_[a][i];
        return s;
    }

    // h_I(p) for a probability vector p: entropy of the projected masses.
    double entropy(CoordSet I, const Vec& p) const {
        if (I == 0) return 0.0;
        if (I == full_set(d_)) return shannon(p);
        std::vector<int> coords;
        for (int i = 0; i < d_; ++i)
            if (in_set(I, i)) coords.push_back(i);
        std::vector<std::size_t> order(n_);
        std::iota(order.begin(), order.end(), std::size_t{0});
        auto proj_less = [&](std::size_t a, std::size_t b) {
            for (int i : coords) {
                const int xa = ifs_->selected[a][i], xb = ifs_->selected[b][i];
                if (xa != xb) return xa < xb;
            }
            return false;
        };
        auto proj_eq = [&](std::size_t a, std::size_t b) {
            for (int i : coords)
                if (ifs_->selected[a][i] != ifs_->selected[b][i]) return false;
            return true;
        };
        std::sort(order.begin(), order.end(), proj_less);
        double h = 0.0, mass = 0.0;
        for (std::size_t k = 0; k < n_; ++k) {
            mass += p[order[k]];
            if (k + 1 == n_ || !proj_eq(order[k], order[k + 1])) {
                h -= xlogx(mass);
                mass = 0.0;
            }
        }
        return h;
    }

  private:
    const DiagonalIFS* ifs_;
    std::size_t n_ = 0;
    int d_ = 0;
    std::vector<Vec> loglam_;
};

class BlockSpace {
  public:
    explicit BlockSpace(const BlockIFS& b) : b_(&b) {}
    explicit BlockSpace(BlockIFS&&) = delete;

    int dim() const { return b_->d; }
    std::size_t size() const { return std::size_t(b_->J); }
    const BlockIFS& block() const { return *b_; }

    double chi(int i, const Vec& w) const {
        double s = 0.0;
        for (int j = 0; j < b_->J; ++j) s += w[j] * b_->X[i][j];
        return s;
    }

    // h_I(M q) = sum_j q_j sum_{i in I} logN[i][j] + H(q) for I nonempty.
    // Exact: blocks are spatially separated in every coordinate, so the
    // projection to any nonempty I still distinguishes blocks, and within a
    // block the I-classes have exactly prod_{i notin I} N[i][j] members.
    double entropy(CoordSet I, const Vec& q) const {
        if (I == 0) return 0.0;
        double h = shannon(q);
        for (int j = 0; j < b_->J; ++j) {
            if (q[j] < kWeightFloor) continue;
            double lm = 0.0;
            for (int i = 0; i < b_->d; ++i)
                if (in_set(I, i)) lm += b_->logN[i][j];
            h += q[j] * lm;
        }
        return h;
    }

  private:
    const BlockIFS* b_;
};

// Explicit weights for p = M q on the expansion produced by expand(): each
// block's symbols share mass q_j / #E_j, in expand()'s enumeration order.
inline Vec block_uniform_weights(const BlockIFS& b, const Vec& q) {
    require_prob_vector(q, "block_uniform_weights");
    Vec w;
    for (int j = 0; j < b.J; ++j) {
        double count = 1.0;
        for (int i = 0; i < b.d; ++i) count *= std::round(std::exp(b.logN[i][j]));
        for (long long m = 0; m < (long long)count; ++m) w.push_back(q[j] / count);
    }
    return w;
}

namespace detail {

template <class Space>
Vec all_chi(const Space& sp, const Vec& p) {
    Vec chi(sp.dim());
    for (int i = 0; i < sp.dim(); ++i) {
        chi[i] = sp.chi(i, p);
        if (!(chi[i] > 0.0))
            throw std::domain_error("delta_p: Lyapunov exponent not positive");
    }
    return chi;
}

// Sorted-sum form: relabel so chi is ascending (ties by index), then
// delta = sum_i h(I_{<=i} | I_{<=i-1}) / chi_(i).
template <class Space>
double delta_sorted(const Space& sp, const Vec& p) {
    const Vec chi = all_chi(sp, p);
    std::vector<int> order(sp.dim());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return chi[a] < chi[b]; });
    double delta = 0.0, h_prev = 0.0;
    CoordSet I = 0;
    for (int i : order) {
        I |= CoordSet(1) << i;
        const double h = sp.entropy(I, p);
        delta += std::max(h - h_prev, 0.0) / chi[i];
        h_prev = h;
    }
    return delta;
}

// Piecewise-constant integral form: integrand b -> h({i : b <= 1/chi_i}; p)
// drops a coordinate at each breakpoint 1/chi_i and vanishes beyond the
// largest one.
template <class Space>
double delta_integral(const Space& sp, const Vec& p) {
    const Vec chi = all_chi(sp, p);
    std::vector<double> cut(sp.dim());
    for (int i = 0; i < sp.dim(); ++i) cut[i] = 1.0 / chi[i];
    std::vector<double> ends(cut.begin(), cut.end());
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    double delta = 0.0, lo = 0.0;
    for (double hi : ends) {
        CoordSet I = 0;
        for (int i = 0; i < sp.dim(); ++i)
            if (cut[i] >= hi) I |= CoordSet(1) << i;
        delta += sp.entropy(I, p) * (hi - lo);
        lo = hi;
    }
    return delta;
}

}  // namespace detail

// ---- explicit flavor ----

inline double lyapunov(const DiagonalIFS& ifs, const Vec& p, int i) {
    require_prob_vector(p, "lyapunov");
    return ExplicitSpace(ifs).chi(i, p);
}

inline double entropy(const DiagonalIFS& ifs, const Vec& p, CoordSet I) {
    require_prob_vector(p, "entropy");
    return ExplicitSpace(ifs).entropy(I, p);
}

inline double cond_entropy(const DiagonalIFS& ifs, const Vec& p, CoordSet I,
                           CoordSet Iprime) {
    if ((I & Iprime) != I)
        throw std::invalid_argument("cond_entropy: I not a subset of I'");
    const ExplicitSpace sp(ifs);
    return std::max(sp.entropy(Iprime, p) - sp.entropy(I, p), 0.0);
}

inline double delta_p(const DiagonalIFS& ifs, const Vec& p) {
    require_prob_vector(p, "delta_p");
    return detail::delta_sorted(ExplicitSpace(ifs), p);
}

inline double delta_p_integral(const DiagonalIFS& ifs, const Vec& p) {
    require_prob_vector(p, "delta_p");
    return detail::delta_integral(ExplicitSpace(ifs), p);
}

// ---- reduced (block) flavor; weights are q over blocks ----

inline double lyapunov(const BlockIFS& b, const Vec& q, int i) {
    require_prob_vector(q, "lyapunov");
    return BlockSpace(b).chi(i, q);
}

inline double entropy(const BlockIFS& b, const Vec& q, CoordSet I) {
    require_prob_vector(q, "entropy");
    return BlockSpace(b).entropy(I, q);
}

inline double cond_entropy(const BlockIFS& b, const Vec& q, CoordSet I,
                           CoordSet Iprime) {
    if ((I & Iprime) != I)
        throw std::invalid_argument("cond_entropy: I not a subset of I'");
    const BlockSpace sp(b);
    return std::max(sp.entropy(Iprime, q) - sp.entropy(I, q), 0.0);
}

inline double delta_p(const BlockIFS& b, const Vec& q) {
    require_prob_vector(q, "delta_p");
    return detail::delta_sorted(BlockSpace(b), q);
}

inline double delta_p_integral(const BlockIFS& b, const Vec& q) {
    require_prob_vector(q, "delta_p");
    return detail::delta_integral(BlockSpace(b), q);
}

// log(floor(exp(x))) without materializing the count: for x > 30 the floor
// correction is below e^-30 and is dropped; below that it is computed
// exactly from the fractional part.  When x is itself the log of an
// integer the round trip can land a few ulps under that integer, which
// must not drop the floor by one.
inline double log_floor_exp(double x) {
    if (x < 0.0) throw std::domain_error("log_floor_exp: x < 0 has floor 0 or 1");
    if (x > 30.0) return x;
    const double y = std::exp(x);
    const double r = std::nearbyint(y);
    const double n =
        (r >= 1.0 &&
         std::abs(y - r) <= 8.0 * std::numeric_limits<double>::epsilon() * r)
            ? r
            : std::floor(y);
    return std::log(n);
}

}  // namespace spongedim

#endif
