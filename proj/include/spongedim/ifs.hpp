#ifndef SPONGEDIM_IFS_HPP
#define SPONGEDIM_IFS_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "common.hpp"
#include "interval.hpp"

namespace spongedim {

// One affine contraction of [0,1]: x -> offset + orientation*ratio*x.
struct BaseMap {
    double ratio = 0.5;      // |derivative|, in (0,1)
    double offset = 0.0;     // image of 0
    int orientation = +1;    // +1 or -1

    double image_lo() const { return orientation > 0 ? offset : offset - ratio; }
    double image_hi() const { return orientation > 0 ? offset + ratio : offset; }
};

// Diagonal IFS: independent base contractions per coordinate, and a selected
// set E of index tuples.  The attractor lives in [0,1]^d.
struct DiagonalIFS {
    int d = 0;
    std::vector<std::vector<BaseMap>> bases;  // bases[i] = maps of coordinate i
    std::vector<std::vector<int>> selected;   // E: tuples of indices, length d

    const BaseMap& map_of(const std::vector<int>& tuple, int i) const {
        return bases[i][tuple[i]];
    }
};

// Product sponge assembled from J spatially separated blocks per coordinate:
// block j contributes N[i][j] maps of ratio exp(-X[i][j]) inside
// ((j-1)/J, j/J).  Counts are stored in log form so astronomically large
// families never need enumeration.
struct BlockIFS {
    int d = 0;
    int J = 0;
    std::vector<std::vector<double>> logN;  // logN[i][j] = log N[i][j]
    std::vector<std::vector<double>> X;     // X[i][j] = -log ratio[i][j]
};

struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;
    bool ok() const { return violations.empty(); }
};

struct Classification {
    bool is_sierpinski = false;
    std::optional<std::vector<int>> coordinate_ordering;  // strongest first
    bool is_baranski = false;
    bool is_strongly_baranski = false;
};

inline ValidationReport validate(const DiagonalIFS& ifs) {
    ValidationReport rep;
    auto bad = [&](std::string msg) { rep.violations.push_back(std::move(msg)); };

    if (ifs.d < 1) bad("d must be >= 1");
    if (int(ifs.bases.size()) != ifs.d) bad("bases list does not match d");
    for (std::size_t i = 0; i < ifs.bases.size(); ++i) {
        if (ifs.bases[i].empty())
            bad("coordinate " + std::to_string(i) + ": no base maps");
        for (std::size_t a = 0; a < ifs.bases[i].size(); ++a) {
            const BaseMap& m = ifs.bases[i][a];
            const std::string where =
                "base map (" + std::to_string(i) + "," + std::to_string(a) + ")";
            if (!std::isfinite(m.ratio) || !(m.ratio > 0.0) || !(m.ratio < 1.0))
                bad(where + ": ratio not in (0,1)");
            if (!std::isfinite(m.offset) || m.offset < 0.0 || m.offset > 1.0)
                bad(where + ": offset not in [0,1]");
            if (m.orientation != 1 && m.orientation != -1)
                bad(where + ": orientation not +1/-1");
            if (std::isfinite(m.ratio) && std::isfinite(m.offset) &&
                (m.image_lo() < -1e-15 || m.image_hi() > 1.0 + 1e-15))
                bad(where + ": image outside [0,1]");
        }
    }
    if (ifs.selected.empty()) bad("E empty");
    std::set<std::vector<int>> seen;
    for (const auto& t : ifs.selected) {
        if (int(t.size()) != ifs.d) {
            bad("tuple length != d");
            continue;
        }
        bool in_range = true;
        for (int i = 0; i < ifs.d && i < int(ifs.bases.size()); ++i)
            if (t[i] < 0 || t[i] >= int(ifs.bases[i].size())) in_range = false;
        if (!in_range) {
            bad("tuple indexes a missing base map");
            continue;
        }
        if (!seen.insert(t).second) bad("duplicate tuple in E");
    }
    if (rep.ok()) {
        // A coordinate on which every selected tuple agrees carries no
        // geometry; legal, but worth surfacing.
        for (int i = 0; i < ifs.d; ++i) {
            bool constant = true;
            for (const auto& t : ifs.selected)
                if (t[i] != ifs.selected[0][i]) { constant = false; break; }
            if (constant && ifs.selected.size() > 1)
                rep.warnings.push_back("coordinate " + std::to_string(i) +
                                       " is degenerate (single map used)");
        }
    }
    return rep;
}

namespace detail {

// Open/closed pairwise disjointness of the images of one base list.
inline bool base_images_disjoint(const std::vector<BaseMap>& maps, bool open) {
    std::vector<std::pair<double, double>> iv;
    iv.reserve(maps.size());
    for (const auto& m : maps) iv.emplace_back(m.image_lo(), m.image_hi());
    std::sort(iv.begin(), iv.end());
    for (std::size_t a = 1; a < iv.size(); ++a) {
        if (open ? iv[a].first < iv[a - 1].second
                 : iv[a].first <= iv[a - 1].second)
            return false;
    }
    return true;
}

}  // namespace detail

inline Classification classify(const DiagonalIFS& ifs) {
    Classification c;

    // Uniform m-adic grid per coordinate, all m distinct and >= 2.
    bool grids = true;
    std::vector<int> m_of(ifs.d, 0);
    for (int i = 0; i < ifs.d && grids; ++i) {
        const int m = int(ifs.bases[i].size());
        m_of[i] = m;
        if (m < 2) { grids = false; break; }
        std::vector<double> offsets;
        for (const auto& bm : ifs.bases[i]) {
            if (bm.orientation != 1 || std::abs(bm.ratio - 1.0 / m) > 1e-12) {
                grids = false;
                break;
            }
            offsets.push_back(bm.offset);
        }
        if (!grids) break;
        std::sort(offsets.begin(), offsets.end());
        for (int a = 0; a < m; ++a)
            if (std::abs(offsets[a] - double(a) / m) > 1e-12) grids = false;
    }
    if (grids) {
        std::set<int> distinct(m_of.begin(), m_of.end());
        grids = int(distinct.size()) == ifs.d;
    }
    c.is_sierpinski = grids;

    // A permutation ordering |phi'| strictly decreasing, the same for all of E.
    if (!ifs.selected.empty()) {
        std::vector<int> sigma(ifs.d);
        for (int i = 0; i < ifs.d; ++i) sigma[i] = i;
        const auto& t0 = ifs.selected[0];
        std::sort(sigma.begin(), sigma.end(), [&](int a, int b) {
            return ifs.map_of(t0, a).ratio > ifs.map_of(t0, b).ratio;
        });
        bool ok = true;
        for (const auto& t : ifs.selected) {
            for (int i = 0; i + 1 < ifs.d; ++i)
                if (!(ifs.map_of(t, sigma[i]).ratio >
                      ifs.map_of(t, sigma[i + 1]).ratio)) {
                    ok = false;
                    break;
                }
            if (!ok) break;
        }
        if (ok && ifs.d >= 1) c.coordinate_ordering = sigma;
    }

    c.is_baranski = true;
    c.is_strongly_baranski = true;
    for (const auto& maps : ifs.bases) {
        if (!detail::base_images_disjoint(maps, /*open=*/true))
            c.is_baranski = false;
        if (!detail::base_images_disjoint(maps, /*open=*/false))
            c.is_strongly_baranski = false;
    }
    if (!c.is_baranski) c.is_strongly_baranski = false;
    return c;
}

// Goodness of a coordinate set: the projection of E to the coordinates in I
// must have pairwise disjoint open image boxes.  I = empty is vacuously good.
inline bool is_good_set(const DiagonalIFS& ifs, CoordSet I) {
    if (I == 0) return true;
    std::vector<int> coords;
    for (int i = 0; i < ifs.d; ++i)
        if (in_set(I, i)) coords.push_back(i);

    // Distinct projected tuples.
    std::set<std::vector<int>> proj;
    for (const auto& t : ifs.selected) {
        std::vector<int> key(coords.size());
        for (std::size_t j = 0; j < coords.size(); ++j) key[j] = t[coords[j]];
        proj.insert(std::move(key));
    }
    std::vector<std::vector<int>> tuples(proj.begin(), proj.end());
    for (std::size_t a = 0; a < tuples.size(); ++a) {
        for (std::size_t b = a + 1; b < tuples.size(); ++b) {
            bool disjoint = false;
            for (std::size_t j = 0; j < coords.size() && !disjoint; ++j) {
                const BaseMap& ma = ifs.bases[coords[j]][tuples[a][j]];
                const BaseMap& mb = ifs.bases[coords[j]][tuples[b][j]];
                if (ma.image_hi() <= mb.image_lo() ||
                    mb.image_hi() <= ma.image_lo())
                    disjoint = true;
            }
            if (!disjoint) return false;
        }
    }
    return true;
}

// Goodness of a Bernoulli measure: every sub-level set of the Lyapunov
// spectrum {i : chi_i <= x} must be good.  Only the <= d distinct sets at
// the sorted chi values can occur (plus the vacuous empty set below them).
inline bool is_good_measure(const DiagonalIFS& ifs, const Vec& p) {
    require_prob_vector(p, "is_good_measure");
    Vec chi(ifs.d, 0.0);
    for (std::size_t a = 0; a < ifs.selected.size(); ++a)
        for (int i = 0; i < ifs.d; ++i)
            chi[i] -= p[a] * std::log(ifs.map_of(ifs.selected[a], i).ratio);
    std::vector<double> levels(chi.begin(), chi.end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (double x : levels) {
        CoordSet I = 0;
        for (int i = 0; i < ifs.d; ++i)
            if (chi[i] <= x) I |= CoordSet(1) << i;
        if (!is_good_set(ifs, I)) return false;
    }
    return true;
}

// Axis-aligned cylinder rectangle with outward-rounded sides.
struct Rect {
    std::vector<Interval> side;

    bool contains(const Rect& o) const {
        for (std::size_t i = 0; i < side.size(); ++i)
            if (!(side[i].lo <= o.side[i].lo && o.side[i].hi <= side[i].hi))
                return false;
        return true;
    }
};

// Image of [0,1]^d under the composition phi_{w_1} o ... o phi_{w_n}, where
// each w_m indexes a tuple in E.  Interval arithmetic keeps the enclosure
// valid to the last ulp.
inline Rect cylinder(const DiagonalIFS& ifs, const std::vector<int>& word) {
    if (word.empty()) throw std::invalid_argument("cylinder: empty word");
    Rect r;
    r.side.resize(ifs.d);
    for (int i = 0; i < ifs.d; ++i) {
        Interval o(0.0), s(1.0);
        for (int wm : word) {
            const BaseMap& m = ifs.map_of(ifs.selected[wm], i);
            const Interval mo(m.offset), ms(m.orientation * m.ratio);
            o = o + s * mo;
            s = s * ms;
        }
        const Interval e2 = o + s;
        r.side[i] = Interval(std::min(o.lo, e2.lo), std::max(o.hi, e2.hi));
    }
    return r;
}

inline ValidationReport validate(const BlockIFS& b) {
    ValidationReport rep;
    auto bad = [&](std::string msg) { rep.violations.push_back(std::move(msg)); };
    if (b.d < 1) bad("d must be >= 1");
    if (b.J < 1) bad("J must be >= 1");
    if (int(b.logN.size()) != b.d || int(b.X.size()) != b.d) {
        bad("logN/X row count does not match d");
        return rep;
    }
    for (int i = 0; i < b.d; ++i) {
        if (int(b.logN[i].size()) != b.J || int(b.X[i].size()) != b.J) {
            bad("logN/X column count does not match J");
            return rep;
        }
        for (int j = 0; j < b.J; ++j) {
            if (!std::isfinite(b.logN[i][j]) || b.logN[i][j] < 0.0)
                bad("logN[" + std::to_string(i) + "][" + std::to_string(j) +
                    "] must be finite and >= 0");
            if (!std::isfinite(b.X[i][j]) || !(b.X[i][j] > 0.0))
                bad("X[" + std::to_string(i) + "][" + std::to_string(j) +
                    "] must be finite and > 0");
            // Packing: N*r < 1/J, i.e. logN - X < -log J.
            if (std::isfinite(b.logN[i][j]) && std::isfinite(b.X[i][j]) &&
                !(b.logN[i][j] - b.X[i][j] < -std::log(double(b.J))))
                bad("block (" + std::to_string(i) + "," + std::to_string(j) +
                    ") does not pack: N*r >= 1/J");
        }
    }
    return rep;
}

// Explicit expansion of a BlockIFS (cross-check path; counts must be small).
// Within block j the N maps are equally spaced with uniform gaps
// g = (1/J - N*r)/(N+1), so closures never touch and the result is strongly
// separated by construction.
inline DiagonalIFS expand(const BlockIFS& b, std::size_t max_selected = 200000) {
    ValidationReport rep = validate(b);
    if (!rep.ok()) throw std::invalid_argument("expand: invalid BlockIFS: " + rep.violations[0]);
    DiagonalIFS ifs;
    ifs.d = b.d;
    ifs.bases.resize(b.d);
    std::vector<std::vector<long long>> N(b.d, std::vector<long long>(b.J));
    for (int i = 0; i < b.d; ++i)
        for (int j = 0; j < b.J; ++j) {
            const double n = std::exp(b.logN[i][j]);
            if (n > 5e6) throw std::invalid_argument("expand: counts too large");
            N[i][j] = std::llround(n);
            if (std::abs(n - double(N[i][j])) > 1e-6)
                throw std::invalid_argument("expand: logN is not the log of an integer");
            if (N[i][j] < 1) throw std::invalid_argument("expand: N < 1");
        }
    std::vector<std::vector<int>> first(b.d, std::vector<int>(b.J, 0));
    for (int i = 0; i < b.d; ++i) {
        for (int j = 0; j < b.J; ++j) {
            first[i][j] = int(ifs.bases[i].size());
            const double r = std::exp(-b.X[i][j]);
            const double g = (1.0 / b.J - double(N[i][j]) * r) / double(N[i][j] + 1);
            for (long long m = 0; m < N[i][j]; ++m) {
                BaseMap bm;
                bm.ratio = r;
                bm.offset = double(j) / b.J + g + double(m) * (r + g);
                bm.orientation = +1;
                ifs.bases[i].push_back(bm);
            }
        }
    }
    // E = union over blocks of the full product of that block's maps.
    for (int j = 0; j < b.J; ++j) {
        double count = 1.0;
        for (int i = 0; i < b.d; ++i) count *= double(N[i][j]);
        if (ifs.selected.size() + count > double(max_selected))
            throw std::invalid_argument("expand: selected set too large");
        std::vector<int> idx(b.d, 0);
        while (true) {
            std::vector<int> tuple(b.d);
            for (int i = 0; i < b.d; ++i) tuple[i] = first[i][j] + idx[i];
            ifs.selected.push_back(std::move(tuple));
            int i = b.d - 1;
            while (i >= 0 && ++idx[i] == int(N[i][j])) idx[i--] = 0;
            if (i < 0) break;
        }
    }
    return ifs;
}

// Block membership helper used by the reduced measure formulas: column sums
// of logN give the per-block symbol counts (log #E_j = sum_i logN[i][j]).
inline Vec log_block_sizes(const BlockIFS& b) {
    Vec v(b.J, 0.0);
    for (int j = 0; j < b.J; ++j)
        for (int i = 0; i < b.d; ++i) v[j] += b.logN[i][j];
    return v;
}

}  // namespace spongedim

#endif
