#ifndef SPONGEDIM_IO_HPP
#define SPONGEDIM_IO_HPP

// Document layer: strict JSON ingestion of sponges and cycles, ordered
// JSON report emission (17 significant digits, byte-deterministic), and
// CSV/SVG artifact writers.

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cycles.hpp"
#include "gap.hpp"
#include "ifs.hpp"
#include "optimize.hpp"
#include "oracle.hpp"

namespace spongedim {

class ParseError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string fmt17(double x) {
    if (!std::isfinite(x)) throw std::logic_error("non-finite value in output");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Minimal ordered JSON document: emission order is insertion order, so
// identical inputs produce byte-identical reports.
class JVal {
  public:
    enum class Kind { Null, Bool, Int, Real, Str, Arr, Obj };
    Kind kind = Kind::Null;

    static JVal boolean(bool v) {
        JVal j;
        j.kind = Kind::Bool;
        j.b_ = v;
        return j;
    }
    static JVal integer(long long v) {
        JVal j;
        j.kind = Kind::Int;
        j.i_ = v;
        return j;
    }
    static JVal real(double v) {
        JVal j;
        j.kind = Kind::Real;
        j.num_ = v;
        return j;
    }
    static JVal string(std::string v) {
        JVal j;
        j.kind = Kind::Str;
        j.str_ = std::move(v);
        return j;
    }
    static JVal array() {
        JVal j;
        j.kind = Kind::Arr;
        return j;
    }
    static JVal object() {
        JVal j;
        j.kind = Kind::Obj;
        return j;
    }
    static JVal reals(const Vec& v) {
        JVal j = array();
        for (double x : v) j.push(real(x));
        return j;
    }
    static JVal strings(const std::vector<std::string>& v) {
        JVal j = array();
        for (const auto& s : v) j.push(string(s));
        return j;
    }

    JVal& push(JVal v) {
        arr_.push_back(std::move(v));
        return *this;
    }
    JVal& set(std::string key, JVal v) {
        obj_.emplace_back(std::move(key), std::move(v));
        return *this;
    }

    std::string dump(int indent = 2) const {
        std::string out;
        write(out, indent, 0);
        out.push_back('\n');
        return out;
    }

  private:
    bool b_ = false;
    long long i_ = 0;
    double num_ = 0.0;
    std::string str_;
    std::vector<JVal> arr_;
    std::vector<std::pair<std::string, JVal>> obj_;

    static void escape(std::string& out, const std::string& s) {
        out.push_back('"');
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        out += buf;
                    } else {
                        out.push_back(c);
                    }
            }
        }
        out.push_back('"');
    }

    void write(std::string& out, int indent, int depth) const {
        const std::string pad(std::size_t(indent) * (depth + 1), ' ');
        const std::string pad_close(std::size_t(indent) * depth, ' ');
        switch (kind) {
            case Kind::Null: out += "null"; break;
            case Kind::Bool: out += b_ ? "true" : "false"; break;
            case Kind::Int: out += std::to_string(i_); break;
            case Kind::Real: out += fmt17(num_); break;
            case Kind::Str: escape(out, str_); break;
            case Kind::Arr:
                if (arr_.empty()) {
                    out += "[]";
                    break;
                }
                out += "[\n";
                for (std::size_t k = 0; k < arr_.size(); ++k) {
                    out += pad;
                    arr_[k].write(out, indent, depth + 1);
                    if (k + 1 < arr_.size()) out.push_back(',');
                    out.push_back('\n');
                }
                out += pad_close + "]";
                break;
            case Kind::Obj:
                if (obj_.empty()) {
                    out += "{}";
                    break;
                }
                out += "{\n";
                for (std::size_t k = 0; k < obj_.size(); ++k) {
                    out += pad;
                    escape(out, obj_[k].first);
                    out += ": ";
                    obj_[k].second.write(out, indent, depth + 1);
                    if (k + 1 < obj_.size()) out.push_back(',');
                    out.push_back('\n');
                }
                out += pad_close + "}";
                break;
        }
    }
};

namespace iodetail {

inline void check_keys(const nlohmann::json& j,
                       std::initializer_list<std::string_view> allowed,
                       const std::string& ctx) {
    if (!j.is_object()) throw ParseError(ctx + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (auto k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) throw ParseError(ctx + ": unknown key \"" + it.key() + "\"");
    }
}

inline const nlohmann::json& field(const nlohmann::json& j, const char* key,
                                   const std::string& ctx) {
    if (!j.contains(key)) throw ParseError(ctx + ": missing key \"" + key + "\"");
    return j.at(key);
}

inline double num_field(const nlohmann::json& j, const char* key,
                        const std::string& ctx) {
    const auto& v = field(j, key, ctx);
    if (!v.is_number())
        throw ParseError(ctx + ": \"" + key + "\" must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        throw ParseError(ctx + ": \"" + key + "\" is not finite");
    return x;
}

inline long long int_field(const nlohmann::json& j, const char* key,
                           const std::string& ctx) {
    const auto& v = field(j, key, ctx);
    if (!v.is_number_integer())
        throw ParseError(ctx + ": \"" + key + "\" must be an integer");
    return v.get<long long>();
}

inline Vec prob_field(const nlohmann::json& v, const std::string& ctx) {
    if (!v.is_array()) throw ParseError(ctx + ": expected an array");
    Vec p;
    for (const auto& x : v) {
        if (!x.is_number()) throw ParseError(ctx + ": entries must be numbers");
        const double w = x.get<double>();
        if (!std::isfinite(w) || w < 0.0)
            throw ParseError(ctx + ": weights must be finite and nonnegative");
        p.push_back(w);
    }
    return p;
}

}  // namespace iodetail

struct SpongeDoc {
    std::string kind;  // "explicit" or "block"
    DiagonalIFS explicit_ifs;
    BlockIFS block;
};

inline SpongeDoc parse_sponge_json(const nlohmann::json& j) {
    using namespace iodetail;
    SpongeDoc doc;
    const std::string ctx = "sponge";
    const auto& kindv = field(j, "kind", ctx);
    if (!kindv.is_string()) throw ParseError("sponge: \"kind\" must be a string");
    doc.kind = kindv.get<std::string>();
    if (doc.kind == "explicit") {
        check_keys(j, {"kind", "d", "bases", "E"}, ctx);
        const long long d = int_field(j, "d", ctx);
        if (d < 1 || d > 30) throw ParseError("sponge: d out of range [1,30]");
        doc.explicit_ifs.d = int(d);
        const auto& bases = field(j, "bases", ctx);
        if (!bases.is_array() || bases.size() != std::size_t(d))
            throw ParseError("sponge: \"bases\" must be an array of length d");
        for (std::size_t i = 0; i < bases.size(); ++i) {
            const std::string bctx = "bases[" + std::to_string(i) + "]";
            if (!bases[i].is_array() || bases[i].empty())
                throw ParseError(bctx + ": expected a nonempty array");
            std::vector<BaseMap> maps;
            for (std::size_t a = 0; a < bases[i].size(); ++a) {
                const std::string mctx = bctx + "[" + std::to_string(a) + "]";
                const auto& mj = bases[i][a];
                check_keys(mj, {"ratio", "offset", "orientation"}, mctx);
                BaseMap bm;
                bm.ratio = num_field(mj, "ratio", mctx);
                bm.offset = num_field(mj, "offset", mctx);
                const long long orient = int_field(mj, "orientation", mctx);
                if (!(bm.ratio > 0.0 && bm.ratio < 1.0))
                    throw ParseError(mctx + ": ratio not in (0,1)");
                if (!(bm.offset >= 0.0 && bm.offset <= 1.0))
                    throw ParseError(mctx + ": offset not in [0,1]");
                if (orient != 1 && orient != -1)
                    throw ParseError(mctx + ": orientation must be 1 or -1");
                bm.orientation = int(orient);
                maps.push_back(bm);
            }
            doc.explicit_ifs.bases.push_back(std::move(maps));
        }
        const auto& E = field(j, "E", ctx);
        if (!E.is_array()) throw ParseError("sponge: \"E\" must be an array");
        for (std::size_t n = 0; n < E.size(); ++n) {
            const std::string ectx = "E[" + std::to_string(n) + "]";
            if (!E[n].is_array() || E[n].size() != std::size_t(d))
                throw ParseError(ectx + ": expected an index tuple of length d");
            std::vector<int> tup;
            for (std::size_t i = 0; i < E[n].size(); ++i) {
                if (!E[n][i].is_number_integer())
                    throw ParseError(ectx + ": indices must be integers");
                const long long v = E[n][i].get<long long>();
                if (v < 0 ||
                    v >= (long long)doc.explicit_ifs.bases[i].size())
                    throw ParseError(ectx + ": index out of range");
                tup.push_back(int(v));
            }
            doc.explicit_ifs.selected.push_back(std::move(tup));
        }
    } else if (doc.kind == "block") {
        check_keys(j, {"kind", "d", "J", "logN", "X"}, ctx);
        const long long d = int_field(j, "d", ctx);
        const long long J = int_field(j, "J", ctx);
        if (d < 1 || d > 30) throw ParseError("sponge: d out of range [1,30]");
        if (J < 1) throw ParseError("sponge: J must be positive");
        doc.block.d = int(d);
        doc.block.J = int(J);
        auto matrix = [&](const char* key) {
            const auto& mj = field(j, key, ctx);
            if (!mj.is_array() || mj.size() != std::size_t(d))
                throw ParseError(std::string("sponge: \"") + key +
                                 "\" must have d rows");
            std::vector<Vec> rows;
            for (std::size_t i = 0; i < mj.size(); ++i) {
                if (!mj[i].is_array() || mj[i].size() != std::size_t(J))
                    throw ParseError(std::string("sponge: \"") + key +
                                     "\" rows must have J entries");
                Vec row;
                for (const auto& x : mj[i]) {
                    if (!x.is_number())
                        throw ParseError(std::string("sponge: \"") + key +
                                         "\" entries must be numbers");
                    const double v = x.get<double>();
                    if (!std::isfinite(v))
                        throw ParseError(std::string("sponge: \"") + key +
                                         "\" entries must be finite");
                    row.push_back(v);
                }
                rows.push_back(std::move(row));
            }
            return rows;
        };
        doc.block.logN = matrix("logN");
        doc.block.X = matrix("X");
        for (int i = 0; i < doc.block.d; ++i)
            for (int jj = 0; jj < doc.block.J; ++jj) {
                if (doc.block.logN[i][jj] < 0.0)
                    throw ParseError("sponge: logN entries must be >= 0");
                if (!(doc.block.X[i][jj] > 0.0))
                    throw ParseError("sponge: X entries must be positive");
            }
    } else {
        throw ParseError("sponge: kind must be \"explicit\" or \"block\"");
    }
    return doc;
}

inline Cycle parse_cycle_json(const nlohmann::json& j) {
    using namespace iodetail;
    const std::string ctx = "cycle";
    const auto& formv = field(j, "form", ctx);
    if (!formv.is_string()) throw ParseError("cycle: \"form\" must be a string");
    const std::string form = formv.get<std::string>();
    if (form == "constant") {
        check_keys(j, {"lambda", "form", "p"}, ctx);
        return Cycle::constant(prob_field(field(j, "p", ctx), "cycle p"));
    }
    if (form == "knots") {
        check_keys(j, {"lambda", "form", "values"}, ctx);
        const double lambda = num_field(j, "lambda", ctx);
        const auto& vals = field(j, "values", ctx);
        if (!vals.is_array() || vals.size() < 2)
            throw ParseError("cycle: \"values\" needs at least 2 knots");
        std::vector<Vec> knots;
        for (std::size_t m = 0; m < vals.size(); ++m)
            knots.push_back(
                prob_field(vals[m], "cycle values[" + std::to_string(m) + "]"));
        return Cycle::knots(lambda, std::move(knots));
    }
    if (form == "circular") {
        check_keys(j, {"lambda", "form", "gamma"}, ctx);
        const double gamma = num_field(j, "gamma", ctx);
        const double lambda = num_field(j, "lambda", ctx);
        if (!(gamma > 0.0)) throw ParseError("cycle: gamma must be positive");
        if (std::abs(lambda - std::exp(kTwoPi * gamma)) >
            1e-9 * std::exp(kTwoPi * gamma))
            throw ParseError("cycle: lambda does not match exp(2 pi gamma)");
        return Cycle::circular(gamma);
    }
    throw ParseError("cycle: form must be constant, knots, or circular");
}

inline nlohmann::json parse_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("document is not valid JSON");
    return j;
}

inline JVal sponge_json(const DiagonalIFS& f) {
    JVal j = JVal::object();
    j.set("kind", JVal::string("explicit"));
    j.set("d", JVal::integer(f.d));
    JVal bases = JVal::array();
    for (const auto& maps : f.bases) {
        JVal row = JVal::array();
        for (const auto& m : maps) {
            JVal mj = JVal::object();
            mj.set("ratio", JVal::real(m.ratio));
            mj.set("offset", JVal::real(m.offset));
            mj.set("orientation", JVal::integer(m.orientation));
            row.push(std::move(mj));
        }
        bases.push(std::move(row));
    }
    j.set("bases", std::move(bases));
    JVal E = JVal::array();
    for (const auto& tup : f.selected) {
        JVal t = JVal::array();
        for (int v : tup) t.push(JVal::integer(v));
        E.push(std::move(t));
    }
    j.set("E", std::move(E));
    return j;
}

inline JVal sponge_json(const BlockIFS& b) {
    JVal j = JVal::object();
    j.set("kind", JVal::string("block"));
    j.set("d", JVal::integer(b.d));
    j.set("J", JVal::integer(b.J));
    auto matrix = [](const std::vector<Vec>& rows) {
        JVal m = JVal::array();
        for (const auto& r : rows) m.push(JVal::reals(r));
        return m;
    };
    j.set("logN", matrix(b.logN));
    j.set("X", matrix(b.X));
    return j;
}

inline JVal cycle_json(const Cycle& c) {
    JVal j = JVal::object();
    j.set("lambda", JVal::real(c.lambda));
    switch (c.form) {
        case Cycle::Form::Constant:
            j.set("form", JVal::string("constant"));
            j.set("p", JVal::reals(c.values[0]));
            break;
        case Cycle::Form::Knots: {
            j.set("form", JVal::string("knots"));
            JVal vals = JVal::array();
            for (const auto& v : c.values) vals.push(JVal::reals(v));
            j.set("values", std::move(vals));
            break;
        }
        case Cycle::Form::Circular:
            j.set("form", JVal::string("circular"));
            j.set("gamma", JVal::real(c.gamma));
            break;
    }
    return j;
}

inline JVal report_json(const ValidationReport& r) {
    JVal j = JVal::object();
    j.set("valid", JVal::boolean(r.ok()));
    j.set("violations", JVal::strings(r.violations));
    j.set("warnings", JVal::strings(r.warnings));
    return j;
}

inline JVal report_json(const Classification& c) {
    JVal j = JVal::object();
    j.set("sierpinski", JVal::boolean(c.is_sierpinski));
    if (c.coordinate_ordering) {
        JVal ord = JVal::array();
        for (int i : *c.coordinate_ordering) ord.push(JVal::integer(i));
        j.set("coordinate_ordering", std::move(ord));
    } else {
        j.set("coordinate_ordering", JVal());
    }
    j.set("baranski", JVal::boolean(c.is_baranski));
    j.set("strongly_baranski", JVal::boolean(c.is_strongly_baranski));
    return j;
}

inline JVal report_json(const DimensionReport& r) {
    JVal j = JVal::object();
    j.set("quantity", JVal::string(r.quantity));
    j.set("value", JVal::real(r.value));
    j.set("argmax", JVal::reals(r.argmax));
    j.set("argmin_B", JVal::real(r.argmin_B));
    j.set("residual", JVal::real(r.residual));
    j.set("iterations", JVal::integer(r.iterations));
    j.set("starts", JVal::integer(r.starts));
    j.set("flags", JVal::strings(r.flags));
    JVal checks = JVal::object();
    for (const auto& [name, val] : r.checks) checks.set(name, JVal::real(val));
    j.set("checks", std::move(checks));
    return j;
}

inline JVal report_json(const CycleDimResult& r) {
    JVal j = JVal::object();
    j.set("quantity", JVal::string("cycle_dimension"));
    j.set("value", JVal::real(r.value));
    j.set("argmin_B", JVal::real(r.argmin_B));
    j.set("grid_residual", JVal::real(r.grid_residual));
    j.set("near_minima", JVal::reals(r.near_minima));
    return j;
}

inline JVal report_json(const BoundsReport& r) {
    JVal j = JVal::object();
    j.set("dynamical_dimension", JVal::real(r.dynd));
    j.set("hausdorff_lower_bound", JVal::real(r.hausdorff_lb));
    j.set("bound_rhs", JVal::real(r.bound_rhs));
    j.set("bound_holds", JVal::boolean(r.bound_holds));
    j.set("probe_etas", JVal::reals(r.etas));
    j.set("probe_deltas", JVal::reals(r.probe_deltas));
    j.set("probe_monotone", JVal::boolean(r.probe_monotone));
    return j;
}

inline JVal report_json(const EmpiricalResult& r) {
    JVal j = JVal::object();
    j.set("quantity", JVal::string("empirical_pointwise_dimension"));
    j.set("estimate", JVal::real(r.estimate));
    j.set("stderr", JVal::real(r.stderr_));
    j.set("samples", JVal::integer(r.samples));
    j.set("B", JVal::real(r.B));
    return j;
}

inline JVal report_json(const ClosedForm& r, const std::string& name) {
    JVal j = JVal::object();
    j.set("oracle", JVal::string(name));
    j.set("applicable", JVal::boolean(r.applicable));
    if (r.applicable)
        j.set("value", JVal::real(r.value));
    else
        j.set("reason", JVal::string(r.reason));
    return j;
}

inline JVal params_json(const GapParams& p) {
    JVal j = JVal::object();
    j.set("epsilon", JVal::real(p.epsilon));
    j.set("ell", JVal::integer(p.ell));
    j.set("k", JVal::real(p.k));
    j.set("gamma", JVal::real(p.gamma()));
    return j;
}

inline JVal matrix_json(const Mat3& m) {
    JVal j = JVal::array();
    for (const auto& row : m) {
        JVal r = JVal::array();
        for (double x : row) r.push(JVal::real(x));
        j.push(std::move(r));
    }
    return j;
}

inline JVal report_json(const GapIdentityReport& r, const GapParams& p) {
    JVal j = JVal::object();
    j.set("params", params_json(p));
    const GapMatrices m = build_matrices(p);
    JVal mats = JVal::object();
    mats.set("H", matrix_json(m.H));
    mats.set("X", matrix_json(m.X));
    mats.set("K", matrix_json(m.K));
    mats.set("Y", matrix_json(m.Y));
    j.set("matrices", std::move(mats));
    JVal ids = JVal::object();
    ids.set("row_sum_K", JVal::real(r.row_sum_K));
    ids.set("row_sum_Y", JVal::real(r.row_sum_Y));
    ids.set("col_sum_K", JVal::real(r.col_sum_K));
    ids.set("maxvalues_H", JVal::real(r.maxvalues_H));
    ids.set("maxvalues_X", JVal::real(r.maxvalues_X));
    ids.set("avg_z", JVal::real(r.avg_z));
    ids.set("Z_antiderivative", JVal::real(r.Z_antiderivative));
    ids.set("Z_mean", JVal::real(r.Z_mean));
    ids.set("Z_cross", JVal::real(r.Z_cross));
    ids.set("Z_norm", JVal::real(r.Z_norm));
    ids.set("S_closed_form", JVal::real(r.S_closed_form));
    ids.set("t0_residual", JVal::real(r.t0_residual));
    j.set("identities", std::move(ids));
    JVal qf = JVal::object();
    qf.set("trace1", JVal::real(r.quadratic.trace1));
    qf.set("trace2", JVal::real(r.quadratic.trace2));
    qf.set("c1", JVal::real(r.quadratic.c1));
    qf.set("c2", JVal::real(r.quadratic.c2));
    qf.set("max_residual1", JVal::real(r.quadratic.max_residual1));
    qf.set("max_residual2", JVal::real(r.quadratic.max_residual2));
    qf.set("points", JVal::integer(r.quadratic.points));
    j.set("quadratic_forms", std::move(qf));
    return j;
}

inline JVal report_json(const GapReport& r) {
    JVal j = JVal::object();
    j.set("params", params_json(r.params));
    j.set("lambda", JVal::real(r.lambda));
    j.set("delta0", JVal::real(r.delta0));
    j.set("delta0_argmax", JVal::reals(r.delta0_argmax));
    j.set("delta0_random_max", JVal::real(r.delta0_random_max));
    j.set("delta_gamma", JVal::real(r.delta_gamma));
    j.set("delta_gamma_argmin_B", JVal::real(r.delta_gamma_argmin_B));
    j.set("gap", JVal::real(r.reduced_gap));
    j.set("prediction", JVal::real(r.prediction));
    j.set("dynd_k", JVal::real(r.dynd_k));
    j.set("delta_r_generic", JVal::real(r.delta_r_generic));
    j.set("delta_r_specialized", JVal::real(r.delta_r_specialized));
    j.set("consistency_residual", JVal::real(r.consistency_residual));
    j.set("finite_k_gap", JVal::real(r.finite_k_gap));
    j.set("best_gamma", JVal::real(r.best_gamma));
    j.set("delta_r_best", JVal::real(r.delta_r_best));
    j.set("certified_gap", JVal::real(r.certified_gap));
    j.set("gap_certified", JVal::boolean(r.gap_certified));
    j.set("beta_inf", JVal::real(r.beta_inf));
    j.set("beta_sup", JVal::real(r.beta_sup));
    j.set("k_grid", JVal::reals(r.k_grid));
    j.set("dynd_deviation", JVal::reals(r.dynd_deviation));
    j.set("dynd_monotone", JVal::boolean(r.dynd_monotone));
    j.set("notes", JVal::strings(r.notes));
    return j;
}

// ---- CSV ----

inline std::string csv_pairs(const std::string& xname, const std::string& yname,
                             const Vec& xs, const Vec& ys) {
    std::string out = xname + "," + yname + "\n";
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i)
        out += fmt17(xs[i]) + "," + fmt17(ys[i]) + "\n";
    return out;
}

inline std::string csv_samples(const Vec& vals) {
    std::string out = "sample,value\n";
    for (std::size_t i = 0; i < vals.size(); ++i)
        out += std::to_string(i) + "," + fmt17(vals[i]) + "\n";
    return out;
}

inline std::string csv_trace(const std::vector<std::pair<int, double>>& tr) {
    std::string out = "iteration,best_value\n";
    for (const auto& [it, v] : tr)
        out += std::to_string(it) + "," + fmt17(v) + "\n";
    return out;
}

// ---- SVG ----

namespace iodetail {

inline std::string fmt_coord(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

}  // namespace iodetail

// Static polyline plot of a sampled curve with light axes.
inline std::string svg_curve(const Vec& xs, const Vec& ys,
                             const std::string& xlabel,
                             const std::string& ylabel, int width = 640,
                             int height = 400) {
    using iodetail::fmt_coord;
    if (xs.empty() || xs.size() != ys.size())
        throw std::invalid_argument("svg_curve: need matching nonempty data");
    double xmin = xs[0], xmax = xs[0], ymin = ys[0], ymax = ys[0];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xmin = std::min(xmin, xs[i]);
        xmax = std::max(xmax, xs[i]);
        ymin = std::min(ymin, ys[i]);
        ymax = std::max(ymax, ys[i]);
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) {
        ymax += std::abs(ymax) * 1e-3 + 1e-9;
        ymin -= std::abs(ymin) * 1e-3 + 1e-9;
    }
    const double ml = 70, mr = 20, mt = 20, mb = 50;
    auto px = [&](double x) {
        return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr);
    };
    auto py = [&](double y) {
        return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
    };
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(width) + "\" height=\"" +
                    std::to_string(height) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<line x1=\"" + fmt_coord(ml) + "\" y1=\"" + fmt_coord(py(ymin)) +
         "\" x2=\"" + fmt_coord(px(xmax)) + "\" y2=\"" + fmt_coord(py(ymin)) +
         "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + fmt_coord(ml) + "\" y1=\"" + fmt_coord(py(ymin)) +
         "\" x2=\"" + fmt_coord(ml) + "\" y2=\"" + fmt_coord(py(ymax)) +
         "\" stroke=\"black\"/>\n";
    s += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s.push_back(' ');
        s += fmt_coord(px(xs[i])) + "," + fmt_coord(py(ys[i]));
    }
    s += "\"/>\n";
    s += "<text x=\"" + fmt_coord((ml + width - mr) / 2) + "\" y=\"" +
         fmt_coord(height - 12) + "\" font-size=\"13\" text-anchor=\"middle\">" +
         xlabel + "</text>\n";
    s += "<text x=\"16\" y=\"" + fmt_coord((mt + height - mb) / 2) +
         "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         fmt_coord((mt + height - mb) / 2) + ")\">" + ylabel + "</text>\n";
    s += "<text x=\"" + fmt_coord(ml - 6) + "\" y=\"" + fmt_coord(py(ymin)) +
         "\" font-size=\"11\" text-anchor=\"end\">" + fmt17(ymin) + "</text>\n";
    s += "<text x=\"" + fmt_coord(ml - 6) + "\" y=\"" + fmt_coord(py(ymax) + 4) +
         "\" font-size=\"11\" text-anchor=\"end\">" + fmt17(ymax) + "</text>\n";
    s += "<text x=\"" + fmt_coord(px(xmin)) + "\" y=\"" +
         fmt_coord(py(ymin) + 16) + "\" font-size=\"11\" text-anchor=\"middle\">" +
         fmt17(xmin) + "</text>\n";
    s += "<text x=\"" + fmt_coord(px(xmax)) + "\" y=\"" +
         fmt_coord(py(ymin) + 16) + "\" font-size=\"11\" text-anchor=\"middle\">" +
         fmt17(xmax) + "</text>\n";
    s += "</svg>\n";
    return s;
}

// Depth-n cylinder rendering of a planar sponge.
inline std::string svg_carpet(const DiagonalIFS& f, int depth, int size = 640,
                              std::size_t max_rects = 100000) {
    using iodetail::fmt_coord;
    if (f.d != 2)
        throw std::invalid_argument("svg_carpet: only planar sponges");
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(size) + "\" height=\"" +
                    std::to_string(size) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // Clamp the depth so the rectangle count stays below max_rects.
    const std::size_t n = std::max<std::size_t>(f.selected.size(), 1);
    int eff_depth = 0;
    for (std::size_t total = n; eff_depth < depth && total <= max_rects;
         total *= n)
        ++eff_depth;
    eff_depth = std::max(eff_depth, 1);

    std::vector<int> w;
    auto draw = [&](auto&& self) -> void {
        if (int(w.size()) == eff_depth) {
            const Rect r = cylinder(f, w);
            const double x = r.side[0].lo * size;
            const double yv = (1.0 - r.side[1].hi) * size;
            const double wd = std::max(r.side[0].width() * size, 0.3);
            const double ht = std::max(r.side[1].width() * size, 0.3);
            s += "<rect x=\"" + fmt_coord(x) + "\" y=\"" + fmt_coord(yv) +
                 "\" width=\"" + fmt_coord(wd) + "\" height=\"" +
                 fmt_coord(ht) + "\" fill=\"#1f77b4\"/>\n";
            return;
        }
        for (std::size_t a = 0; a < f.selected.size(); ++a) {
            w.push_back(int(a));
            self(self);
            w.pop_back();
        }
    };
    draw(draw);
    s += "</svg>\n";
    return s;
}

}  // namespace spongedim

#endif
