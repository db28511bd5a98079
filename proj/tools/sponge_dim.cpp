// Command-line front end: ingest sponge/cycle documents, run the dimension
// computations, and emit JSON reports plus optional CSV/SVG artifacts.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <spongedim/io.hpp>

using namespace spongedim;

namespace {

// User-facing problems (bad files, bad documents, bad parameter values)
// exit with code 2; anything else is an internal error and exits 1.
struct UserError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UserError("cannot read file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string swap_ext(const std::string& path, const std::string& ext) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + ext;
    return path.substr(0, dot) + ext;
}

// Artifacts are emitted in a fixed order (json, csv, svg).  The first one
// goes to --out verbatim; the rest reuse its basename with a new extension.
// Without --out everything is concatenated on stdout.
struct Sink {
    std::string out;
    bool first = true;

    void emit(const std::string& ext, const std::string& content) {
        if (out.empty()) {
            std::fwrite(content.data(), 1, content.size(), stdout);
            return;
        }
        const std::string path = first ? out : swap_ext(out, ext);
        first = false;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw UserError("cannot open output file: " + path);
        f << content;
    }
};

struct Options {
    std::string spec, out, cycle, p_csv;
    bool json = false, csv = false, svg = false;
    std::uint64_t seed = 1;
    int starts = 16;
    int depth = 4;
    double epsilon = 0.05, k = 1e4;
    int ell = 8;
    int samples = 10000;
    double B = 20.0;
};

SpongeDoc load_sponge(const std::string& path) {
    try {
        return parse_sponge_json(parse_text(read_file(path)));
    } catch (const ParseError& e) {
        throw UserError(path + ": " + e.what());
    }
}

// Validate before computing; a broken document is a user error.
void require_valid(const SpongeDoc& doc, const std::string& path) {
    const ValidationReport r = doc.kind == "explicit"
                                   ? validate(doc.explicit_ifs)
                                   : validate(doc.block);
    if (r.ok()) return;
    std::string msg = path + ": invalid sponge document";
    for (const auto& v : r.violations) msg += "\n  violation: " + v;
    throw UserError(msg);
}

Cycle load_cycle(const std::string& path, std::size_t space_size) {
    Cycle c;
    try {
        c = parse_cycle_json(parse_text(read_file(path)));
    } catch (const ParseError& e) {
        throw UserError(path + ": " + e.what());
    }
    const ValidationReport r = validate_cycle(c, space_size);
    if (!r.ok()) {
        std::string msg = path + ": invalid cycle document";
        for (const auto& v : r.violations) msg += "\n  violation: " + v;
        throw UserError(msg);
    }
    return c;
}

Vec parse_weights(const std::string& csv) {
    Vec p;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(tok, &pos);
            while (pos < tok.size() && std::isspace((unsigned char)tok[pos]))
                ++pos;
            if (pos != tok.size()) throw std::invalid_argument(tok);
            p.push_back(v);
        } catch (const std::exception&) {
            throw UserError("--p: cannot parse weight \"" + tok + "\"");
        }
    }
    if (p.empty()) throw UserError("--p: empty weight list");
    return p;
}

Vec uniform_weights(std::size_t n) {
    return Vec(n, 1.0 / double(n));
}

GapParams gap_params(const Options& o) {
    GapParams p;
    p.epsilon = o.epsilon;
    p.ell = o.ell;
    p.k = o.k;
    const auto v = validate(p);
    if (!v.empty()) {
        std::string msg = "invalid construction parameters";
        for (const auto& s : v) msg += "\n  violation: " + s;
        throw UserError(msg);
    }
    return p;
}

OptimizerConfig opt_config(const Options& o) {
    OptimizerConfig cfg;
    cfg.starts = o.starts;
    cfg.seed = o.seed;
    return cfg;
}

void maybe_carpet_svg(const Options& o, const SpongeDoc& doc, Sink& sink) {
    if (!o.svg) return;
    if (doc.kind == "explicit" && doc.explicit_ifs.d == 2)
        sink.emit("-carpet.svg", svg_carpet(doc.explicit_ifs, o.depth));
}

int cmd_validate(const Options& o, Sink& sink) {
    const SpongeDoc doc = load_sponge(o.spec);
    const ValidationReport r = doc.kind == "explicit"
                                   ? validate(doc.explicit_ifs)
                                   : validate(doc.block);
    sink.emit(".json", report_json(r).dump());
    if (!r.ok()) {
        for (const auto& v : r.violations)
            std::fprintf(stderr, "violation: %s\n", v.c_str());
        return 2;
    }
    return 0;
}

int cmd_classify(const Options& o, Sink& sink) {
    const SpongeDoc doc = load_sponge(o.spec);
    if (doc.kind != "explicit")
        throw UserError("classification requires an explicit sponge document");
    require_valid(doc, o.spec);
    sink.emit(".json", report_json(classify(doc.explicit_ifs)).dump());
    maybe_carpet_svg(o, doc, sink);
    return 0;
}

int cmd_dim_bernoulli(const Options& o, Sink& sink) {
    const SpongeDoc doc = load_sponge(o.spec);
    require_valid(doc, o.spec);
    const bool expl = doc.kind == "explicit";
    const std::size_t n =
        expl ? doc.explicit_ifs.selected.size() : std::size_t(doc.block.J);
    const Vec p = o.p_csv.empty() ? uniform_weights(n) : parse_weights(o.p_csv);
    if (p.size() != n)
        throw UserError("--p: expected " + std::to_string(n) + " weights");
    const int d = expl ? doc.explicit_ifs.d : doc.block.d;

    JVal j = JVal::object();
    j.set("quantity", JVal::string("bernoulli_dimension"));
    j.set("p", JVal::reals(p));
    double v1 = 0.0, v2 = 0.0;
    Vec lyap;
    double h_full = 0.0;
    bool good = true;
    if (expl) {
        const DiagonalIFS& f = doc.explicit_ifs;
        v1 = delta_p(f, p);
        v2 = delta_p_integral(f, p);
        for (int i = 0; i < d; ++i) lyap.push_back(lyapunov(f, p, i));
        h_full = entropy(f, p, full_set(d));
        good = is_good_measure(f, p);
    } else {
        const BlockIFS& b = doc.block;
        v1 = delta_p(b, p);
        v2 = delta_p_integral(b, p);
        for (int i = 0; i < d; ++i) lyap.push_back(lyapunov(b, p, i));
        h_full = entropy(b, p, full_set(d));
    }
    j.set("value", JVal::real(v1));
    j.set("value_integral_form", JVal::real(v2));
    j.set("formula_residual", JVal::real(std::abs(v1 - v2)));
    j.set("lyapunov", JVal::reals(lyap));
    j.set("entropy", JVal::real(h_full));
    j.set("good_measure", JVal::boolean(good));
    sink.emit(".json", j.dump());
    maybe_carpet_svg(o, doc, sink);
    return 0;
}

int cmd_dynd(const Options& o, Sink& sink) {
    const SpongeDoc doc = load_sponge(o.spec);
    require_valid(doc, o.spec);
    const DimensionReport rep =
        doc.kind == "explicit"
            ? dynamical_dimension(doc.explicit_ifs, opt_config(o))
            : dynamical_dimension(doc.block, opt_config(o));
    sink.emit(".json", report_json(rep).dump());
    if (o.csv) sink.emit(".csv", csv_trace(rep.trace));
    maybe_carpet_svg(o, doc, sink);
    return 0;
}

int cmd_hausdorff_lb(const Options& o, Sink& sink) {
    const SpongeDoc doc = load_sponge(o.spec);
    require_valid(doc, o.spec);
    const DimensionReport rep =
        doc.kind == "explicit"
            ? hausdorff_lb(doc.explicit_ifs, CycleFamily{}, opt_config(o))
            : hausdorff_lb(doc.block, CycleFamily{}, opt_config(o));
    sink.emit(".json", report_json(rep).dump());
    if (o.csv) sink.emit(".csv", csv_trace(rep.trace));
    maybe_carpet_svg(o, doc, sink);
    return 0;
}

int cmd_cycle_dim(const Options& o, Sink& sink) {
    const SpongeDoc doc = load_sponge(o.spec);
    require_valid(doc, o.spec);
    if (o.cycle.empty()) throw UserError("cycle-dim requires --cycle PATH");
    CycleDimResult res;
    if (doc.kind == "explicit") {
        const ExplicitSpace sp(doc.explicit_ifs);
        res = delta_r(sp, load_cycle(o.cycle, sp.size()));
    } else {
        const BlockSpace sp(doc.block);
        res = delta_r(sp, load_cycle(o.cycle, sp.size()));
    }
    sink.emit(".json", report_json(res).dump());
    if (o.csv) sink.emit(".csv", csv_pairs("B", "delta", res.grid_B, res.grid_delta));
    if (o.svg)
        sink.emit(".svg", svg_curve(res.grid_B, res.grid_delta, "B", "delta(r, B)"));
    maybe_carpet_svg(o, doc, sink);
    return 0;
}

int cmd_gap_build(const Options& o, Sink& sink) {
    const GapParams p = gap_params(o);
    sink.emit(".json", sponge_json(build_gap_ifs(p)).dump());
    return 0;
}

int cmd_gap_verify(const Options& o, Sink& sink) {
    const GapParams p = gap_params(o);
    const GapIdentityReport rep = gap_identity_report(p);
    sink.emit(".json", report_json(rep, p).dump());
    return 0;
}

int cmd_gap_report(const Options& o, Sink& sink) {
    const GapParams p = gap_params(o);
    const GapReport rep = gap_report(p, opt_config(o));
    sink.emit(".json", report_json(rep).dump());
    return 0;
}

int cmd_oracle_empirical(const Options& o, Sink& sink) {
    const SpongeDoc doc = load_sponge(o.spec);
    require_valid(doc, o.spec);
    if (doc.kind != "explicit")
        throw UserError("the empirical estimator requires an explicit sponge");
    const DiagonalIFS& f = doc.explicit_ifs;
    Cycle c = o.cycle.empty()
                  ? Cycle::constant(o.p_csv.empty()
                                        ? uniform_weights(f.selected.size())
                                        : parse_weights(o.p_csv))
                  : load_cycle(o.cycle, f.selected.size());
    EmpiricalConfig cfg;
    cfg.samples = o.samples;
    cfg.B = o.B;
    cfg.seed = o.seed;
    const EmpiricalResult res = empirical_pointwise_dim(f, c, cfg);
    sink.emit(".json", report_json(res).dump());
    if (o.csv) sink.emit(".csv", csv_samples(res.per_sample));
    return 0;
}

int cmd_oracle_closed_form(const Options& o, Sink& sink) {
    const SpongeDoc doc = load_sponge(o.spec);
    require_valid(doc, o.spec);
    if (doc.kind != "explicit")
        throw UserError("closed-form oracles require an explicit sponge");
    JVal j = JVal::object();
    j.set("moran", report_json(moran_dim(doc.explicit_ifs), "moran"));
    j.set("mcmullen", report_json(mcmullen_dim(doc.explicit_ifs), "mcmullen"));
    sink.emit(".json", j.dump());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hausdorff and dynamical dimension computations for "
                 "self-affine sponges"};
    app.require_subcommand(1);

    Options o;
    auto add_common = [&](CLI::App* sub, bool needs_spec) {
        if (needs_spec)
            sub->add_option("--spec", o.spec, "sponge document (JSON)")
                ->required();
        sub->add_option("--out", o.out,
                        "output path (default: stdout; extra artifacts reuse "
                        "the basename)");
        sub->add_flag("--json", o.json, "emit the JSON report (default)");
        sub->add_flag("--csv", o.csv, "emit a CSV artifact");
        sub->add_flag("--svg", o.svg, "emit an SVG artifact");
        sub->add_option("--seed", o.seed, "RNG seed");
        sub->add_option("--starts", o.starts, "optimizer restarts");
    };
    auto add_gap = [&](CLI::App* sub) {
        sub->add_option("--epsilon", o.epsilon, "perturbation size");
        sub->add_option("--ell", o.ell, "frequency divisor: gamma = log2/(2 pi ell)");
        sub->add_option("--k", o.k, "construction scale");
    };

    auto* c_validate = app.add_subcommand("validate", "check a sponge document");
    add_common(c_validate, true);
    auto* c_classify =
        app.add_subcommand("classify", "Sierpinski/Baranski classification");
    add_common(c_classify, true);
    c_classify->add_option("--depth", o.depth, "SVG rendering depth");
    auto* c_bern = app.add_subcommand(
        "dim-bernoulli", "dimension of a Bernoulli measure");
    add_common(c_bern, true);
    c_bern->add_option("--p", o.p_csv, "comma-separated weights (default uniform)");
    auto* c_dynd =
        app.add_subcommand("dynd", "dynamical dimension (simplex optimization)");
    add_common(c_dynd, true);
    c_dynd->add_option("--depth", o.depth, "SVG rendering depth");
    auto* c_hlb = app.add_subcommand(
        "hausdorff-lb", "Hausdorff dimension lower bound via cycle optimization");
    add_common(c_hlb, true);
    auto* c_cyc =
        app.add_subcommand("cycle-dim", "dimension of a pseudo-Bernoulli measure");
    add_common(c_cyc, true);
    c_cyc->add_option("--cycle", o.cycle, "cycle document (JSON)")->required();
    auto* c_gb = app.add_subcommand("gap-build",
                                    "emit the dimension-gap block sponge");
    add_common(c_gb, false);
    add_gap(c_gb);
    auto* c_gv = app.add_subcommand("gap-verify",
                                    "algebraic identities of the construction");
    add_common(c_gv, false);
    add_gap(c_gv);
    auto* c_gr = app.add_subcommand("gap-report",
                                    "full dimension-gap numerical report");
    add_common(c_gr, false);
    add_gap(c_gr);
    auto* c_oe = app.add_subcommand("oracle-empirical",
                                    "Monte Carlo pointwise dimension estimate");
    add_common(c_oe, true);
    c_oe->add_option("--cycle", o.cycle, "cycle document (JSON)");
    c_oe->add_option("--p", o.p_csv, "constant weights (default uniform)");
    c_oe->add_option("--samples", o.samples, "sample count");
    c_oe->add_option("--B", o.B, "time horizon");
    auto* c_oc = app.add_subcommand("oracle-closed-form",
                                    "Moran / adic-grid closed forms");
    add_common(c_oc, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    Sink sink{o.out};
    try {
        if (c_validate->parsed()) return cmd_validate(o, sink);
        if (c_classify->parsed()) return cmd_classify(o, sink);
        if (c_bern->parsed()) return cmd_dim_bernoulli(o, sink);
        if (c_dynd->parsed()) return cmd_dynd(o, sink);
        if (c_hlb->parsed()) return cmd_hausdorff_lb(o, sink);
        if (c_cyc->parsed()) return cmd_cycle_dim(o, sink);
        if (c_gb->parsed()) return cmd_gap_build(o, sink);
        if (c_gv->parsed()) return cmd_gap_verify(o, sink);
        if (c_gr->parsed()) return cmd_gap_report(o, sink);
        if (c_oe->parsed()) return cmd_oracle_empirical(o, sink);
        if (c_oc->parsed()) return cmd_oracle_closed_form(o, sink);
        std::fprintf(stderr, "no subcommand\n");
        return 2;
    } catch (const UserError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
}
