#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>

#include <spongedim/io.hpp>

#include "testutil.hpp"

using namespace spongedim;
using testutil::m1;

TEST_CASE("17 significant digits round-trip doubles exactly") {
    SplitMix64 rng(41);
    for (int n = 0; n < 1000; ++n) {
        const double x = std::exp(rng.uniform(-20.0, 20.0)) *
                         (rng.uniform() < 0.5 ? -1.0 : 1.0);
        REQUIRE(std::stod(fmt17(x)) == x);
    }
    REQUIRE_THROWS_AS(fmt17(std::nan("")), std::logic_error);
    REQUIRE_THROWS_AS(fmt17(INFINITY), std::logic_error);
}

TEST_CASE("explicit sponge documents round-trip byte-identically") {
    SplitMix64 rng(42);
    for (int n = 0; n < 20; ++n) {
        const DiagonalIFS f = testutil::random_sponge(rng);
        const std::string s1 = sponge_json(f).dump();
        const SpongeDoc doc = parse_sponge_json(parse_text(s1));
        REQUIRE(doc.kind == "explicit");
        REQUIRE(sponge_json(doc.explicit_ifs).dump() == s1);
    }
}

TEST_CASE("block sponge documents round-trip byte-identically") {
    BlockIFS b;
    b.d = 2;
    b.J = 3;
    b.logN = {{0.1, 0.2, 0.0}, {0.4, 0.0, 0.5}};
    b.X = {{1.0, 2.0, 3.0}, {1.5, 2.5, 3.5}};
    const std::string s1 = sponge_json(b).dump();
    const SpongeDoc doc = parse_sponge_json(parse_text(s1));
    REQUIRE(doc.kind == "block");
    REQUIRE(doc.block.J == 3);
    REQUIRE(sponge_json(doc.block).dump() == s1);
}

TEST_CASE("cycle documents round-trip in every form") {
    for (const Cycle& c :
         {Cycle::constant({0.25, 0.75}),
          Cycle::knots(3.0, {{0.5, 0.5}, {0.1, 0.9}, {0.7, 0.3}}),
          Cycle::circular(0.0625)}) {
        const std::string s1 = cycle_json(c).dump();
        const Cycle back = parse_cycle_json(parse_text(s1));
        REQUIRE(cycle_json(back).dump() == s1);
        REQUIRE(back.form == c.form);
    }
}

TEST_CASE("strict parsing: unknown keys are rejected with context") {
    const std::string doc = R"({"kind":"explicit","d":1,"typo":true,
        "bases":[[{"ratio":0.5,"offset":0.0,"orientation":1}]],"E":[[0]]})";
    REQUIRE_THROWS_WITH(parse_sponge_json(parse_text(doc)),
                        Catch::Matchers::ContainsSubstring("typo"));
}

TEST_CASE("strict parsing: out-of-range values are rejected") {
    auto sponge_with_ratio = [](const std::string& r) {
        return R"({"kind":"explicit","d":1,"bases":[[{"ratio":)" + r +
               R"(,"offset":0.0,"orientation":1}]],"E":[[0]]})";
    };
    REQUIRE_THROWS_WITH(parse_sponge_json(parse_text(sponge_with_ratio("1.0"))),
                        Catch::Matchers::ContainsSubstring("ratio not in (0,1)"));
    REQUIRE_THROWS_WITH(parse_sponge_json(parse_text(sponge_with_ratio("0.0"))),
                        Catch::Matchers::ContainsSubstring("ratio not in (0,1)"));
    REQUIRE_THROWS_AS(parse_sponge_json(parse_text(sponge_with_ratio("-0.5"))),
                      ParseError);

    const std::string bad_orient =
        R"({"kind":"explicit","d":1,"bases":[[{"ratio":0.5,"offset":0.0,
        "orientation":2}]],"E":[[0]]})";
    REQUIRE_THROWS_AS(parse_sponge_json(parse_text(bad_orient)), ParseError);

    const std::string bad_index =
        R"({"kind":"explicit","d":1,"bases":[[{"ratio":0.5,"offset":0.0,
        "orientation":1}]],"E":[[1]]})";
    REQUIRE_THROWS_WITH(parse_sponge_json(parse_text(bad_index)),
                        Catch::Matchers::ContainsSubstring("out of range"));
}

TEST_CASE("strict parsing: missing keys and bad JSON are rejected") {
    REQUIRE_THROWS_WITH(
        parse_sponge_json(parse_text(R"({"kind":"explicit","d":1})")),
        Catch::Matchers::ContainsSubstring("missing key"));
    REQUIRE_THROWS_AS(parse_text("{\"a\": nan}"), ParseError);
    REQUIRE_THROWS_AS(parse_text("not json at all"), ParseError);
    REQUIRE_THROWS_AS(
        parse_sponge_json(parse_text(R"({"kind":"pyramid","d":1})")),
        ParseError);
}

TEST_CASE("strict parsing: block matrices are shape- and sign-checked") {
    const std::string base =
        R"({"kind":"block","d":2,"J":2,"logN":[[0.1,0.2],[0.3,0.4]],)";
    REQUIRE_NOTHROW(parse_sponge_json(
        parse_text(base + R"("X":[[1.0,2.0],[3.0,4.0]]})")));
    REQUIRE_THROWS_AS(parse_sponge_json(
                          parse_text(base + R"("X":[[1.0,2.0],[3.0]]})")),
                      ParseError);
    REQUIRE_THROWS_AS(parse_sponge_json(
                          parse_text(base + R"("X":[[1.0,2.0],[3.0,0.0]]})")),
                      ParseError);
    REQUIRE_THROWS_WITH(
        parse_cycle_json(parse_text(
            R"({"lambda":1.5,"form":"circular","gamma":0.0625})")),
        Catch::Matchers::ContainsSubstring("lambda"));
}

TEST_CASE("report emission is deterministic and ordered") {
    DimensionReport r;
    r.quantity = "dynamical_dimension";
    r.value = 1.25;
    r.argmax = {0.5, 0.5};
    r.residual = 1e-11;
    r.iterations = 321;
    r.starts = 16;
    r.checks.emplace_back("probe", 0.125);
    const std::string a = report_json(r).dump();
    REQUIRE(a == report_json(r).dump());
    REQUIRE(a.find("\"quantity\"") < a.find("\"value\""));
    REQUIRE(a.find("\"value\"") < a.find("\"argmax\""));
    REQUIRE(a.find("1.25") != std::string::npos);
}

TEST_CASE("string escaping in JSON output") {
    JVal j = JVal::object();
    j.set("msg", JVal::string("a \"quoted\"\nline\ttab"));
    const std::string s = j.dump();
    REQUIRE(s.find("\\\"quoted\\\"") != std::string::npos);
    REQUIRE(s.find("\\n") != std::string::npos);
    REQUIRE(s.find("\\t") != std::string::npos);
    REQUIRE_NOTHROW(parse_text(s));
}

TEST_CASE("CSV emitters") {
    const std::string csv = csv_pairs("B", "delta", {1.0, 2.0}, {0.5, 0.25});
    REQUIRE(csv == "B,delta\n1,0.5\n2,0.25\n");
    const std::string samples = csv_samples({1.5});
    REQUIRE(samples == "sample,value\n0,1.5\n");
    const std::string trace = csv_trace({{0, 1.0}, {16, 1.25}});
    REQUIRE(trace == "iteration,best_value\n0,1\n16,1.25\n");
}

TEST_CASE("SVG emitters produce well-formed artifacts") {
    Vec xs, ys;
    for (int i = 0; i <= 64; ++i) {
        xs.push_back(1.0 + 0.05 * i);
        ys.push_back(std::cos(xs.back()));
    }
    const std::string curve = svg_curve(xs, ys, "B", "delta");
    REQUIRE(curve.find("<svg") == 0);
    REQUIRE(curve.find("<polyline") != std::string::npos);
    REQUIRE(curve.rfind("</svg>\n") == curve.size() - 7);

    const std::string carpet = svg_carpet(m1(), 3);
    std::size_t rects = 0;
    for (std::size_t pos = carpet.find("<rect"); pos != std::string::npos;
         pos = carpet.find("<rect", pos + 1))
        ++rects;
    REQUIRE(rects == 27 + 1);  // 3^3 cylinders plus the background
    REQUIRE_THROWS_AS(svg_carpet(testutil::moran3(), 2), std::invalid_argument);
}
