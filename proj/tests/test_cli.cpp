#include <doctest.h>

#include "mpqg/cli.hpp"
#include "mpqg/errors.hpp"
#include "mpqg/expr.hpp"
#include "mpqg/random.hpp"

using namespace mpqg;

namespace {

Realization a1() {
    auto c = cartan_by_name("A1");
    return make_standard_realization(check_cartan_type(c.DA_series(), c));
}

RunConfig config(const std::string& text) { return config_from_json(parse_json_text(text)); }

std::string syntax_message(const std::string& src) {
    try {
        parse_expr(src, a1(), 3);
    } catch (const SyntaxError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("expression atoms") {
    auto R = a1();
    GenPoly tp = parse_expr("T+1", R, 3);
    REQUIRE(tp.size() == 1);
    CHECK(tp.begin()->first == GenWord{Sym{'H', 0}});
    GenPoly s = parse_expr("1/2*(T+1 + T-1)", R, 3);
    GenPoly s1 = parse_expr("S1", R, 3);
    CHECK(s == s1);
    CHECK(s.size() == 2);
    CHECK(parse_expr("L1", R, 3) == parse_expr("1/2*T+1 - 1/2*T-1", R, 3));
    CHECK(parse_expr("E1*F1", R, 3).begin()->first == GenWord{Sym{'E', 0}, Sym{'F', 0}});
    CHECK(parse_expr("-E1 + E1", R, 3).empty());
    CHECK(parse_expr("h", R, 3) == parse_expr("hbar", R, 3));
}

TEST_CASE("exp expands through the order") {
    auto R = a1();
    QContext ctx(R, 3);
    UElem x = ctx.normalize(parse_expr("exp(hbar*T+1)", R, 3));
    CHECK(x.equals_to(ctx.exp_toral(R.Tp.row(0), TruncLaurent::hbar()), 3));
    // One commutation step: exp(hbar T) E = E exp(hbar T) q^{alpha(T)}.
    UElem y = ctx.normalize(parse_expr("exp(hbar*T+1)*E1", R, 3));
    UElem z = ctx.normalize(parse_expr("E1*exp(hbar*T+1)", R, 3))
                  .scaled(qpow(TruncLaurent(R.P.P(0, 0)), 3));
    CHECK(y.equals_to(z, 3));
}

TEST_CASE("expression errors") {
    auto R = a1();
    CHECK(syntax_message("E1 + ").find("position 6") != std::string::npos);
    CHECK(syntax_message("E1 $ F1").find("position 4") != std::string::npos);
    CHECK(syntax_message("(E1").find("expected ')'") != std::string::npos);
    CHECK(syntax_message("T1").find("T+ or T-") != std::string::npos);
    CHECK_THROWS_AS(parse_expr("exp(E1)", R, 3), ExpArgument);
    CHECK_THROWS_AS(parse_expr("exp(T+1)", R, 3), ExpArgument);
    CHECK_THROWS_AS(parse_expr("E2", R, 3), IndexOutOfRange);
}

TEST_CASE("eval of the EF commutator gives the toral right-hand side") {
    RunConfig c = config(R"({"cartan": "A1", "order": 3})");
    UElem x = eval_expr(c, "E1*F1 - F1*E1");
    QContext ctx(build_realization(c), 3);
    CHECK(x.equals_to(ctx.ef_rhs(0), 3));
}

TEST_CASE("json round trip") {
    Rng rng(3);
    TruncLaurent f = TruncLaurent::from_terms({{-1, Rational(2, 3)}, {0, Rational(-1)}, {2, Rational(5, 7)}}, 4, 3);
    CHECK(series_from_json(to_json(f)) == f);
    CHECK(series_from_json(to_json(f)).order() == 4);
    CHECK(series_from_json(to_json(TruncLaurent(Rational(1, 2)))).exact());
    auto R = make_standard_realization(random_cartan_type(rng, cartan_by_name("A2"), true, true));
    CHECK(mat_equal(lmat_from_json(to_json(R.P.P)), R.P.P));
    CHECK(imat_from_json(to_json(R.P.cartan.A)) == R.P.cartan.A);
    QContext ctx(R, 2);
    UElem x = ctx.mul({ctx.F(1), ctx.H(0), ctx.E(0), ctx.E(1)});
    UElem y = element_from_json(to_json(x));
    CHECK(y.equals_to(x, 2));
    CHECK(to_json(y) == to_json(x));
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(config(R"({"order": 3})"), ConfigError);
    CHECK_THROWS_AS(config(R"({"cartan": "A1", "colour": 1})"), ConfigError);
    CHECK_THROWS_AS(config(R"({"cartan": "A1", "order": 0})"), ConfigError);
    CHECK_THROWS_AS(config(R"({"cartan": "A2", "P": [[2]]})"), ConfigError);
    CHECK_THROWS_AS(config(R"({"cartan": "A1", "realization": "round"})"), ConfigError);
    CHECK_THROWS_AS(config(R"({"cartan": "A1", "P": [["x"]]})"), ConfigError);
    try {
        parse_json_text("{\n  \"cartan\": ,\n}", "cfg");
        FAIL("no error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("cfg:2:") != std::string::npos);
    }
    RunConfig bad = config(R"({"cartan": "A2", "P": [[2, 0], [0, 2]]})");
    CHECK_THROWS_AS(build_realization(bad), NotCartanType);
    RunConfig low = config(R"({"cartan": "A1", "order": 1, "suite": "limit"})");
    CHECK_THROWS_AS(run_suites(low), ConfigError);
    RunConfig unknown = config(R"({"cartan": "A1", "suite": "nope"})");
    CHECK_THROWS_AS(run_suites(unknown), ConfigError);
}

TEST_CASE("explicit realization") {
    RunConfig c = config(R"({"cartan": "A1", "realization": {"kind": "explicit",
        "Tp": [[2, 0]], "Tm": [[0, 2]], "roots": [[1, 1]], "labels": ["a", "b"]}})");
    Realization R = build_realization(c);
    CHECK(R.t == 2);
    CHECK(R.labels[1] == "b");
    RunConfig wrong = config(R"({"cartan": "A1", "realization": {"kind": "explicit",
        "Tp": [[1, 0]], "Tm": [[1, 0]], "roots": [[1, 1]]}})");
    CHECK_THROWS_AS(build_realization(wrong), InvalidRealization);
}

TEST_CASE("reports are deterministic and complete") {
    RunConfig c = config(R"({"cartan": "A1", "order": 2, "seed": 5})");
    Json a = run_suites(c), b = run_suites(c);
    CHECK(a.dump() == b.dump());
    CHECK(report_ok(a));
    CHECK(a["suites"].size() == suite_names().size());
    for (const auto& s : a["suites"]) {
        CHECK(s.contains("theorem"));
        CHECK(s["cartan"] == "A1");
        // Rank one has no Serre pairs.
        if (s["suite"] != "serre") CHECK(!s["checks"].empty());
    }
    c.seed = 6;
    CHECK(run_suites(c)["parameters"].dump() != a["parameters"].dump());
    CHECK(report_text(a).find("status: pass") != std::string::npos);
}

TEST_CASE("explicit deformation inputs are validated") {
    RunConfig c = config(R"({"cartan": "A1", "phi": [[0, 1], [1, 0]], "suite": "twist"})");
    CHECK_THROWS_AS(run_suites(c), ConfigError);
    RunConfig d = config(R"({"cartan": "A1", "chi": [[0, 1], [-1, 0]], "suite": "cocycle"})");
    CHECK_THROWS_AS(run_suites(d), ConfigError);
    RunConfig e = config(R"({"cartan": "A1", "order": 2, "phi": [[0, "1/2"], ["-1/2", 0]], "suite": "twist"})");
    CHECK(report_ok(run_suites(e)));
}
