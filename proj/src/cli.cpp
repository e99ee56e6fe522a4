#include "mpqg/cli.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "mpqg/deform.hpp"
#include "mpqg/errors.hpp"
#include "mpqg/expr.hpp"
#include "mpqg/pairing.hpp"
#include "mpqg/random.hpp"
#include "mpqg/semiclassical.hpp"
#include "mpqg/tensor_rep.hpp"

namespace mpqg {

namespace {

int int_field(const Json& j, const std::string& key, int lo) {
    const Json& v = j[key];
    if (!v.is_number_integer() || v.get<long>() < lo)
        throw ConfigError("/" + key + ": expected an integer >= " + std::to_string(lo));
    return v.get<int>();
}

void check_square(const LMat& m, int n, const std::string& key) {
    if (m.rows() != n || m.cols() != n)
        throw ConfigError("/" + key + ": expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
}

struct Deformations {
    TwistMatrix phi, phi2;
    CocycleForm chi;
    LMat lambda;
};

Deformations deformations(const RunConfig& c, const Realization& R) {
    Rng rng(c.seed);
    Deformations d;
    d.phi = c.phi ? TwistMatrix{*c.phi} : random_twist(rng, R.t);
    d.phi2 = c.phi2 ? TwistMatrix{*c.phi2} : random_twist(rng, R.t);
    d.chi = c.chi ? CocycleForm{*c.chi} : random_alt_s(rng, R);
    d.lambda = zeros<TruncLaurent>(1, R.t);
    for (int g = 0; g < R.t; ++g) d.lambda(0, g) = TruncLaurent(random_rational(rng));
    for (const auto& [m, key] : {std::pair{&d.phi.Phi, "phi"}, std::pair{&d.phi2.Phi, "phi2"}, std::pair{&d.chi.X, "chi"}}) {
        check_square(*m, R.t, key);
        if (!is_antisymmetric(*m)) throw ConfigError(std::string("/") + key + ": matrix must be antisymmetric");
    }
    try {
        check_alt_s(R, d.chi);
    } catch (const Error& e) {
        throw ConfigError(std::string("/chi: ") + e.what());
    }
    return d;
}

CheckResult named(const std::string& name, const std::vector<std::string>& violations) {
    CheckResult r{name, violations.empty(), ""};
    if (!violations.empty()) r.witness = violations.front();
    return r;
}

using Suite = std::function<std::vector<CheckResult>(const Realization&, const RunConfig&, const Deformations&)>;

struct SuiteInfo {
    std::string name;
    std::string theorem;
    Suite run;
};

std::vector<CheckResult> realization_suite(const Realization& R, const RunConfig&, const Deformations&) {
    CheckResult plus{"alpha_on_T_plus", mat_equal(LMat(R.Tp * R.Amat.transpose()), R.P.P), ""};
    CheckResult minus{"alpha_on_T_minus", mat_equal(LMat(R.Tm * R.Amat.transpose()), LMat(R.P.P.transpose())), ""};
    CheckResult indep{"S_independent", rank_mod_h(R.S()) == R.n(), ""};
    CheckResult flags{"flags", classify(R) == R.flags, ""};
    return {plus, minus, indep, flags};
}

std::vector<CheckResult> confluence_suite(const Realization& R, const RunConfig& c, const Deformations&) {
    QContext ctx(R, c.order);
    Rewriter rw(ctx);
    Rng rng(c.seed);
    CheckResult conf{"two_strategies", true, ""}, assoc{"associativity", true, ""};
    for (int k = 0; k < 20; ++k) {
        GenWord w = random_genword(rng, R.n(), R.t, 5);
        GenPoly p{{w, TruncLaurent(1)}};
        UElem a = rw.to_element(rw.rewrite(p, Rewriter::Strategy::Leftmost));
        UElem b = rw.to_element(rw.rewrite(p, Rewriter::Strategy::Random, &rng));
        if (conf.ok && !a.equals_to(b, c.order)) {
            conf.ok = false;
            conf.witness = "word " + std::to_string(k);
        }
    }
    for (int k = 0; k < 10; ++k) {
        UElem x = ctx.normalize(random_genword(rng, R.n(), R.t, 2));
        UElem y = ctx.normalize(random_genword(rng, R.n(), R.t, 2));
        UElem z = ctx.normalize(random_genword(rng, R.n(), R.t, 2));
        if (assoc.ok && !ctx.mul(ctx.mul(x, y), z).equals_to(ctx.mul(x, ctx.mul(y, z)), c.order)) {
            assoc.ok = false;
            assoc.witness = "triple " + std::to_string(k);
        }
    }
    return {conf, assoc};
}

std::vector<CheckResult> hopf(const Realization& R, const RunConfig& c, const Deformations&) {
    QContext ctx(R, c.order);
    return hopf_suite(ctx);
}

std::vector<CheckResult> serre(const Realization& R, const RunConfig& c, const Deformations&) {
    QContext ctx(R, c.order, false);
    std::vector<CheckResult> out;
    for (int i = 0; i < R.n(); ++i)
        for (int j = 0; j < R.n(); ++j) {
            if (i == j) continue;
            for (const auto& r : serre_skewprimitive_check(ctx, i, j)) out.push_back(r);
        }
    return out;
}

std::vector<CheckResult> pairing(const Realization& R, const RunConfig& c, const Deformations&) {
    SkewPairing pi(R, c.order);
    QContext ctx(R, c.order);
    auto out = pairing_generator_table(pi);
    for (const auto& r : pairing_radical_check(pi, ctx, 3)) out.push_back(r);
    return out;
}

std::vector<CheckResult> rep(const Realization& R, const RunConfig& c, const Deformations& d) {
    QContext ctx(R, c.order, false);
    return representation_check(ctx, d.lambda, 4);
}

std::vector<CheckResult> lie(const Realization& R, const RunConfig& c, const Deformations& d) {
    const int bound = c.bound > 0 ? c.bound : default_bound(R.P.cartan);
    MpLbA g = build_mplba(R, bound);
    std::vector<CheckResult> out{named("bialgebra", check_bialgebra(g))};
    MpLbA gt = lie_twist_deform(g, LieTwist{const_part(d.phi.Phi)});
    MpLbA qt = build_mplba(twist_realization(R, d.phi).second, bound);
    auto bad = compare_cobrackets(gt, qt);
    for (const auto& s : compare_brackets(gt, qt)) bad.push_back(s);
    out.push_back(named("twisted_bialgebra", check_bialgebra(gt)));
    out.push_back(named("twist_tables", bad));
    MpLbA gc = lie_cocycle_deform(g, LieCocycle{const_part(d.chi.X)});
    MpLbA qc = build_mplba(cocycle_realization(R, d.chi).second, bound);
    bad = compare_cobrackets(gc, qc);
    for (const auto& s : compare_brackets(gc, qc)) bad.push_back(s);
    out.push_back(named("cocycle_bialgebra", check_bialgebra(gc)));
    out.push_back(named("cocycle_tables", bad));
    return out;
}

const std::vector<SuiteInfo>& suites() {
    static const std::vector<SuiteInfo> all{
        {"realization", "realizations of multiparameter matrices", realization_suite},
        {"confluence", "PBW normal forms and associativity", confluence_suite},
        {"hopf", "Hopf structure of the multiparameter QUEA", hopf},
        {"serre", "quantum Serre elements are skew-primitive", serre},
        {"twist", "toral twist deformation",
         [](const Realization& R, const RunConfig& c, const Deformations& d) {
             return verify_twist_theorem(R, d.phi, d.phi2, c.order);
         }},
        {"cocycle", "toral 2-cocycle deformation",
         [](const Realization& R, const RunConfig& c, const Deformations& d) {
             return verify_cocycle_theorem(R, d.chi, c.order);
         }},
        {"pairing", "skew-Hopf pairing of the Borel halves", pairing},
        {"double", "cross relations of the quantum double",
         [](const Realization& R, const RunConfig& c, const Deformations&) { return double_relations_check(R, c.order); }},
        {"rep", "tensor representations without Serre relations", rep},
        {"lie", "multiparameter Lie bialgebra and its toral deformations", lie},
        {"limit", "semiclassical limit",
         [](const Realization& R, const RunConfig& c, const Deformations&) {
             LimitContext lc(R, c.order);
             return check_limit(lc);
         }},
        {"square-twist", "twist deformation commutes with specialization",
         [](const Realization& R, const RunConfig& c, const Deformations& d) {
             return check_square_twist(R, d.phi, c.order);
         }},
        {"square-cocycle", "2-cocycle deformation commutes with specialization",
         [](const Realization& R, const RunConfig& c, const Deformations& d) {
             return check_square_cocycle(R, d.chi, c.order);
         }},
    };
    return all;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& s : suites()) v.push_back(s.name);
        return v;
    }();
    return names;
}

RunConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("/: expected a JSON object");
    static const std::set<std::string> known{"cartan", "P",   "realization", "order", "guard", "bound",
                                             "phi",    "phi2", "chi",        "suite", "seed"};
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw ConfigError("/" + k + ": unknown key");
    if (!j.contains("cartan")) throw ConfigError("/cartan: missing");
    RunConfig c;
    try {
        if (j["cartan"].is_string()) c.cartan = cartan_by_name(j["cartan"].get<std::string>());
        else c.cartan = symmetrize(imat_from_json(j["cartan"], "/cartan"), "custom");
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("/cartan: ") + e.what());
    }
    const int n = c.cartan.n();
    if (j.contains("P")) {
        c.P = lmat_from_json(j["P"], "/P");
        check_square(*c.P, n, "P");
    }
    if (j.contains("realization")) {
        const Json& r = j["realization"];
        if (r.is_string()) {
            c.realization = r.get<std::string>();
        } else if (r.is_object() && r.contains("kind") && r["kind"].is_string()) {
            c.realization = r["kind"].get<std::string>();
            if (r.contains("ell")) {
                if (!r["ell"].is_number_integer()) throw ConfigError("/realization/ell: expected an integer");
                c.ell = r["ell"].get<int>();
            }
            c.explicit_realization = r;
        } else {
            throw ConfigError("/realization: expected a kind string or an object with \"kind\"");
        }
        static const std::set<std::string> kinds{"standard", "split", "small", "explicit"};
        if (!kinds.count(c.realization)) throw ConfigError("/realization: unknown kind \"" + c.realization + "\"");
    }
    if (j.contains("order")) c.order = int_field(j, "order", 1);
    if (j.contains("guard")) c.guard = int_field(j, "guard", 1);
    if (j.contains("bound")) c.bound = int_field(j, "bound", 1);
    if (j.contains("phi")) c.phi = lmat_from_json(j["phi"], "/phi");
    if (j.contains("phi2")) c.phi2 = lmat_from_json(j["phi2"], "/phi2");
    if (j.contains("chi")) c.chi = lmat_from_json(j["chi"], "/chi");
    if (j.contains("suite")) {
        const Json& s = j["suite"];
        c.suites.clear();
        if (s.is_string()) c.suites.push_back(s.get<std::string>());
        else if (s.is_array())
            for (const auto& x : s) {
                if (!x.is_string()) throw ConfigError("/suite: expected suite names");
                c.suites.push_back(x.get<std::string>());
            }
        else throw ConfigError("/suite: expected a name or an array of names");
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ConfigError("/seed: expected a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return config_from_json(parse_json_text(ss.str(), path));
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        if (msg.rfind("ConfigError: " + path, 0) == 0) throw;
        throw ConfigError(path + ": " + msg.substr(std::string("ConfigError: ").size()));
    }
}

Realization build_realization(const RunConfig& c) {
    MpMatrix P = check_cartan_type(c.P ? *c.P : c.cartan.DA_series(), c.cartan);
    if (c.realization == "standard") return make_standard_realization(P);
    if (c.realization == "split") return make_split_realization(P, c.ell);
    if (c.realization == "small") return make_small_realization(P, c.ell);
    const Json& r = c.explicit_realization;
    for (const char* key : {"Tp", "Tm", "roots"})
        if (!r.contains(key)) throw ConfigError(std::string("/realization/") + key + ": missing");
    Realization R;
    R.P = P;
    R.Tp = lmat_from_json(r["Tp"], "/realization/Tp");
    R.Tm = lmat_from_json(r["Tm"], "/realization/Tm");
    R.Amat = lmat_from_json(r["roots"], "/realization/roots");
    R.t = static_cast<int>(R.Tp.cols());
    if (r.contains("labels")) {
        if (!r["labels"].is_array()) throw ConfigError("/realization/labels: expected an array of strings");
        for (const auto& l : r["labels"]) {
            if (!l.is_string()) throw ConfigError("/realization/labels: expected an array of strings");
            R.labels.push_back(l.get<std::string>());
        }
        if (static_cast<int>(R.labels.size()) != R.t) throw ConfigError("/realization/labels: need one label per column");
    } else {
        for (int g = 1; g <= R.t; ++g) R.labels.push_back("H" + std::to_string(g));
    }
    validate_realization(R);
    R.flags = classify(R);
    return R;
}

Json run_suites(const RunConfig& c) {
    std::vector<const SuiteInfo*> chosen;
    for (const auto& name : c.suites) {
        if (name == "all") {
            for (const auto& s : suites()) chosen.push_back(&s);
            continue;
        }
        const SuiteInfo* found = nullptr;
        for (const auto& s : suites())
            if (s.name == name) found = &s;
        if (!found) throw ConfigError("/suite: unknown suite \"" + name + "\"");
        chosen.push_back(found);
    }
    for (const auto* s : chosen)
        if (s->name == "limit" || s->name.rfind("square", 0) == 0)
            if (c.order < 2) throw ConfigError("/order: semiclassical suites need order >= 2");

    Realization R = build_realization(c);
    Deformations d = deformations(c, R);
    Json params;
    params["order"] = c.order;
    params["guard"] = c.guard;
    params["seed"] = c.seed;
    params["realization"] = to_json(R);
    params["phi"] = to_json(d.phi.Phi);
    params["phi2"] = to_json(d.phi2.Phi);
    params["chi"] = to_json(d.chi.X);
    params["lambda"] = to_json(d.lambda);

    Json report;
    report["cartan"] = c.cartan.name;
    report["parameters"] = params;
    report["suites"] = Json::array();
    bool ok = true;
    for (const auto* s : chosen) {
        std::vector<CheckResult> res;
        try {
            res = s->run(R, c, d);
        } catch (const Error& e) {
            res.push_back(CheckResult{"error", false, e.what()});
        }
        Json checks = Json::array();
        for (const auto& r : res) {
            checks.push_back(to_json(r));
            ok = ok && r.ok;
        }
        report["suites"].push_back(Json{{"suite", s->name},
                                        {"theorem", s->theorem},
                                        {"cartan", c.cartan.name},
                                        {"parameters", Json{{"order", c.order}, {"seed", c.seed}}},
                                        {"checks", checks}});
    }
    report["status"] = ok ? "pass" : "fail";
    return report;
}

bool report_ok(const Json& report) { return report.value("status", "fail") == "pass"; }

std::string report_text(const Json& report) {
    std::ostringstream os;
    for (const auto& s : report["suites"]) {
        os << s["suite"].get<std::string>() << " (" << s["theorem"].get<std::string>() << ")\n";
        for (const auto& c : s["checks"]) {
            os << "  " << (c["status"] == "pass" ? "PASS" : "FAIL") << "  " << c["name"].get<std::string>();
            if (!c["witness"].get<std::string>().empty()) os << "  " << c["witness"].get<std::string>();
            os << "\n";
        }
    }
    os << "status: " << report["status"].get<std::string>() << "\n";
    return os.str();
}

UElem eval_expr(const RunConfig& c, const std::string& src) {
    Realization R = build_realization(c);
    QContext ctx(R, c.order);
    return ctx.normalize(parse_expr(src, R, c.order)).truncated(c.order);
}

std::string element_text(const UElem& x, const std::vector<std::string>& labels) {
    if (x.is_zero()) return "0";
    std::string s;
    for (const auto& [m, c] : x.terms) {
        if (!s.empty()) s += "\n+ ";
        s += "(" + c.str() + ")";
        if (!m.is_unit()) s += " * " + mono_str(m, labels);
    }
    return s;
}

}  // namespace mpqg
