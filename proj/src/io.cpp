#include "mpqg/io.hpp"

#include "mpqg/errors.hpp"

namespace mpqg {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

template <class M, class F>
Json matrix_json(const M& m, F entry) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(entry(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

Json word_json(const Word& w) {
    Json a = Json::array();
    for (int i : w) a.push_back(i + 1);
    return a;
}

Word word_from_json(const Json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path + ": expected an array of generator indices");
    Word w;
    for (const auto& x : j) {
        if (!x.is_number_integer() || x.get<int>() < 1) throw ConfigError(path + ": indices start at 1");
        w.push_back(x.get<int>() - 1);
    }
    return w;
}

// Nested bracketing array of a left-normed word: [[E1, E2], E1] style.
Json bracketing(const Word& w, char gen) {
    Json x = std::string(1, gen) + std::to_string(w.front() + 1);
    for (std::size_t k = 1; k < w.size(); ++k) x = Json::array({x, std::string(1, gen) + std::to_string(w[k] + 1)});
    return x;
}

}  // namespace

Json to_json(const Rational& r) { return r.str(); }

Json to_json(const TruncLaurent& f) {
    Json terms = Json::object();
    for (const auto& [e, c] : f.terms()) terms[std::to_string(e)] = c.str();
    Json out;
    out["vmax"] = f.vmax();
    out["N"] = f.exact() ? Json(nullptr) : Json(f.order());
    out["terms"] = terms;
    return out;
}

Json to_json(const LMat& m) {
    return matrix_json(m, [](const TruncLaurent& x) { return to_json(x); });
}

Json to_json(const QMat& m) {
    return matrix_json(m, [](const Rational& x) { return to_json(x); });
}

Json to_json(const IMat& m) {
    return matrix_json(m, [](int x) { return Json(x); });
}

Json to_json(const Mono& m) {
    Json out;
    out["F"] = word_json(m.f);
    out["H"] = m.h;
    out["E"] = word_json(m.e);
    return out;
}

Json to_json(const UElem& x) {
    Json out = Json::array();
    for (const auto& [m, c] : x.terms) out.push_back(Json{{"monomial", to_json(m)}, {"coefficient", to_json(c)}});
    return out;
}

Json to_json(const Realization& R) {
    Json out;
    out["cartan"] = to_json(R.P.cartan.A);
    out["P"] = to_json(R.P.P);
    out["t"] = R.t;
    out["labels"] = R.labels;
    out["Tp"] = to_json(R.Tp);
    out["Tm"] = to_json(R.Tm);
    out["roots"] = to_json(R.Amat);
    out["flags"] = Json{{"straight", R.flags.straight},
                        {"small", R.flags.small},
                        {"split", R.flags.split},
                        {"minimal", R.flags.minimal}};
    return out;
}

Json to_json(const CheckResult& r) {
    return Json{{"name", r.name}, {"status", r.ok ? "pass" : "fail"}, {"witness", r.witness}};
}

Json to_json(const MpLbA& g) {
    const auto& B = g.basis;
    Json basis = Json::array();
    for (int a = 0; a < B.m(); ++a) basis.push_back(bracketing(B.nil.words[sz(a)], 'F'));
    for (int k = 0; k < B.t; ++k) basis.push_back(B.labels[sz(B.h(k))]);
    for (int a = 0; a < B.m(); ++a) basis.push_back(bracketing(B.nil.words[sz(a)], 'E'));
    Json bracket = Json::array(), cobracket = Json::array();
    for (int p = 0; p < g.dim(); ++p) {
        for (int q = 0; q < g.dim(); ++q)
            for (int r = 0; r < g.dim(); ++r) {
                const Rational& c = g.bracket[sz(p)][sz(q)](r);
                if (!c.is_zero()) bracket.push_back(Json::array({p, q, r, c.str()}));
            }
        const QMat& C = g.cobracket[sz(p)];
        for (int a = 0; a < g.dim(); ++a)
            for (int b = 0; b < g.dim(); ++b)
                if (!C(a, b).is_zero()) cobracket.push_back(Json::array({p, a, b, C(a, b).str()}));
    }
    return Json{{"basis", basis}, {"bracket", bracket}, {"cobracket", cobracket}};
}

Rational rational_from_json(const Json& j, const std::string& path) {
    try {
        if (j.is_number_integer()) return Rational(j.get<long>());
        if (j.is_string()) return Rational::parse(j.get<std::string>());
    } catch (const Error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    throw ConfigError(path + ": expected an integer or a string \"a/b\"");
}

TruncLaurent series_from_json(const Json& j, const std::string& path) {
    if (!j.is_object()) return TruncLaurent(rational_from_json(j, path));
    if (!j.contains("terms") || !j["terms"].is_object()) throw ConfigError(path + ": series needs a \"terms\" object");
    int vmax = TruncLaurent::kDefaultVmax;
    int order = TruncLaurent::kExact;
    if (j.contains("vmax")) {
        if (!j["vmax"].is_number_integer()) throw ConfigError(path + "/vmax: expected an integer");
        vmax = j["vmax"].get<int>();
    }
    if (j.contains("N") && !j["N"].is_null()) {
        if (!j["N"].is_number_integer()) throw ConfigError(path + "/N: expected an integer or null");
        order = j["N"].get<int>();
    }
    std::map<int, Rational> terms;
    for (const auto& [k, v] : j["terms"].items()) {
        int e = 0;
        try {
            std::size_t used = 0;
            e = std::stoi(k, &used);
            if (used != k.size()) throw std::invalid_argument(k);
        } catch (const std::exception&) {
            throw ConfigError(path + "/terms: bad exponent \"" + k + "\"");
        }
        terms[e] = rational_from_json(v, path + "/terms/" + k);
    }
    try {
        return TruncLaurent::from_terms(terms, order, vmax);
    } catch (const Error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

LMat lmat_from_json(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw ConfigError(path + ": expected a matrix (array of rows)");
    const auto r = static_cast<Eigen::Index>(j.size()), c = static_cast<Eigen::Index>(j[0].size());
    LMat m = zeros<TruncLaurent>(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        const Json& row = j[sz(static_cast<int>(i))];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c)
            throw ConfigError(path + "/" + std::to_string(i) + ": rows must have equal length");
        for (Eigen::Index k = 0; k < c; ++k)
            m(i, k) = series_from_json(row[sz(static_cast<int>(k))], path + "/" + std::to_string(i) + "/" + std::to_string(k));
    }
    return m;
}

IMat imat_from_json(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw ConfigError(path + ": expected an integer matrix");
    const auto r = static_cast<Eigen::Index>(j.size()), c = static_cast<Eigen::Index>(j[0].size());
    IMat m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        const Json& row = j[sz(static_cast<int>(i))];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c)
            throw ConfigError(path + "/" + std::to_string(i) + ": rows must have equal length");
        for (Eigen::Index k = 0; k < c; ++k) {
            const Json& x = row[sz(static_cast<int>(k))];
            if (!x.is_number_integer())
                throw ConfigError(path + "/" + std::to_string(i) + "/" + std::to_string(k) + ": expected an integer");
            m(i, k) = x.get<int>();
        }
    }
    return m;
}

Mono mono_from_json(const Json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected a monomial object");
    Mono m;
    if (j.contains("F")) m.f = word_from_json(j["F"], path + "/F");
    if (j.contains("E")) m.e = word_from_json(j["E"], path + "/E");
    if (j.contains("H")) {
        if (!j["H"].is_array()) throw ConfigError(path + "/H: expected an exponent array");
        for (const auto& x : j["H"]) {
            if (!x.is_number_integer() || x.get<int>() < 0) throw ConfigError(path + "/H: exponents are naturals");
            m.h.push_back(x.get<int>());
        }
    }
    return m;
}

UElem element_from_json(const Json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path + ": expected an array of terms");
    UElem x;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string p = path + "/" + std::to_string(k);
        if (!j[k].contains("monomial") || !j[k].contains("coefficient"))
            throw ConfigError(p + ": term needs \"monomial\" and \"coefficient\"");
        x.add(mono_from_json(j[k]["monomial"], p + "/monomial"), series_from_json(j[k]["coefficient"], p + "/coefficient"));
    }
    return x;
}

Json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
    }
}

}  // namespace mpqg
