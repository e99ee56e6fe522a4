#pragma once

#include <json.hpp>
#include <string>

#include "mpqg/liebialg.hpp"
#include "mpqg/quea.hpp"

namespace mpqg {

using Json = nlohmann::ordered_json;

// Rationals as "a/b"; series as {"vmax", "N", "terms": {"e": "a/b"}} with N null for exact values.
Json to_json(const Rational& r);
Json to_json(const TruncLaurent& f);
Json to_json(const LMat& m);
Json to_json(const QMat& m);
Json to_json(const IMat& m);
// Monomial F_f H^h E_e as {"F": [...], "H": [...], "E": [...]}, generator indices from 1.
Json to_json(const Mono& m);
// Normal form as an array of {"monomial", "coefficient"}.
Json to_json(const UElem& x);
Json to_json(const Realization& R);
Json to_json(const CheckResult& r);
// Basis labels as nested bracketing arrays, bracket and cobracket tables as sparse entries.
Json to_json(const MpLbA& g);

// Inverse maps. Matrix and series entries also accept plain numbers and "a/b" strings.
// Errors throw ConfigError naming the offending path.
Rational rational_from_json(const Json& j, const std::string& path = "");
TruncLaurent series_from_json(const Json& j, const std::string& path = "");
LMat lmat_from_json(const Json& j, const std::string& path = "");
IMat imat_from_json(const Json& j, const std::string& path = "");
Mono mono_from_json(const Json& j, const std::string& path = "");
UElem element_from_json(const Json& j, const std::string& path = "");

// Parses a JSON document; syntax errors become ConfigError with line and column.
Json parse_json_text(const std::string& text, const std::string& source = "<input>");

}  // namespace mpqg
