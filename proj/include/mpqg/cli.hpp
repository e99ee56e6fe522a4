#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpqg/io.hpp"

namespace mpqg {

struct RunConfig {
    CartanDatum cartan;
    std::optional<LMat> P;            // defaults to DA
    std::string realization = "standard";  // standard | split | small | explicit
    int ell = 0;
    Json explicit_realization;        // Tp, Tm, roots, labels for the explicit kind
    int order = 3;
    int guard = 1;
    int bound = 0;                    // 0: height of the highest root
    std::optional<LMat> phi, phi2, chi;
    std::vector<std::string> suites{"all"};
    std::uint64_t seed = 1;
};

// Unknown keys and malformed values throw ConfigError naming the JSON path.
RunConfig config_from_json(const Json& j);
RunConfig load_config(const std::string& path);
Realization build_realization(const RunConfig& c);

// Suite names accepted by run_suites, in execution order for "all".
const std::vector<std::string>& suite_names();
// Deterministic report {"cartan", "parameters", "suites": [{suite, theorem, cartan, parameters, checks}], "status"}.
Json run_suites(const RunConfig& c);
bool report_ok(const Json& report);
std::string report_text(const Json& report);

// Normal form of an expression in the configured algebra.
UElem eval_expr(const RunConfig& c, const std::string& src);
std::string element_text(const UElem& x, const std::vector<std::string>& labels);

}  // namespace mpqg
