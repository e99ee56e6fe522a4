#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "mpqg/cli.hpp"
#include "mpqg/errors.hpp"

using namespace mpqg;

namespace {

struct Common {
    std::string config;
    int order = 0;
    long long seed = -1;
    std::string out;
    std::string format = "json";
};

void add_common(CLI::App* cmd, Common& o) {
    cmd->add_option("--config", o.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    cmd->add_option("--order", o.order, "Truncation order N (overrides the config)")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "Seed for randomized inputs (overrides the config)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", o.out, "Write the output to a file");
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));
}

RunConfig configure(const Common& o) {
    RunConfig c = load_config(o.config);
    if (o.order > 0) c.order = o.order;
    if (o.seed >= 0) c.seed = static_cast<std::uint64_t>(o.seed);
    return c;
}

void emit(const Common& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw ConfigError(o.out + ": cannot write");
    f << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiparameter quantum group verifier"};
    app.require_subcommand(1);

    Common verify_opts;
    std::string suite_pos, suite_opt;
    auto* verify = app.add_subcommand("verify", "Run verification suites and write a report");
    add_common(verify, verify_opts);
    std::vector<std::string> names = suite_names();
    names.push_back("all");
    verify->add_option("name", suite_pos, "Suite to run")->check(CLI::IsMember(names));
    verify->add_option("--suite", suite_opt, "Suite to run")->check(CLI::IsMember(names));

    Common eval_opts;
    std::string expr;
    auto* eval = app.add_subcommand("eval", "Normal form of an expression");
    add_common(eval, eval_opts);
    eval->add_option("expr", expr, "Expression, e.g. \"E1*F1 - F1*E1\"")->required();

    Common export_opts;
    auto* exp = app.add_subcommand("export", "Export the realization and the Lie bialgebra tables");
    add_common(exp, export_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) {
            RunConfig c = configure(verify_opts);
            if (!suite_pos.empty() && !suite_opt.empty() && suite_pos != suite_opt)
                throw ConfigError("suite given twice with different values");
            if (!suite_pos.empty()) c.suites = {suite_pos};
            if (!suite_opt.empty()) c.suites = {suite_opt};
            Json report = run_suites(c);
            emit(verify_opts, verify_opts.format == "json" ? report.dump(2) + "\n" : report_text(report));
            return report_ok(report) ? 0 : 1;
        }
        if (eval->parsed()) {
            RunConfig c = configure(eval_opts);
            UElem x = eval_expr(c, expr);
            if (eval_opts.format == "json") {
                Json j{{"expression", expr}, {"order", c.order}, {"normal_form", to_json(x)}};
                emit(eval_opts, j.dump(2) + "\n");
            } else {
                emit(eval_opts, element_text(x, build_realization(c).labels) + "\n");
            }
            return 0;
        }
        RunConfig c = configure(export_opts);
        Realization R = build_realization(c);
        MpLbA g = build_mplba(R, c.bound > 0 ? c.bound : default_bound(R.P.cartan));
        Json j{{"realization", to_json(R)}, {"lie", to_json(g)}};
        emit(export_opts, j.dump(2) + "\n");
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
