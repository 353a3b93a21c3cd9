// lbern: experiment runner for lambda-Bernstein operators. Writes one CSV
// report per invocation; exit status 0 iff every summary line is PASS,
// 1 on a FAIL line, 2 on a usage error.
#include <lbern/experiments.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string command_help() {
    std::string s = "Commands: " + lbern::detail::join(lbern::command_names()) + "\nChecks:";
    for (const auto& c : lbern::command_names()) {
        const auto checks = lbern::check_names(c);
        s += "\n  " + c + ": " +
             lbern::detail::join(std::vector<std::string>(checks.begin() + 1, checks.end()));
    }
    return s;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Experiments with lambda-Bernstein operators; CSV on stdout or --out"};
    app.footer(command_help() + "\nLB_RESOLUTION overrides the modulus grid resolution (default 512).");
    app.set_config("--config", "", "TOML/INI file of option defaults; flags take precedence");

    lbern::ExperimentConfig cfg;
    int m = 0;
    app.add_option("command", cfg.command, "Experiment to run")->required();
    app.add_option("--check", cfg.check, "Acceptance preset for the command");
    app.add_option("--n", cfg.n, "Operator degree n")->capture_default_str();
    app.add_option("--m", m, "Second degree m (bivariate; defaults to n)");
    app.add_option("--lambda", cfg.lambda, "Shape parameter in [-1, 1]")->capture_default_str();
    app.add_option("--fn", cfg.fn, "Catalog function name");
    app.add_option("--grid", cfg.grid, "Grid point count (per axis for bivariate)");
    app.add_option("--ladder", cfg.ladder, "Comma-separated increasing degree ladder")
        ->delimiter(',');
    app.add_option("--matrix", cfg.matrix, "Summability matrix: cesaro, riesz_linear, identity")
        ->capture_default_str();
    app.add_option("--weights", cfg.weights, "Weighted-mean stage: none, unit, linear")
        ->capture_default_str();
    app.add_option("--seq", cfg.seq, "Sequence catalog name for statistical");
    app.add_option("--x", cfg.x, "Evaluation point x")->capture_default_str();
    app.add_option("--y", cfg.y, "Evaluation point y")->capture_default_str();
    app.add_option("--out", cfg.out, "Output path (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }
    if (app.count("--m") > 0 || !app.get_option("--m")->empty()) cfg.m = m;

    lbern::CsvReport report;
    try {
        report = lbern::run_experiment(cfg);
    } catch (const lbern::usage_error& e) {
        std::cerr << "lbern: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "lbern: error: " << e.what() << "\n";
        return kExitFail;
    }

    if (cfg.out.empty()) {
        lbern::write_csv(std::cout, report);
    } else {
        std::ofstream os(cfg.out, std::ios::binary);
        if (!os) {
            std::cerr << "lbern: cannot open " << cfg.out << "\n";
            return kExitUsage;
        }
        lbern::write_csv(os, report);
    }
    return report.all_pass() ? 0 : kExitFail;
}
