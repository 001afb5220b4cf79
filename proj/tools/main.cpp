// su11 command-line tool: verification suites, entropy sweeps, Wigner grid
// export, and group-parameter composition.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "su11/cli.hpp"

namespace {

using namespace su11;

int write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file " << path << "\n";
        return 2;
    }
    out << text;
    return 0;
}

cli::RunConfig make_config(const std::string& config_path, const std::string& out,
                           const std::string& format, int cutoff, long long seed,
                           const std::vector<std::string>& checks) {
    cli::RunConfig cfg = config_path.empty() ? cli::RunConfig{} : cli::load_config(config_path);
    if (!out.empty()) cfg.output_path = out;
    if (!format.empty()) {
        if (format == "csv") cfg.format = cli::OutputFormat::Csv;
        else if (format == "json") cfg.format = cli::OutputFormat::Json;
        else throw ConfigError("--format must be csv or json");
    }
    if (cutoff > 0) cfg.cutoff = cutoff;
    if (seed >= 0) cfg.seed = std::uint64_t(seed);
    if (!checks.empty()) cfg.checks = checks;
    cfg.validate();
    return cfg;
}

int cmd_verify(const cli::RunConfig& cfg) {
    std::printf("seed: %llu\n", static_cast<unsigned long long>(cfg.seed));
    const auto results = cli::run_verify(cfg);
    if (results.empty()) {
        std::cerr << "error: no checks matched the filter\n";
        return 2;
    }
    bool all_pass = true;
    std::string first_fail;
    for (const auto& r : results) {
        std::printf("%-36s residual=%-12.3e tol=%-9.1e %s%s%s\n", r.name.c_str(), r.residual,
                    r.tol, r.pass ? "PASS" : "FAIL", r.note.empty() ? "" : "  ",
                    r.note.c_str());
        if (!r.pass && all_pass) {
            all_pass = false;
            first_fail = r.name;
        }
    }
    if (!all_pass) std::printf("FAILED: %s\n", first_fail.c_str());
    return all_pass ? 0 : 1;
}

int cmd_sweep(const cli::RunConfig& cfg) {
    const auto rows = cli::sweep_rows(cfg);
    return write_output(cli::render_sweep(rows, cfg.format), cfg.output_path);
}

int cmd_wigner_grid(const cli::RunConfig& cfg) {
    const auto rows = cli::wigner_grid_rows(cfg);
    return write_output(cli::render_wigner(rows, cfg.output_path.empty() && false
                                               ? cli::OutputFormat::Csv
                                               : cfg.format),
                        cfg.output_path);
}

int cmd_compose(const std::string& params_path) {
    std::ifstream in(params_path);
    if (!in) throw ConfigError("cannot open params file: " + params_path);
    cli::json j;
    try {
        in >> j;
    } catch (const cli::json::exception& e) {
        throw ConfigError(std::string("params file is not valid JSON: ") + e.what());
    }
    AlgebraParams p1, p2;
    try {
        p1 = cli::parse_params(j.at("p1"));
        p2 = cli::parse_params(j.at("p2"));
    } catch (const cli::json::exception& e) {
        throw ConfigError(std::string("params file needs p1/p2 objects: ") + e.what());
    }
    AlgebraParams sigma;
    try {
        sigma = compose(p1, p2);
    } catch (const BranchAmbiguity& e) {
        std::printf("branch-ambiguity: %s\n", e.what());
        return 1;
    }
    auto show = [](const char* name, cplx v) {
        std::printf("%s = %.12g %+.12gi\n", name, v.real(), v.imag());
    };
    show("sigma_plus ", sigma.omega_plus);
    show("sigma_zero ", sigma.omega_zero);
    show("sigma_minus", sigma.omega_minus);
    std::printf("unitary: %s\n", is_unitary(sigma, 1e-10) ? "true" : "false");
    try {
        const AlgebraParams alt = compose_via_factors(p1, p2);
        std::printf("factor-route agreement: %.3e\n",
                    std::sqrt(std::norm(alt.omega_plus - sigma.omega_plus) +
                              std::norm(alt.omega_zero - sigma.omega_zero) +
                              std::norm(alt.omega_minus - sigma.omega_minus)));
    } catch (const Error& e) {
        std::printf("factor-route singular: %s\n", e.what());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"su(1,1) squeezing algebra, detuned amplifier dynamics, and Wehrl-entropy toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path, format, params_path;
    int cutoff = -1;
    long long seed = -1;
    std::vector<std::string> checks;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration");
        sub->add_option("--out", out_path, "output file (default stdout)");
        sub->add_option("--format", format, "csv or json");
        sub->add_option("--cutoff", cutoff, "Fock-space cutoff override");
        sub->add_option("--seed", seed, "seed for randomized suites");
    };

    CLI::App* verify = app.add_subcommand("verify", "run the oracle/invariant suite");
    add_common(verify);
    verify->add_option("--checks", checks, "check-name prefixes to run");

    CLI::App* sweep = app.add_subcommand("sweep", "entropy/correlation sweep over the time grid");
    add_common(sweep);

    CLI::App* wigner = app.add_subcommand("wigner-grid", "export a Wigner-function slice");
    add_common(wigner);

    CLI::App* comp = app.add_subcommand("compose", "compose two group parameter triples");
    comp->add_option("params", params_path, "JSON file with p1/p2")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (comp->parsed()) return cmd_compose(params_path);
        const su11::cli::RunConfig cfg =
            make_config(config_path, out_path, format, cutoff, seed, checks);
        if (verify->parsed()) return cmd_verify(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg);
        if (wigner->parsed()) return cmd_wigner_grid(cfg);
    } catch (const su11::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const su11::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
