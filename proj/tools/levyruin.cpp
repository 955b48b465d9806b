#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "levyruin/commands.hpp"

namespace {

using namespace levyruin;
using namespace levyruin::cli;

void add_model_options(CLI::App* app, ModelOptions& m) {
    app->add_option("--config", m.config, "Model file (key = value lines)");
    app->add_option("--model", m.model, "Built-in parameterisation instead of a file")
        ->check(CLI::IsMember({"config", "perturbed"}));
    app->add_option("--p", m.p, "Perturbed model: premium rate");
    app->add_option("--sigma2", m.sigma2, "Perturbed model: Brownian variance rate");
    app->add_option("--beta", m.beta, "Perturbed model: claim arrival rate");
    app->add_option("--alpha", m.alpha, "Perturbed model: exponential claim-size rate");
}

void add_simulation_options(CLI::App* app, SimulationOptions& s, bool with_grid) {
    if (with_grid) {
        app->add_option("--u", s.u, "Initial capital (repeatable)");
        app->add_option("--u-grid", s.u_grid, "Capital grid a:b:n");
    }
    app->add_option("--paths", s.paths, "Number of paths")->check(CLI::PositiveNumber);
    app->add_option_function<double>(
        "--horizon", [&s](double v) { s.horizon = v; }, "Time horizon T (default max(1e3, 50 u_max / delta))");
    app->add_option("--dt", s.dt, "Brownian grid step");
    app->add_option("--seed", s.seed, "Master seed");
    app->add_flag("--no-bridge", s.no_bridge, "Grid-only minimum, no Brownian bridge sampling");
    app->add_option("--workers", s.workers, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
    app->add_option("--out", s.out_path, "CSV output file (a .manifest.json is written next to it)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ruin regimes, Lundberg-type bounds and Monte Carlo certification for Levy risk processes",
                 "levyruin"};
    app.set_version_flag("--version", levyruin::version);
    app.require_subcommand(1);

    std::string manifest_path;
    const auto common = [&](CLI::App* sub) {
        sub->set_version_flag("--version", levyruin::version);
        sub->add_option("--manifest", manifest_path, "Write a JSON run manifest to this file");
    };

    ClassifyOptions classify_opts;
    auto* classify_cmd = app.add_subcommand("classify", "Classify a model into case A, B, C or D");
    common(classify_cmd);
    add_model_options(classify_cmd, classify_opts.model);
    classify_cmd->add_option("--tol", classify_opts.tol, "Root tolerance on |Psi|");
    classify_cmd->add_option("--mode", classify_opts.mode, "closed_form, quadrature or both");
    classify_cmd->add_flag("--summary", classify_opts.summary_only, "Print only the one-line summary");

    PsiCurveOptions curve_opts;
    auto* curve_cmd = app.add_subcommand("psi-curve", "Tabulate gamma, Psi, Psi' as CSV");
    common(curve_cmd);
    add_model_options(curve_cmd, curve_opts.model);
    curve_cmd->add_option("--n", curve_opts.n, "Number of rows (>= 2)");
    curve_cmd->add_option("--gamma-max", curve_opts.gamma_max, "Upper end of the grid when gamma_c is infinite");
    curve_cmd->add_option("--mode", curve_opts.mode, "closed_form, quadrature or both");
    curve_cmd->add_option("--out", curve_opts.out_path, "CSV output file");

    ModelOptions sim_model;
    SimulationOptions sim_opts;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo ruin frequencies");
    common(sim_cmd);
    add_model_options(sim_cmd, sim_model);
    add_simulation_options(sim_cmd, sim_opts, true);

    ModelOptions cert_model;
    SimulationOptions cert_opts;
    auto* cert_cmd = app.add_subcommand("certify", "Classify, simulate and check estimate <= bound + 3 stderr");
    common(cert_cmd);
    add_model_options(cert_cmd, cert_model);
    add_simulation_options(cert_cmd, cert_opts, true);

    SimulationOptions gallery_opts;
    auto* gallery_cmd = app.add_subcommand("gallery", "Certify the built-in models of all four cases");
    common(gallery_cmd);
    add_simulation_options(gallery_cmd, gallery_opts, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    RunManifest manifest;
    int code = exit_ok;
    try {
        if (classify_cmd->parsed())
            code = run_classify(classify_opts, std::cout, manifest);
        else if (curve_cmd->parsed())
            code = run_psi_curve(curve_opts, std::cout, manifest);
        else if (sim_cmd->parsed())
            code = run_simulate(sim_model, sim_opts, std::cout, std::cerr, manifest);
        else if (cert_cmd->parsed())
            code = run_certify(cert_model, cert_opts, std::cout, std::cerr, manifest);
        else if (gallery_cmd->parsed())
            code = run_gallery(gallery_opts, std::cout, std::cerr, manifest);
        if (!manifest_path.empty()) manifest.write(manifest_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return code;
}
