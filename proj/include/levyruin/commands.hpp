#pragma once

// Subcommand bodies of the levyruin tool, independent of argument parsing.
// Each returns an exit code and writes to the streams it is given.

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "levyruin/format.hpp"
#include "levyruin/gallery.hpp"
#include "levyruin/laplace_exponent.hpp"
#include "levyruin/manifest.hpp"
#include "levyruin/model_config.hpp"
#include "levyruin/path_simulator.hpp"
#include "levyruin/perturbed.hpp"
#include "levyruin/ruin_classifier.hpp"

namespace levyruin::cli {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_violation = 2, exit_inconclusive = 3 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelOptions {
    std::string config;          ///< path of a model file
    std::string model;           ///< "perturbed" selects the flag route
    double p = std::numeric_limits<double>::quiet_NaN();
    double sigma2 = std::numeric_limits<double>::quiet_NaN();
    double beta = std::numeric_limits<double>::quiet_NaN();
    double alpha = std::numeric_limits<double>::quiet_NaN();
};

struct LoadedModel {
    LevyTriplet triplet;
    std::string source;
    std::string text;  ///< model file bytes, or canonical text for the flag route
};

inline LoadedModel load_model(const ModelOptions& o) {
    if (o.model.empty() || o.model == "config") {
        if (o.config.empty()) throw UsageError("a model is required: --config <file> or --model perturbed");
        LoadedModel m;
        m.source = o.config;
        m.text = read_file(o.config);
        m.triplet = parse_config_text(m.text, o.config);
        return m;
    }
    if (o.model != "perturbed") throw UsageError("unknown --model '" + o.model + "' (expected perturbed)");
    if (!o.config.empty()) throw UsageError("--config and --model perturbed are mutually exclusive");
    const PerturbedModel pm{o.p, o.sigma2, o.beta, o.alpha};
    try {
        pm.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(e.what()) + "; pass --p --sigma2 --beta --alpha");
    }
    LoadedModel m;
    m.source = "--model perturbed";
    m.triplet = pm.to_triplet();
    m.text = to_config(m.triplet);
    return m;
}

/// "a:b:n" -> n points from a to b inclusive.
inline std::vector<double> parse_u_grid(const std::string& grid) {
    const auto c1 = grid.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : grid.find(':', c1 + 1);
    if (c2 == std::string::npos) throw UsageError("--u-grid expects a:b:n, got '" + grid + "'");
    const auto a = parse_double(grid.substr(0, c1));
    const auto b = parse_double(grid.substr(c1 + 1, c2 - c1 - 1));
    const auto n = parse_double(grid.substr(c2 + 1));
    if (!a || !b || !n || !std::isfinite(*a) || !std::isfinite(*b) || *a < 0.0 || *b < *a || *n < 1.0 ||
        *n != std::floor(*n) || *n > 1e6)
        throw UsageError("--u-grid expects a:b:n with 0 <= a <= b and integer n >= 1, got '" + grid + "'");
    const auto count = static_cast<std::size_t>(*n);
    std::vector<double> us;
    for (std::size_t i = 0; i < count; ++i)
        us.push_back(count == 1 ? *a : *a + (*b - *a) * static_cast<double>(i) / static_cast<double>(count - 1));
    return us;
}

inline EvalMode parse_mode(const std::string& s) {
    if (s == "closed_form") return EvalMode::closed_form;
    if (s == "quadrature") return EvalMode::quadrature;
    if (s == "both") return EvalMode::both;
    throw UsageError("--mode must be closed_form, quadrature or both, got '" + s + "'");
}

inline const char* mode_name(EvalMode m) {
    switch (m) {
        case EvalMode::closed_form: return "closed_form";
        case EvalMode::quadrature: return "quadrature";
        case EvalMode::both: return "both";
    }
    return "?";
}

inline void start_manifest(RunManifest& man, const std::string& sub, const LoadedModel& m) {
    man.subcommand = sub;
    man.model_source = m.source;
    man.model_text = m.text;
}

/// Writes `text` to `path`, plus `<path>.manifest.json` next to it.
inline void write_output(const std::string& path, const std::string& text, RunManifest& man) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
    man.outputs.push_back(path);
    man.write(path + ".manifest.json");
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

struct ClassifyOptions {
    ModelOptions model;
    double tol = default_root_tol;
    std::string mode = "closed_form";
    bool summary_only = false;
};

inline std::string perturbed_cross_check_text(const PerturbedModel& pm, double tol) {
    const auto r = cross_check(pm, std::max(1e-9, 10.0 * tol));
    std::ostringstream os;
    os << "closed form:    case=" << to_string(r.closed_form.ruin_case)
       << " rate=" << format_double(r.closed_form.rate) << " gamma_minus=" << format_double(pm.gamma_minus())
       << " gamma_plus=" << format_double(pm.gamma_plus()) << " discriminant=" << format_double(pm.discriminant())
       << '\n';
    os << "agreement:      " << (r.agree ? "yes" : "no");
    if (r.generic) os << " (|rate difference| = " << format_double(r.rate_difference) << ")";
    if (!r.note.empty()) os << " " << r.note;
    os << '\n';
    for (const auto& w : r.closed_form.warnings) os << "warning:        " << w << '\n';
    return os.str();
}

inline int run_classify(const ClassifyOptions& o, std::ostream& out, RunManifest& man) {
    const auto m = load_model(o.model);
    start_manifest(man, "classify", m);
    man.parameters["tol"] = o.tol;
    man.parameters["mode"] = o.mode;
    if (!(o.tol > 0.0)) throw UsageError("--tol must be positive");
    const LaplaceExponent le(m.triplet, parse_mode(o.mode));
    RuinClassification cls;
    try {
        cls = classify(le, o.tol);
    } catch (const ClassificationError& e) {
        out << "case=? " << e.what() << '\n';
        return exit_inconclusive;
    }
    if (!o.summary_only) {
        out << "model:          " << describe(m.triplet) << '\n';
        out << report(cls);
        if (const auto pm = as_perturbed(m.triplet)) out << perturbed_cross_check_text(*pm, o.tol);
    }
    out << summary_line(cls) << '\n';
    return exit_ok;
}

// ---------------------------------------------------------------------------
// psi-curve
// ---------------------------------------------------------------------------

struct PsiCurveOptions {
    ModelOptions model;
    std::size_t n = 100;
    double gamma_max = 1.0;
    std::string mode = "closed_form";
    std::string out_path;
};

inline std::string psi_curve_csv(const std::vector<PsiSample>& rows) {
    std::ostringstream os;
    os << "gamma,psi,psi_prime\n";
    for (const auto& r : rows)
        os << format_double(r.gamma) << ',' << format_double(r.psi) << ',' << format_double(r.psi_prime) << '\n';
    return os.str();
}

inline int run_psi_curve(const PsiCurveOptions& o, std::ostream& out, RunManifest& man) {
    const auto m = load_model(o.model);
    start_manifest(man, "psi-curve", m);
    man.parameters["n"] = o.n;
    man.parameters["gamma_max"] = o.gamma_max;
    man.parameters["mode"] = o.mode;
    if (o.n < 2) throw UsageError("--n must be >= 2");
    const LaplaceExponent le(m.triplet, parse_mode(o.mode));
    const auto csv = psi_curve_csv(le.curve(o.n, o.gamma_max));
    if (o.out_path.empty())
        out << csv;
    else
        write_output(o.out_path, csv, man);
    return exit_ok;
}

// ---------------------------------------------------------------------------
// simulate / certify / gallery
// ---------------------------------------------------------------------------

struct SimulationOptions {
    std::vector<double> u;
    std::string u_grid;
    std::uint64_t paths = 10000;
    std::optional<double> horizon;
    double dt = 0.1;
    std::uint64_t seed = 1;
    bool no_bridge = false;
    unsigned workers = 1;
    std::string out_path;
};

inline std::string estimates_header(bool with_model) {
    return std::string(with_model ? "model," : "") + "u,n_paths,ruined,estimate,stderr,bound,case,verdict\n";
}

inline std::string estimate_row(const RuinEstimate& e) {
    std::ostringstream os;
    os << format_double(e.u) << ',' << e.n_paths << ',' << e.ruined << ',' << format_double(e.estimate) << ','
       << format_double(e.std_error) << ',' << format_double(e.bound) << ','
       << (e.ruin_case ? to_string(*e.ruin_case) : std::string("NA")) << ',' << to_string(e.verdict) << '\n';
    return os.str();
}

inline int verdict_exit_code(const std::vector<RuinEstimate>& rows, bool classified) {
    if (!classified) return exit_inconclusive;
    for (const auto& r : rows)
        if (r.verdict == Verdict::violation) return exit_violation;
    return exit_ok;
}

inline std::vector<double> resolve_u(const SimulationOptions& o, const std::vector<double>& fallback) {
    std::vector<double> us = o.u;
    if (!o.u_grid.empty()) {
        const auto g = parse_u_grid(o.u_grid);
        us.insert(us.end(), g.begin(), g.end());
    }
    if (us.empty()) us = fallback;
    if (us.empty()) throw UsageError("no capital levels: pass --u and/or --u-grid");
    for (double u : us)
        if (!(u >= 0.0) || !std::isfinite(u)) throw UsageError("capital levels must be finite and >= 0");
    return us;
}

inline SimulationConfig make_sim_config(const SimulationOptions& o, double delta, const std::vector<double>& us) {
    SimulationConfig c;
    double u_max = 0.0;
    for (double u : us) u_max = std::max(u_max, u);
    c.horizon = o.horizon ? *o.horizon : default_horizon(delta, u_max);
    c.dt = o.dt;
    c.n_paths = o.paths;
    c.master_seed = o.seed;
    c.bridge_correction = !o.no_bridge;
    c.workers = o.workers;
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return c;
}

inline void record_sim(RunManifest& man, const SimulationConfig& c, const std::vector<double>& us) {
    man.seed = c.master_seed;
    man.has_seed = true;
    man.parameters["u"] = us;
    man.parameters["paths"] = c.n_paths;
    man.parameters["horizon"] = c.horizon;
    man.parameters["dt"] = c.dt;
    man.parameters["bridge_correction"] = c.bridge_correction;
    man.parameters["workers"] = c.workers;
}

inline std::optional<RuinClassification> try_classify(const LevyTriplet& t, std::string& why) {
    try {
        return classify(t);
    } catch (const ClassificationError& e) {
        why = e.what();
        return std::nullopt;
    }
}

/// `simulate` and `certify` share this body; certify adds a default u-grid
/// and the classification report.
inline int run_simulation(const std::string& sub, const ModelOptions& mo, const SimulationOptions& o,
                          const std::vector<double>& default_u, bool with_report, std::ostream& out,
                          std::ostream& info, RunManifest& man) {
    const auto m = load_model(mo);
    start_manifest(man, sub, m);
    const auto us = resolve_u(o, default_u);
    const auto cfg = make_sim_config(o, delta(m.triplet), us);
    record_sim(man, cfg, us);

    std::string why;
    const auto cls = try_classify(m.triplet, why);
    std::ostream& text = o.out_path.empty() ? info : out;
    if (with_report) {
        text << "model:          " << describe(m.triplet) << '\n';
        if (cls)
            text << report(*cls);
        else
            text << "classification: inconclusive: " << why << '\n';
    }
    text << "horizon:        " << format_double(cfg.horizon)
         << " (estimates are ruin frequencies on (0, T], a lower bound on ultimate ruin)\n";

    const auto rows = estimate_ruin(m.triplet, cfg, us, cls);
    std::string csv = estimates_header(false);
    for (const auto& r : rows) csv += estimate_row(r);
    if (o.out_path.empty())
        out << csv;
    else
        write_output(o.out_path, csv, man);

    const int code = verdict_exit_code(rows, cls.has_value());
    std::size_t certified = 0;
    for (const auto& r : rows) certified += r.verdict == Verdict::certified;
    text << (cls ? summary_line(*cls) : std::string("case=? inconclusive")) << '\n';
    text << "certification:  " << (code == exit_ok ? "PASS" : "FAIL") << " (" << certified << "/" << rows.size()
         << " rows certified)\n";
    return code;
}

inline int run_simulate(const ModelOptions& mo, const SimulationOptions& o, std::ostream& out, std::ostream& info,
                        RunManifest& man) {
    return run_simulation("simulate", mo, o, {}, false, out, info, man);
}

inline const std::vector<double>& default_certify_grid() {
    static const std::vector<double> g{0.0, 1.0, 2.0, 3.0, 4.0};
    return g;
}

inline int run_certify(const ModelOptions& mo, const SimulationOptions& o, std::ostream& out, std::ostream& info,
                       RunManifest& man) {
    return run_simulation("certify", mo, o, default_certify_grid(), true, out, info, man);
}

/// Every gallery model: classify, compare with the expected regime, simulate.
inline int run_gallery(const SimulationOptions& o, std::ostream& out, std::ostream& info, RunManifest& man) {
    man.subcommand = "gallery";
    man.model_source = "built-in gallery";
    std::string all_models;
    const auto models = gallery();
    for (const auto& g : models) all_models += "# " + g.name + "\n" + to_config(g.triplet);
    man.model_text = all_models;
    const auto us = resolve_u(o, {0.0, 1.0, 2.0, 4.0});
    man.parameters["u"] = us;

    std::ostream& text = o.out_path.empty() ? info : out;
    std::string csv = estimates_header(true);
    int code = exit_ok;
    for (const auto& g : models) {
        std::string why;
        const auto cls = try_classify(g.triplet, why);
        const auto cfg = make_sim_config(o, delta(g.triplet), us);
        man.parameters["horizon_" + g.name] = cfg.horizon;
        const auto rows = estimate_ruin(g.triplet, cfg, us, cls);
        for (const auto& r : rows) csv += g.name + "," + estimate_row(r);
        const int c = verdict_exit_code(rows, cls.has_value());
        const bool expected = cls && cls->ruin_case == g.expected;
        text << g.name << ": " << (cls ? summary_line(*cls) : "case=? " + why)
             << (expected ? "" : " (expected case " + to_string(g.expected) + ")") << " verdict="
             << (c == exit_ok ? "certified" : c == exit_violation ? "violation" : "inconclusive") << '\n';
        if (!expected && c == exit_ok) code = std::max(code, int(exit_inconclusive));
        code = std::max(code, c);
    }
    const SimulationConfig first = make_sim_config(o, 1.0, us);
    man.seed = first.master_seed;
    man.has_seed = true;
    man.parameters["paths"] = first.n_paths;
    man.parameters["dt"] = first.dt;
    man.parameters["bridge_correction"] = first.bridge_correction;
    man.parameters["workers"] = first.workers;
    if (o.out_path.empty())
        out << csv;
    else
        write_output(o.out_path, csv, man);
    return code;
}

}  // namespace levyruin::cli
