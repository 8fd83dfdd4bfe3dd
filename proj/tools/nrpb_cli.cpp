// nrpb — command-line front end for blockade sweeps, optimal-pair searches
// and delayed-coincidence traces.
//
// Exit codes: 0 success, 2 configuration error, 3 solver error.

#include "nrpb/errors.hpp"
#include "nrpb/manifest.hpp"
#include "nrpb/params_json.hpp"
#include "nrpb/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw nrpb::ConfigError("cannot read '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw nrpb::ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
}

std::vector<double> directions(const std::string& which, double delta_F) {
    const double mag = std::abs(delta_F);
    if (which == "cw") return {mag};
    if (which == "ccw") return {-mag};
    if (which == "both") return mag == 0.0 ? std::vector<double>{0.0} : std::vector<double>{mag, -mag};
    throw nrpb::ConfigError("--direction must be cw, ccw or both");
}

// Creates missing parent directories of an output file.
void ensure_parent(const std::filesystem::path& path) {
    const auto parent = path.parent_path();
    if (parent.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) throw nrpb::IoError("cannot create directory '" + parent.string() + "': " + ec.message());
}

// Writes `body` to `path` (or stdout when path is empty) and the manifest next to it.
void emit(const std::string& path, const std::string& body, const nrpb::RunManifest& manifest) {
    if (path.empty()) {
        std::cout << body;
        return;
    }
    ensure_parent(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw nrpb::IoError("cannot open output '" + path + "'");
    out << body;
    out.close();
    if (!out) throw nrpb::IoError("failed writing '" + path + "'");
    nrpb::write_manifest(manifest, path);
}

nrpb::RunManifest base_manifest(const nlohmann::json& config) {
    nrpb::RunManifest m;
    m.config_hash = nrpb::config_hash(config);
    m.timestamp = nrpb::utc_timestamp();
    return m;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonreciprocal photon blockade in a spinning magnomechanical cavity"};
    app.require_subcommand(1);

    std::string spec_path;
    auto* sweep = app.add_subcommand("sweep", "Evaluate an observable on a 1-D or 2-D parameter grid");
    sweep->add_option("--spec", spec_path, "Sweep spec JSON")->required();
    std::size_t workers = nrpb::default_worker_count();
    sweep->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

    std::string config_path, direction = "both", output;
    auto* optimal = app.add_subcommand("optimal", "Find (delta, Lambda) pairs with vanishing two-photon amplitude");
    optimal->add_option("--config", config_path, "Run config JSON")->required();
    optimal->add_option("--direction", direction, "cw, ccw or both")->check(CLI::IsMember({"cw", "ccw", "both"}));
    optimal->add_option("--output", output, "CSV destination (stdout when omitted)");

    double tau_max = 0.0;
    std::size_t points = 0;
    auto* g2tau = app.add_subcommand("g2tau", "Delayed two-photon coincidence g2(tau) at steady state");
    g2tau->add_option("--config", config_path, "Run config JSON")->required();
    g2tau->add_option("--tau-max", tau_max, "Largest delay in seconds")->required();
    g2tau->add_option("--points", points, "Grid points including tau = 0")->required();
    g2tau->add_option("--output", output, "CSV destination (stdout when omitted)");

    std::string validate_spec, validate_config;
    auto* validate = app.add_subcommand("validate", "Parse and check a config without running it");
    auto* vs = validate->add_option("--spec", validate_spec, "Sweep spec JSON");
    auto* vc = validate->add_option("--config", validate_config, "Run config JSON");
    vs->excludes(vc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*sweep) {
            const nrpb::SweepSpec spec = nrpb::sweep_spec_from_json(load_json(spec_path));
            ensure_parent(spec.output_path);
            const nrpb::SweepResult r = nrpb::run_sweep(spec, {.workers = workers});
            std::cerr << "wrote " << spec.output_path.string() << " (" << r.rows.size() << " rows, "
                      << r.manifest.failures.size() << " failed, truncation " << r.manifest.truncation.status
                      << ")\n";
        } else if (*optimal) {
            const auto start = std::chrono::steady_clock::now();
            const nrpb::RunConfig cfg = nrpb::run_config_from_json(load_json(config_path));
            const nrpb::OptimalRun run = nrpb::run_optimal(cfg, directions(direction, cfg.params.delta_F));
            for (const auto& w : run.warnings) std::cerr << "warning: " << w << '\n';

            std::ostringstream body;
            nrpb::write_optimal_csv(body, run.rows);
            nlohmann::json config = nrpb::run_config_to_json(cfg);
            config["direction"] = direction;
            nrpb::RunManifest m = base_manifest(config);
            m.truncation.status = "not_applicable";
            for (const auto& d : run.diagnostics) {
                m.failures.push_back({{"seed_delta", d.seed_delta},
                                      {"seed_lambda", d.seed_lambda},
                                      {"iterations", d.iterations},
                                      {"residual", d.final_residual},
                                      {"message", d.reason}});
            }
            m.extra = {{"kind", "optimal"},
                       {"config", config},
                       {"params",
                        {{"absolute", nrpb::params_to_json(cfg.params)},
                         {"reduced", nrpb::params_to_reduced_json(cfg.params)}}},
                       {"warnings", run.warnings}};
            m.wall_clock_seconds = seconds_since(start);
            emit(output, body.str(), m);
        } else if (*g2tau) {
            const auto start = std::chrono::steady_clock::now();
            const nrpb::RunConfig cfg = nrpb::run_config_from_json(load_json(config_path));
            const auto rows = nrpb::run_g2tau(cfg, tau_max, points);

            std::ostringstream body;
            nrpb::write_g2tau_csv(body, rows);
            nlohmann::json config = nrpb::run_config_to_json(cfg);
            config["tau_max"] = tau_max;
            config["points"] = points;
            nrpb::RunManifest m = base_manifest(config);
            const nrpb::HilbertConfig big{cfg.cfg.n_magnon + 1, cfg.cfg.n_photon + 1};
            const double small_g2 = rows.front().g2;
            const double big_g2 = nrpb::g2_numeric(cfg.params, big);
            m.truncation.delta = std::abs(big_g2 - small_g2) / std::abs(small_g2);
            m.truncation.status = *m.truncation.delta < nrpb::kTruncationBound ? "converged" : "unconverged";
            m.truncation.detail = {{"probe", {{"tau", 0.0}}},
                                   {"cfg", nrpb::hilbert_to_json(cfg.cfg)},
                                   {"reference_cfg", nrpb::hilbert_to_json(big)},
                                   {"value", small_g2},
                                   {"reference_value", big_g2}};
            m.extra = {{"kind", "g2tau"},
                       {"config", config},
                       {"params",
                        {{"absolute", nrpb::params_to_json(cfg.params)},
                         {"reduced", nrpb::params_to_reduced_json(cfg.params)}}}};
            m.wall_clock_seconds = seconds_since(start);
            emit(output, body.str(), m);
        } else if (*validate) {
            if (!validate_spec.empty()) {
                nrpb::sweep_spec_from_json(load_json(validate_spec));
                std::cout << "ok: " << validate_spec << '\n';
            } else if (!validate_config.empty()) {
                nrpb::run_config_from_json(load_json(validate_config));
                std::cout << "ok: " << validate_config << '\n';
            } else {
                throw nrpb::ConfigError("validate needs --spec or --config");
            }
        }
    } catch (const nrpb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const nrpb::SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolver;
    }
    return 0;
}
