#include "nrpb/sweep.hpp"

#include "nrpb/amplitude.hpp"
#include "nrpb/lindblad.hpp"
#include "nrpb/observables.hpp"
#include "nrpb/params_json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>

namespace nrpb {
namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : j.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

double require_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError("missing '" + key + "' in " + where);
    if (!j.at(key).is_number()) throw ConfigError("'" + key + "' in " + where + " must be a number");
    return j.at(key).get<double>();
}

std::string require_string(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError("missing '" + key + "' in " + where);
    if (!j.at(key).is_string()) throw ConfigError("'" + key + "' in " + where + " must be a string");
    return j.at(key).get<std::string>();
}

Observable parse_observable(const std::string& s) {
    if (s == "g2_analytic") return Observable::G2Analytic;
    if (s == "g2_numeric") return Observable::G2Numeric;
    if (s == "mandel_q") return Observable::MandelQ;
    if (s == "g2_tau") return Observable::G2Tau;
    throw ConfigError("unknown observable '" + s + "'");
}

Axis parse_axis(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    reject_unknown_keys(j, {"parameter", "min", "max", "points", "scale"}, where);
    Axis axis;
    axis.parameter = require_string(j, "parameter", where);
    axis.min = require_number(j, "min", where);
    axis.max = require_number(j, "max", where);
    if (!j.contains("points") || !j.at("points").is_number_integer() || j.at("points").get<long long>() < 2) {
        throw ConfigError("'points' in " + where + " must be an integer >= 2");
    }
    axis.points = j.at("points").get<std::size_t>();
    const std::string scale = j.value("scale", std::string("linear"));
    if (scale == "linear") {
        axis.scale = AxisScale::Linear;
    } else if (scale == "log") {
        axis.scale = AxisScale::Log;
    } else {
        throw ConfigError("'scale' in " + where + " must be 'linear' or 'log'");
    }
    if (axis.parameter != "tau" && !is_param_key(axis.parameter)) {
        throw ConfigError("unknown axis parameter '" + axis.parameter + "' in " + where);
    }
    if (!std::isfinite(axis.min) || !std::isfinite(axis.max)) {
        throw ConfigError("axis bounds in " + where + " must be finite");
    }
    if (axis.scale == AxisScale::Log && !(axis.min > 0.0 && axis.max > 0.0)) {
        throw ConfigError("log-scale axis in " + where + " requires min > 0 and max > 0");
    }
    return axis;
}

json axis_to_json(const Axis& a) {
    return json{{"parameter", a.parameter},
                {"min", a.min},
                {"max", a.max},
                {"points", a.points},
                {"scale", a.scale == AxisScale::Linear ? "linear" : "log"}};
}

Interval parse_range(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError(where + " must be a two-element numeric array");
    }
    const Interval r{j[0].get<double>(), j[1].get<double>()};
    if (!(r.hi > r.lo)) {
        throw ConfigError(where + " must satisfy min < max");
    }
    return r;
}

double evaluate_point(Observable obs, const SystemParams& p, const HilbertConfig& cfg) {
    switch (obs) {
    case Observable::G2Analytic:
        return g2_analytic(p);
    case Observable::G2Numeric:
        return g2_numeric(p, cfg);
    case Observable::MandelQ:
        return mandel_q(steady_state(build_liouvillian(p, cfg)), cfg);
    case Observable::G2Tau:
        break;
    }
    throw ConfigError("evaluate_point: g2_tau is not a pointwise observable");
}

HilbertConfig enlarged(const HilbertConfig& cfg) { return {cfg.n_magnon + 1, cfg.n_photon + 1}; }

TruncationCheck truncation_probe(Observable obs, const SystemParams& p, const HilbertConfig& cfg, json where) {
    TruncationCheck check;
    const HilbertConfig big = enlarged(cfg);
    check.detail = {{"probe", std::move(where)},
                    {"cfg", hilbert_to_json(cfg)},
                    {"reference_cfg", hilbert_to_json(big)}};
    try {
        const Observable pointwise = obs == Observable::G2Tau ? Observable::G2Numeric : obs;
        const double small = evaluate_point(pointwise, p, cfg);
        const double large = evaluate_point(pointwise, p, big);
        check.delta = std::abs(large - small) / std::abs(small);
        check.detail["value"] = small;
        check.detail["reference_value"] = large;
        check.status = *check.delta < kTruncationBound ? "converged" : "unconverged";
    } catch (const std::exception& e) {
        check.status = "unconverged";
        check.detail["error"] = e.what();
    }
    return check;
}

json params_echo(const SystemParams& p) {
    return json{{"absolute", params_to_json(p)}, {"reduced", params_to_reduced_json(p)}};
}

} // namespace

std::string to_string(Observable o) {
    switch (o) {
    case Observable::G2Analytic: return "g2_analytic";
    case Observable::G2Numeric: return "g2_numeric";
    case Observable::MandelQ: return "mandel_q";
    case Observable::G2Tau: return "g2_tau";
    }
    return "unknown";
}

std::string format_double(double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> Axis::values() const {
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(points - 1);
        out[i] = scale == AxisScale::Linear ? min + (max - min) * f
                                            : std::exp(std::log(min) + (std::log(max) - std::log(min)) * f);
    }
    out.back() = max;
    return out;
}

SweepSpec sweep_spec_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("sweep spec must be a JSON object");
    reject_unknown_keys(j, {"description", "axis1", "axis2", "observable", "base", "cfg", "output"}, "sweep spec");

    SweepSpec spec;
    if (j.contains("description")) {
        if (!j.at("description").is_string()) throw ConfigError("'description' must be a string");
        spec.description = j.at("description").get<std::string>();
    }
    if (!j.contains("axis1")) throw ConfigError("sweep spec needs 'axis1'");
    spec.axis1 = parse_axis(j.at("axis1"), "axis1");
    if (j.contains("axis2")) spec.axis2 = parse_axis(j.at("axis2"), "axis2");
    spec.observable = parse_observable(require_string(j, "observable", "sweep spec"));
    if (!j.contains("base")) throw ConfigError("sweep spec needs 'base' parameters");
    spec.base = params_from_json(j.at("base"));
    if (j.contains("cfg")) spec.cfg = hilbert_from_json(j.at("cfg"));
    spec.output_path = require_string(j, "output", "sweep spec");

    const bool tau1 = spec.axis1.parameter == "tau";
    const bool tau2 = spec.axis2 && spec.axis2->parameter == "tau";
    if (spec.observable == Observable::G2Tau) {
        if (!tau1 || spec.axis2) {
            throw ConfigError("observable g2_tau needs a single 'tau' axis");
        }
        if (spec.axis1.min < 0.0 || spec.axis1.max < spec.axis1.min) {
            throw ConfigError("tau axis must satisfy 0 <= min <= max");
        }
    } else if (tau1 || tau2) {
        throw ConfigError("axis parameter 'tau' is only valid with observable g2_tau");
    }
    return spec;
}

json sweep_spec_to_json(const SweepSpec& spec) {
    json j{{"axis1", axis_to_json(spec.axis1)},
           {"observable", to_string(spec.observable)},
           {"base", params_to_json(spec.base)},
           {"cfg", hilbert_to_json(spec.cfg)},
           {"output", spec.output_path.string()}};
    if (spec.axis2) j["axis2"] = axis_to_json(*spec.axis2);
    if (!spec.description.empty()) j["description"] = spec.description;
    return j;
}

SweepResult evaluate_sweep(const SweepSpec& spec, const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    SweepResult result;
    RunManifest& manifest = result.manifest;
    manifest.config_hash = config_hash(sweep_spec_to_json(spec));
    manifest.timestamp = utc_timestamp();

    const std::vector<double> v1 = spec.axis1.values();
    const std::vector<double> v2 = spec.axis2 ? spec.axis2->values() : std::vector<double>{};
    const std::size_t inner = spec.axis2 ? v2.size() : 1;

    const auto params_at = [&](std::size_t i, std::size_t k) {
        SystemParams p = spec.base;
        set_param(p, spec.axis1.parameter, v1[i]);
        if (spec.axis2) set_param(p, spec.axis2->parameter, v2[k]);
        return p;
    };

    if (spec.observable == Observable::G2Tau) {
        result.rows.resize(v1.size());
        for (std::size_t i = 0; i < v1.size(); ++i) result.rows[i] = {v1[i], std::nullopt, kNaN};
        try {
            const auto trace = g2_tau(spec.base, spec.cfg, v1);
            for (std::size_t i = 0; i < trace.size(); ++i) result.rows[i].value = trace[i].g2;
        } catch (const SolverError& e) {
            manifest.failures.push_back({{"index", nullptr}, {"message", e.what()}});
        }
    } else {
        result.rows.resize(v1.size() * inner);
        std::vector<std::string> errors(result.rows.size());
        parallel_for(result.rows.size(), options.workers, [&](std::size_t idx) {
            const std::size_t i = idx / inner;
            const std::size_t k = idx % inner;
            SweepRow& row = result.rows[idx];
            row.axis1 = v1[i];
            if (spec.axis2) row.axis2 = v2[k];
            try {
                row.value = evaluate_point(spec.observable, params_at(i, k), spec.cfg);
            } catch (const std::exception& e) {
                row.value = kNaN;
                errors[idx] = e.what();
            }
        });
        for (std::size_t idx = 0; idx < errors.size(); ++idx) {
            if (errors[idx].empty()) continue;
            json f{{"index", idx}, {"axis1_value", result.rows[idx].axis1}, {"message", errors[idx]}};
            if (result.rows[idx].axis2) f["axis2_value"] = *result.rows[idx].axis2;
            manifest.failures.push_back(std::move(f));
        }
    }

    if (spec.observable == Observable::G2Analytic || !options.check_truncation) {
        manifest.truncation.status = "not_applicable";
    } else if (spec.observable == Observable::G2Tau) {
        manifest.truncation = truncation_probe(spec.observable, spec.base, spec.cfg, json{{"tau", 0.0}});
    } else {
        // Probe the deepest point of the scan, where interference is most delicate.
        std::optional<std::size_t> best;
        for (std::size_t idx = 0; idx < result.rows.size(); ++idx) {
            const double v = result.rows[idx].value;
            if (std::isfinite(v) && (!best || v < result.rows[*best].value)) best = idx;
        }
        if (!best) {
            manifest.truncation.status = "unconverged";
            manifest.truncation.detail = {{"error", "no finite grid point to probe"}};
        } else {
            json where{{"index", *best}, {"axis1_value", result.rows[*best].axis1}};
            if (spec.axis2) where["axis2_value"] = *result.rows[*best].axis2;
            manifest.truncation = truncation_probe(spec.observable, params_at(*best / inner, *best % inner),
                                                   spec.cfg, std::move(where));
        }
    }

    manifest.extra = {{"kind", "sweep"},
                      {"spec", sweep_spec_to_json(spec)},
                      {"params", params_echo(spec.base)},
                      {"rows", result.rows.size()}};
    manifest.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    out << spec.axis1.parameter;
    if (spec.axis2) out << ',' << spec.axis2->parameter;
    out << ',' << to_string(spec.observable) << '\n';
    for (const SweepRow& r : rows) {
        out << format_double(r.axis1);
        if (r.axis2) out << ',' << format_double(*r.axis2);
        out << ',' << format_double(r.value) << '\n';
    }
}

SweepResult run_sweep(const SweepSpec& spec, const RunOptions& options) {
    // Fail on an unwritable destination before spending time on the grid.
    std::ofstream csv(spec.output_path, std::ios::binary);
    if (!csv) {
        throw IoError("cannot open output '" + spec.output_path.string() + "'");
    }
    SweepResult result = evaluate_sweep(spec, options);
    write_sweep_csv(csv, spec, result.rows);
    csv.close();
    if (!csv) {
        throw IoError("failed writing '" + spec.output_path.string() + "'");
    }
    write_manifest(result.manifest, spec.output_path);
    return result;
}

RunConfig run_config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("run config must be a JSON object");
    reject_unknown_keys(j, {"description", "params", "cfg", "search"}, "run config");
    RunConfig c;
    if (j.contains("description")) {
        if (!j.at("description").is_string()) throw ConfigError("'description' must be a string");
        c.description = j.at("description").get<std::string>();
    }
    if (!j.contains("params")) throw ConfigError("run config needs 'params'");
    c.params = params_from_json(j.at("params"));
    if (j.contains("cfg")) c.cfg = hilbert_from_json(j.at("cfg"));
    if (j.contains("search")) {
        const json& s = j.at("search");
        if (!s.is_object()) throw ConfigError("'search' must be an object");
        reject_unknown_keys(s, {"delta_range", "lambda_range", "delta_points", "lambda_points"}, "search");
        if (s.contains("delta_range")) c.delta_range = parse_range(s.at("delta_range"), "search.delta_range");
        if (s.contains("lambda_range")) c.lambda_range = parse_range(s.at("lambda_range"), "search.lambda_range");
        for (const char* key : {"delta_points", "lambda_points"}) {
            if (!s.contains(key)) continue;
            if (!s.at(key).is_number_integer() || s.at(key).get<long long>() < 2) {
                throw ConfigError(std::string("search.") + key + " must be an integer >= 2");
            }
            (std::string(key) == "delta_points" ? c.search.delta_points : c.search.lambda_points) =
                s.at(key).get<std::size_t>();
        }
    }
    return c;
}

json run_config_to_json(const RunConfig& c) {
    json j{{"params", params_to_json(c.params)},
           {"cfg", hilbert_to_json(c.cfg)},
           {"search",
            {{"delta_range", {c.delta_range.lo, c.delta_range.hi}},
             {"lambda_range", {c.lambda_range.lo, c.lambda_range.hi}},
             {"delta_points", c.search.delta_points},
             {"lambda_points", c.search.lambda_points}}}};
    if (!c.description.empty()) j["description"] = c.description;
    return j;
}

OptimalRun run_optimal(const RunConfig& config, const std::vector<double>& delta_F_values) {
    OptimalRun run;
    for (double dF : delta_F_values) {
        SystemParams p = config.params;
        p.delta_F = dF;
        const OptimalSearchResult found = find_optimal_pairs(p, config.delta_range, config.lambda_range, config.search);
        const double dF_over_gamma = dF / p.gamma;
        run.diagnostics.insert(run.diagnostics.end(), found.diagnostics.begin(), found.diagnostics.end());
        if (found.pairs.empty()) {
            run.rows.push_back({dF_over_gamma, std::nullopt});
            run.warnings.push_back("no optimal pair in the search box for delta_F/gamma = " +
                                   format_double(dF_over_gamma));
            continue;
        }
        for (const OptimalPair& pair : found.pairs) run.rows.push_back({dF_over_gamma, pair});
    }
    return run;
}

void write_optimal_csv(std::ostream& out, const std::vector<OptimalRow>& rows) {
    out << "delta_F_over_gamma,delta_opt_over_omega_b,lambda_opt_over_omega_b,residual\n";
    for (const OptimalRow& r : rows) {
        out << format_double(r.delta_F_over_gamma) << ',';
        if (r.pair) {
            out << format_double(r.pair->delta_opt) << ',' << format_double(r.pair->lambda_opt) << ','
                << format_double(r.pair->residual) << '\n';
        } else {
            out << "nan,nan,nan\n";
        }
    }
}

std::vector<G2TauPoint> run_g2tau(const RunConfig& config, double tau_max, std::size_t points) {
    if (!(tau_max > 0.0) || !std::isfinite(tau_max)) throw ConfigError("g2tau: tau_max must be > 0");
    if (points < 1) throw ConfigError("g2tau: points must be >= 1");
    std::vector<double> grid(points, 0.0);
    for (std::size_t i = 1; i < points; ++i) {
        grid[i] = tau_max * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    if (points > 1) grid.back() = tau_max;
    return g2_tau(config.params, config.cfg, grid);
}

void write_g2tau_csv(std::ostream& out, const std::vector<G2TauPoint>& rows) {
    out << "tau,g2_tau\n";
    for (const G2TauPoint& r : rows) out << format_double(r.tau) << ',' << format_double(r.g2) << '\n';
}

} // namespace nrpb
