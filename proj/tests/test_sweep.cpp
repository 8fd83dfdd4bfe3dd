#include "nrpb/amplitude.hpp"
#include "nrpb/errors.hpp"
#include "nrpb/observables.hpp"
#include "nrpb/params_json.hpp"
#include "nrpb/sweep.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unistd.h>

using namespace nrpb;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("nrpb_test_sweep_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json base_json() {
    return json{{"gamma", 2.0 * M_PI * 0.55e6}, {"omega_b", 2.0 * M_PI * 11.0308e6},
                {"J_over_omega_b", 7.37 / 11.0308}, {"K_over_gamma", 0.1},
                {"E_over_gamma", 0.005},           {"delta_F_over_gamma", 0.5},
                {"Lambda_over_omega_b", 2.46157e-6}, {"delta_over_omega_b", -0.684495}};
}

json spec_json(const std::string& observable, std::size_t points, const fs::path& out) {
    return json{{"axis1", {{"parameter", "delta_over_omega_b"}, {"min", -0.7}, {"max", -0.66}, {"points", points}}},
                {"observable", observable},
                {"base", base_json()},
                {"output", out.string()}};
}

RunConfig reference_config() {
    return run_config_from_json(json{{"params", base_json()}});
}

} // namespace

TEST_CASE("axis grids") {
    Axis lin{"delta", -1.0, 1.0, 5, AxisScale::Linear};
    const auto v = lin.values();
    REQUIRE(v.size() == 5);
    CHECK(v[0] == -1.0);
    CHECK(v[2] == doctest::Approx(0.0));
    CHECK(v[4] == 1.0);

    Axis lg{"m_th", 1e-3, 1e-1, 3, AxisScale::Log};
    const auto w = lg.values();
    REQUIRE(w.size() == 3);
    CHECK(w[0] == doctest::Approx(1e-3));
    CHECK(w[1] == doctest::Approx(1e-2));
    CHECK(w[2] == doctest::Approx(1e-1));
}

TEST_CASE("sweep spec schema") {
    const fs::path out = scratch_dir() / "schema.csv";
    CHECK_NOTHROW(sweep_spec_from_json(spec_json("g2_analytic", 3, out)));

    const auto round = sweep_spec_to_json(sweep_spec_from_json(spec_json("g2_numeric", 3, out)));
    CHECK(sweep_spec_to_json(sweep_spec_from_json(round)) == round);

    auto bad = [&](auto mutate) {
        json j = spec_json("g2_analytic", 3, out);
        mutate(j);
        CHECK_THROWS_AS(sweep_spec_from_json(j), ConfigError);
    };
    bad([](json& j) { j["axis1"]["points"] = 1; });
    bad([](json& j) { j["axis1"]["scale"] = "log"; });
    bad([](json& j) { j["axis1"]["scale"] = "cubic"; });
    bad([](json& j) { j["axis1"]["parameter"] = "detuning"; });
    bad([](json& j) { j["axis1"]["extra"] = 1; });
    bad([](json& j) { j["outptu"] = "x.csv"; });
    bad([](json& j) { j["observable"] = "g3"; });
    bad([](json& j) { j.erase("base"); });
    bad([](json& j) { j["base"].erase("gamma"); });
    bad([](json& j) { j["cfg"] = {{"n_magnon", 2}, {"n_photon", 5}}; });
    bad([](json& j) { j["axis1"]["parameter"] = "tau"; });
    bad([](json& j) {
        j["observable"] = "g2_tau";
        j["axis1"] = {{"parameter", "tau"}, {"min", 0.0}, {"max", 1e-6}, {"points", 3}};
        j["axis2"] = {{"parameter", "K_over_gamma"}, {"min", 0.0}, {"max", 0.2}, {"points", 3}};
    });
    bad([](json& j) { j["observable"] = "g2_tau"; });
}

TEST_CASE("csv layout and determinism") {
    const fs::path out = scratch_dir() / "det.csv";
    const SweepSpec spec = sweep_spec_from_json(spec_json("g2_analytic", 5, out));
    const auto first = run_sweep(spec, {1, true});
    const std::string csv1 = slurp(out);
    const auto second = run_sweep(spec, {1, true});
    CHECK(slurp(out) == csv1);
    CHECK(first.manifest.config_hash == second.manifest.config_hash);
    CHECK(first.manifest.config_hash.size() == 64);

    std::istringstream lines(csv1);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "delta_over_omega_b,g2_analytic");
    int count = 0;
    for (std::string line; std::getline(lines, line);) ++count;
    CHECK(count == 5);

    const json manifest = json::parse(slurp(manifest_path_for(out)));
    CHECK(manifest.at("config_hash") == first.manifest.config_hash);
    CHECK(manifest.at("tool_version") == kToolVersion);
    CHECK(manifest.contains("timestamp"));
    CHECK(manifest.contains("wall_clock_seconds"));
    CHECK(manifest.at("truncation").at("status") == "not_applicable");
    const json& echo = manifest.at("run").at("params");
    CHECK(echo.at("absolute").at("gamma").get<double>() == doctest::Approx(2.0 * M_PI * 0.55e6));
    CHECK(echo.at("reduced").at("K_over_gamma").get<double>() == doctest::Approx(0.1));
}

TEST_CASE("equal configurations hash equally") {
    const json a = json::parse(R"({"x": 1, "y": [1, 2]})");
    const json b = json::parse(R"({"y": [1, 2], "x": 1})");
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a) != config_hash(json::parse(R"({"x": 2, "y": [1, 2]})")));
}

TEST_CASE("output independent of worker count") {
    json j = spec_json("g2_numeric", 4, scratch_dir() / "par.csv");
    j["axis2"] = {{"parameter", "K_over_gamma"}, {"min", 0.05}, {"max", 0.15}, {"points", 3}};
    j["cfg"] = {{"n_magnon", 4}, {"n_photon", 4}};
    const SweepSpec spec = sweep_spec_from_json(j);
    const RunOptions serial{1, false};
    const RunOptions pooled{3, false};
    std::ostringstream a, b;
    write_sweep_csv(a, spec, evaluate_sweep(spec, serial).rows);
    write_sweep_csv(b, spec, evaluate_sweep(spec, pooled).rows);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("delta_over_omega_b,K_over_gamma,g2_numeric\n", 0) == 0);
}

TEST_CASE("undefined points become nan rows") {
    json j = spec_json("g2_analytic", 2, scratch_dir() / "vac.csv");
    j["base"] = {{"gamma", 1.0}, {"omega_b", 10.0}};
    for (const std::string obs : {"g2_analytic", "g2_numeric", "mandel_q"}) {
        j["observable"] = obs;
        j["cfg"] = {{"n_magnon", 3}, {"n_photon", 3}};
        const SweepSpec spec = sweep_spec_from_json(j);
        const auto result = run_sweep(spec, {1, true});
        REQUIRE(result.rows.size() == 2);
        for (const auto& r : result.rows) CHECK(std::isnan(r.value));
        CHECK(result.manifest.failures.size() == 2);
        const std::string csv = slurp(spec.output_path);
        CHECK(csv.find(",nan\n") != std::string::npos);
        if (obs != "g2_analytic") CHECK(result.manifest.truncation.status == "unconverged");
    }
}

TEST_CASE("unwritable destination") {
    const SweepSpec spec =
        sweep_spec_from_json(spec_json("g2_analytic", 2, scratch_dir() / "missing_dir" / "x.csv"));
    CHECK_THROWS_AS(run_sweep(spec), IoError);
}

TEST_CASE("truncation probe") {
    json j = spec_json("g2_numeric", 3, scratch_dir() / "trunc.csv");
    const auto result = evaluate_sweep(sweep_spec_from_json(j), {1, true});
    const TruncationCheck& t = result.manifest.truncation;
    REQUIRE(t.delta.has_value());
    CHECK(*t.delta < kTruncationBound);
    CHECK(t.status == "converged");
    CHECK(t.detail.at("reference_cfg").at("n_photon") == 6);

    j["observable"] = "g2_tau";
    j["axis1"] = {{"parameter", "tau"}, {"min", 0.0}, {"max", 2e-6}, {"points", 3}};
    j["cfg"] = {{"n_magnon", 4}, {"n_photon", 4}};
    const auto trace = evaluate_sweep(sweep_spec_from_json(j), {1, true});
    REQUIRE(trace.rows.size() == 3);
    CHECK(trace.rows[0].axis1 == 0.0);
    CHECK(trace.rows[2].value > trace.rows[0].value);
    CHECK(trace.manifest.truncation.status != "not_applicable");
}

TEST_CASE("clockwise Delta scan locates the dip") {
    json j{{"axis1", {{"parameter", "delta_over_omega_b"}, {"min", -1.0}, {"max", 1.0}, {"points", 801}}},
           {"observable", "g2_numeric"},
           {"base", base_json()},
           {"output", (scratch_dir() / "fig2a.csv").string()}};
    const auto result = evaluate_sweep(sweep_spec_from_json(j), {default_worker_count(), false});
    // Two dips exist for this direction; the scan is judged on the red-detuned one.
    std::size_t best = 0;
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        if (result.rows[i].axis1 < 0.0 && result.rows[i].value < result.rows[best].value) best = i;
    }
    MESSAGE("red-detuned dip: g2 = " << result.rows[best].value << " at " << result.rows[best].axis1);
    CHECK(result.rows[best].axis1 == doctest::Approx(-0.684).epsilon(0.005));
    CHECK(result.rows[best].value < 1e-3);
}

TEST_CASE("optimal runs") {
    const RunConfig config = reference_config();
    const double g = config.params.gamma;

    SUBCASE("both directions give four rows") {
        const OptimalRun run = run_optimal(config, {0.5 * g, -0.5 * g});
        REQUIRE(run.rows.size() == 4);
        CHECK(run.warnings.empty());
        CHECK(run.rows[0].delta_F_over_gamma == doctest::Approx(0.5));
        CHECK(run.rows[0].pair->delta_opt == doctest::Approx(-0.684495).epsilon(0.01));
        CHECK(run.rows[0].pair->lambda_opt == doctest::Approx(2.46157e-6).epsilon(0.01));
        CHECK(run.rows[1].pair->delta_opt == doctest::Approx(0.654639).epsilon(0.01));
        CHECK(run.rows[2].pair->delta_opt == doctest::Approx(-0.659796).epsilon(0.01));
        CHECK(run.rows[2].pair->lambda_opt == doctest::Approx(2.47275e-6).epsilon(0.01));
        CHECK(run.rows[3].pair->delta_opt == doctest::Approx(0.679535).epsilon(0.01));
        CHECK(run.rows[3].pair->lambda_opt == doctest::Approx(2.46105e-6).epsilon(0.01));

        std::ostringstream csv;
        write_optimal_csv(csv, run.rows);
        CHECK(csv.str().rfind("delta_F_over_gamma,delta_opt_over_omega_b,lambda_opt_over_omega_b,residual\n", 0) ==
              0);
    }

    SUBCASE("no rotation baseline differs from both directions") {
        const OptimalRun base = run_optimal(config, {0.0});
        const OptimalRun cw = run_optimal(config, {0.5 * g});
        const OptimalRun ccw = run_optimal(config, {-0.5 * g});
        REQUIRE(base.rows.size() == 2);
        for (const auto& b : base.rows) {
            REQUIRE(b.pair);
            SystemParams p = config.params;
            p.delta_F = 0.0;
            p.delta = b.pair->delta_opt * p.omega_b;
            p.Lambda = b.pair->lambda_opt * p.omega_b;
            CHECK(g2_analytic(p) < 1e-10);
            for (const auto* other : {&cw, &ccw}) {
                for (const auto& o : other->rows) {
                    CHECK(std::abs(o.pair->delta_opt - b.pair->delta_opt) > 1e-3);
                }
            }
        }
    }

    SUBCASE("empty box gives a warning row") {
        RunConfig c = config;
        c.lambda_range = {1e-3, 1e-2};
        const OptimalRun run = run_optimal(c, {0.5 * g});
        REQUIRE(run.rows.size() == 1);
        CHECK_FALSE(run.rows[0].pair);
        CHECK(run.warnings.size() == 1);
        std::ostringstream csv;
        write_optimal_csv(csv, run.rows);
        CHECK(csv.str().find("0.5,nan,nan,nan") != std::string::npos);
    }

    SUBCASE("reversed box is a config error") {
        json j{{"params", base_json()}, {"search", {{"delta_range", {1.0, -1.0}}}}};
        CHECK_THROWS_AS(run_config_from_json(j), ConfigError);
        json k{{"params", base_json()}, {"serach", json::object()}};
        CHECK_THROWS_AS(run_config_from_json(k), ConfigError);
    }
}

TEST_CASE("g2 trace runs") {
    RunConfig config = reference_config();
    config.cfg = {4, 4};

    const auto single = run_g2tau(config, 1e-6, 1);
    REQUIRE(single.size() == 1);
    CHECK(single[0].tau == 0.0);

    const auto ss = steady_state(build_liouvillian(config.params, config.cfg));
    const auto rows = run_g2tau(config, 1e-6, 3);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].g2 == doctest::Approx(g2_zero(ss, config.cfg)).epsilon(1e-10));
    CHECK(rows[2].tau == 1e-6);

    std::ostringstream csv;
    write_g2tau_csv(csv, single);
    CHECK(csv.str().rfind("tau,g2_tau\n0,", 0) == 0);

    CHECK_THROWS_AS(run_g2tau(config, 0.0, 3), ConfigError);
    CHECK_THROWS_AS(run_g2tau(config, 1e-6, 0), ConfigError);
}

TEST_CASE("number formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "nan");
    CHECK(std::stod(format_double(M_PI)) == M_PI);
}
