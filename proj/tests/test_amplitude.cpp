#include "nrpb/amplitude.hpp"
#include "nrpb/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace nrpb;

namespace {

// Closed form of the one-photon amplitude, written out term by term.
Complex c01_closed_form(const SystemParams& p) {
    const Complex da(p.delta, -0.5 * p.gamma);
    const Complex dm(p.delta, -0.5 * p.gamma);
    const Complex den = -p.J * p.J + p.K * da + da * dm + p.K * p.delta_F + dm * p.delta_F;
    return -(p.K + dm) * p.E / den;
}

// Untruncated steady state with C00 = 1: the five amplitude equations for
// C10, C01, C11, C02, C20 with every feed term kept, solved directly.
std::array<Complex, 6> full_steady_state(const SystemParams& p) {
    const Complex da(p.delta, -0.5 * p.gamma);
    const Complex dm(p.delta, -0.5 * p.gamma);
    const double s2 = std::sqrt(2.0);
    const Complex opa = Complex(0.0, 1.0) * s2 * p.Lambda * std::exp(Complex(0.0, p.beta));
    const double e = p.E, j = p.J, k = p.K, f = p.delta_F;

    // unknowns: c10, c01, c11, c02, c20
    Eigen::Matrix<Complex, 5, 5> a = Eigen::Matrix<Complex, 5, 5>::Zero();
    Eigen::Matrix<Complex, 5, 1> b = Eigen::Matrix<Complex, 5, 1>::Zero();
    // 0 = E c11 + (dm + K) c10 + J c01
    a(0, 2) = e; a(0, 0) = dm + k; a(0, 1) = j;
    // 0 = J c10 + (da + F) c01 + E c00 + sqrt2 E c02
    a(1, 0) = j; a(1, 1) = da + f; a(1, 3) = s2 * e; b(1) = -e;
    // 0 = sqrt2 J c20 + E c10 + (da + F + dm + K) c11 + sqrt2 J c02
    a(2, 4) = s2 * j; a(2, 0) = e; a(2, 2) = da + f + dm + k; a(2, 3) = s2 * j;
    // 0 = sqrt2 J c11 + 2 (da + F) c02 + sqrt2 E c01 + i sqrt2 Lambda e^{i beta} c00
    a(3, 2) = s2 * j; a(3, 3) = 2.0 * (da + f); a(3, 1) = s2 * e; b(3) = -opa;
    // 0 = 2 (dm + 2K) c20 + sqrt2 J c11
    a(4, 4) = 2.0 * (dm + 2.0 * k); a(4, 2) = s2 * j;

    const Eigen::Matrix<Complex, 5, 1> x = a.fullPivLu().solve(b);
    return {1.0, x(0), x(1), x(2), x(3), x(4)};
}

SystemParams random_weak_params(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SystemParams p = reference_params();
    p.delta = (2.0 * u(rng) - 1.0) * p.omega_b;
    p.delta_F = (2.0 * u(rng) - 1.0) * p.gamma;
    p.K = u(rng) * p.gamma;
    p.Lambda = u(rng) * 1e-5 * p.omega_b;
    return p;
}

SystemParams cw_optimum() {
    SystemParams p = reference_params();
    p.delta_F = 0.5 * p.gamma;
    p.delta = -0.684495 * p.omega_b;
    p.Lambda = 2.46157e-6 * p.omega_b;
    return p;
}

} // namespace

TEST_CASE("single driven damped mode") {
    SystemParams p = reference_params();
    p.J = p.K = p.Lambda = p.delta_F = 0.0;
    p.delta = 0.37 * p.gamma;
    const AmplitudeVector c = steady_amplitudes(p);
    const Complex da(p.delta, -0.5 * p.gamma);
    CHECK(std::abs(c.c01 - (-p.E / da)) < 1e-15);
    CHECK(c.c10 == Complex(0.0));
    // Linear cavity: c02 = c01^2 / sqrt2, hence coherent statistics.
    CHECK(std::abs(c.c02 - c.c01 * c.c01 / std::sqrt(2.0)) < 1e-12 * std::norm(c.c01));
    CHECK(g2_analytic(p) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("one-photon amplitude matches the factored closed form") {
    std::mt19937 rng(2024);
    for (int i = 0; i < 1000; ++i) {
        SystemParams p = random_weak_params(rng);
        p.J *= std::uniform_real_distribution<double>(0.0, 2.0)(rng);
        const Complex expected = c01_closed_form(p);
        CHECK(std::abs(steady_amplitudes(p).c01 - expected) <= 1e-12 * std::abs(expected));
    }
}

TEST_CASE("perturbative steady state against the untruncated solve") {
    SUBCASE("all six amplitudes at generic points") {
        for (double d : {-0.9, -0.3, 0.2, 0.55, 0.8}) {
            SystemParams p = reference_params();
            p.delta = d * p.omega_b;
            p.delta_F = 0.5 * p.gamma;
            p.Lambda = 2.0e-6 * p.omega_b;
            const auto ours = steady_amplitudes(p).as_array();
            const auto oracle = full_steady_state(p);
            for (std::size_t k = 0; k < 6; ++k) {
                CHECK(std::abs(ours[k] - oracle[k]) <= 1e-3 * std::abs(oracle[k]));
            }
        }
    }
    SUBCASE("g2 within 0.5% over random weak-drive draws") {
        std::mt19937 rng(99);
        for (int i = 0; i < 100; ++i) {
            const SystemParams p = random_weak_params(rng);
            const auto oracle = full_steady_state(p);
            const double g2_full = 2.0 * std::norm(oracle[4]) / std::pow(std::norm(oracle[2]), 2);
            CHECK(g2_analytic(p) == doctest::Approx(g2_full).epsilon(5e-3));
        }
    }
    SUBCASE("generator rows reproduce the oracle system") {
        SystemParams p = cw_optimum();
        p.beta = 0.4;
        const auto oracle = full_steady_state(p);
        Eigen::Matrix<Complex, 6, 1> v;
        for (int k = 0; k < 6; ++k) v(k) = oracle[std::size_t(k)];
        const Eigen::Matrix<Complex, 6, 1> r = amplitude_generator(p) * v;
        for (int k = 1; k < 6; ++k) CHECK(std::abs(r(k)) < 1e-6 * std::abs(p.E));
    }
}

TEST_CASE("amplitude hierarchy in the weak-drive regime") {
    const SystemParams p = cw_optimum();
    const AmplitudeVector c = steady_amplitudes(p);
    CHECK(c.c00 == Complex(1.0));
    CHECK(std::abs(c.c01) < 0.2);
    CHECK(std::abs(c.c02) < std::abs(c.c01));
    CHECK(std::abs(c.c11) < std::abs(c.c01));
    CHECK(std::abs(c.c20) < std::abs(c.c01));
}

TEST_CASE("blockade at the clockwise optimal pair") {
    CHECK(g2_analytic(cw_optimum()) <= 1e-4);
}

TEST_CASE("error paths") {
    SystemParams p = reference_params();
    p.E = 0.0;
    CHECK_THROWS_AS(g2_analytic(p), UndefinedCorrelationError);

    SystemParams lossless = reference_params();
    lossless.gamma = 0.0;
    lossless.J = 0.0;
    lossless.delta = -lossless.K;
    CHECK_THROWS_AS(steady_amplitudes(lossless), SingularSystemError);
}

TEST_CASE("amplitude dynamics") {
    SUBCASE("vacuum is stationary without drive or pump") {
        SystemParams p = reference_params();
        p.E = 0.0;
        p.Lambda = 0.0;
        p.delta = 0.3 * p.omega_b;
        const auto traj = evolve_amplitudes(p, 5.0 / p.gamma, 1e-9);
        for (const auto& s : traj.samples) {
            const auto v = s.amps.as_array();
            CHECK(v[0] == Complex(1.0));
            for (std::size_t k = 1; k < 6; ++k) CHECK(v[k] == Complex(0.0));
        }
    }

    const SystemParams p = cw_optimum();
    const double norm = amplitude_generator(p).cwiseAbs().rowwise().sum().maxCoeff();
    const double dt = 0.02 / norm;
    const double t_final = 20.0 / p.gamma;

    SUBCASE("relaxes to the steady amplitudes") {
        const auto traj = evolve_amplitudes(p, t_final, dt);
        CHECK_FALSE(traj.step_warning);
        CHECK(traj.samples.back().t == t_final);
        const auto last = traj.samples.back().amps.as_array();
        const auto steady = steady_amplitudes(p).as_array();
        for (std::size_t k = 1; k < 6; ++k) {
            CHECK(std::abs(last[k] / last[0] - steady[k]) < 1e-6);
        }
    }

    SUBCASE("fourth-order step convergence") {
        const auto coarse = evolve_amplitudes(p, t_final, dt).samples.back().amps.as_array();
        const auto fine = evolve_amplitudes(p, t_final, 0.5 * dt).samples.back().amps.as_array();
        for (std::size_t k = 0; k < 6; ++k) CHECK(std::abs(coarse[k] - fine[k]) < 1e-9);
    }

    SUBCASE("large steps are flagged") {
        CHECK(evolve_amplitudes(p, 100.0 / norm, 1.0 / norm).step_warning);
    }

    SUBCASE("invalid step") {
        CHECK_THROWS_AS(evolve_amplitudes(p, 1e-6, 0.0), ConfigError);
        CHECK_THROWS_AS(evolve_amplitudes(p, -1.0, 1e-9), ConfigError);
    }
}
