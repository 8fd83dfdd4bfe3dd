#include "nrpb/model.hpp"

#include "nrpb/errors.hpp"

#include <cmath>
#include <numbers>

namespace nrpb {

void SystemParams::validate() const {
    for (double v : {gamma, delta, omega_b, J, K, Lambda, beta, E, delta_F, m_th, gamma_p}) {
        if (!std::isfinite(v)) {
            throw ConfigError("SystemParams: all fields must be finite");
        }
    }
    if (gamma <= 0.0) throw ConfigError("SystemParams: gamma must be > 0");
    if (omega_b <= 0.0) throw ConfigError("SystemParams: omega_b must be > 0");
    if (m_th < 0.0) throw ConfigError("SystemParams: m_th must be >= 0");
    if (gamma_p < 0.0) throw ConfigError("SystemParams: gamma_p must be >= 0");
    if (Lambda < 0.0) throw ConfigError("SystemParams: Lambda must be >= 0");
}

SystemParams reference_params() {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    SystemParams p;
    p.gamma = two_pi * 0.55e6;
    p.omega_b = two_pi * 11.0308e6;
    p.J = two_pi * 7.37e6;
    p.K = 0.1 * p.gamma;
    p.E = 0.005 * p.gamma;
    return p;
}

double sagnac_shift(const SpinGeometry& geom, double omega_rot, DriveDirection direction) {
    if (geom.n_index <= 0.0) {
        throw ConfigError("sagnac_shift: refractive index must be > 0");
    }
    if (geom.radius <= 0.0 || geom.wavelength <= 0.0 || geom.c <= 0.0 || geom.omega_a <= 0.0) {
        throw ConfigError("sagnac_shift: radius, wavelength, c and omega_a must be > 0");
    }
    const double n = geom.n_index;
    const double dispersion = 1.0 - 1.0 / (n * n) - (geom.wavelength / n) * geom.dn_dlambda;
    const double magnitude = omega_rot * (n * geom.radius * geom.omega_a / geom.c) * dispersion;
    return direction == DriveDirection::CW ? magnitude : -magnitude;
}

double effective_kerr(double K0, double g, double omega_b) {
    if (omega_b == 0.0) {
        throw ConfigError("effective_kerr: omega_b must be nonzero");
    }
    if (omega_b < 0.0) {
        throw ConfigError("effective_kerr: omega_b must be > 0");
    }
    return K0 - g * g / omega_b;
}

ComplexMatrix build_hamiltonian(const SystemParams& p, const HilbertConfig& cfg, bool hermitian) {
    const ModeOperators o = embed_ops(cfg);
    const Complex opa_phase = std::exp(kI * p.beta);

    ComplexMatrix h = (p.delta + p.delta_F) * o.n_a + p.delta * o.n_m + p.K * (o.n_m * o.n_m) +
                      p.J * (o.a_dag * o.m + o.a * o.m_dag) +
                      kI * p.Lambda * (opa_phase * (o.a_dag * o.a_dag) - std::conj(opa_phase) * (o.a * o.a)) +
                      p.E * (o.a_dag + o.a);
    if (!hermitian) {
        h -= kI * (0.5 * p.gamma) * (o.n_a + o.n_m);
    }
    return h;
}

} // namespace nrpb
