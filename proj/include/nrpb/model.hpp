// model.hpp — physical parameters and Hamiltonians of the reduced
// photon-magnon model (cavity mode a, Kittel magnon mode m).
//
// All rates and detunings are angular frequencies in rad/s.

#pragma once

#include "nrpb/operators.hpp"

namespace nrpb {

struct SystemParams {
    double gamma{0.0};    // photon and magnon linewidth
    double delta{0.0};    // common detuning of cavity and magnon from the drive
    double omega_b{0.0};  // phonon frequency, used as the reporting unit
    double J{0.0};        // magnon-photon beam-splitter coupling
    double K{0.0};        // effective magnon Kerr strength
    double Lambda{0.0};   // two-photon (OPA) pump amplitude
    double beta{0.0};     // OPA phase, radians
    double E{0.0};        // cavity drive amplitude
    double delta_F{0.0};  // signed Sagnac-Fizeau shift of the driven cavity mode
    double m_th{0.0};     // thermal magnon occupation, dimensionless
    double gamma_p{0.0};  // cavity pure-dephasing rate

    // Throws ConfigError if gamma <= 0, omega_b <= 0, m_th < 0, gamma_p < 0,
    // Lambda < 0 or any field is not finite.
    void validate() const;

    // E > 0.1 gamma: outside the weak-drive regime the amplitude hierarchy
    // is unreliable. Informational only.
    bool weak_drive_warning() const noexcept { return E > 0.1 * gamma; }
};

// Parameters of the spinning-resonator reference configuration:
// gamma/2pi = 0.55 MHz, omega_b/2pi = 11.0308 MHz, J/2pi = 7.37 MHz,
// K = 0.1 gamma, E = 0.005 gamma. Detuning, Lambda and delta_F are zero.
SystemParams reference_params();

struct SpinGeometry {
    double n_index{1.0};
    double radius{0.0};      // m
    double wavelength{0.0};  // m
    double c{299792458.0};   // m/s
    double omega_a{0.0};     // rad/s, nonspinning resonance
    double dn_dlambda{0.0};  // 1/m
};

// CW: light enters from the left and sees delta_F > 0; CCW the opposite.
enum class DriveDirection { CW, CCW };

// Rotation-induced shift ±Omega (n r omega_a / c)(1 - 1/n^2 - (lambda/n) dn/dlambda).
double sagnac_shift(const SpinGeometry& geom, double omega_rot, DriveDirection direction);

// K = K0 - g^2 / omega_b.
double effective_kerr(double K0, double g, double omega_b);

// Reduced Hamiltonian on the magnon (x) photon space:
//   (delta + delta_F) a†a + delta m†m + K (m†m)^2 + J (a†m + a m†)
//   + i Lambda (a†² e^{i beta} - a² e^{-i beta}) + E (a† + a)
// With hermitian == false, -i(gamma/2)(a†a + m†m) is added.
ComplexMatrix build_hamiltonian(const SystemParams& params, const HilbertConfig& cfg, bool hermitian);

} // namespace nrpb
