// amplitude.hpp — two-excitation amplitude method
//
// The weakly driven state is expanded as sum C_mn |m,n> over m + n <= 2 and
// evolved with the non-Hermitian Hamiltonian. In steady state the amplitudes
// are solved order by order in the drive: C00 = 1, then the one-excitation
// pair {C10, C01}, then the two-excitation triple {C11, C02, C20}.

#pragma once

#include "nrpb/model.hpp"

#include <array>
#include <vector>

namespace nrpb {

struct AmplitudeVector {
    Complex c00{1.0, 0.0};
    Complex c10{};
    Complex c01{};
    Complex c11{};
    Complex c02{};
    Complex c20{};

    // Order c00, c10, c01, c11, c02, c20.
    std::array<Complex, 6> as_array() const { return {c00, c10, c01, c11, c02, c20}; }
    static AmplitudeVector from_array(const std::array<Complex, 6>& v) {
        return {v[0], v[1], v[2], v[3], v[4], v[5]};
    }
};

using AmplitudeGenerator = Eigen::Matrix<Complex, 6, 6>;

// M with i dC/dt = M C in the c00..c20 ordering, no truncation of feed terms.
AmplitudeGenerator amplitude_generator(const SystemParams& params);

// Perturbative steady state. Throws SingularSystemError when either block
// is singular (only possible for gamma == 0).
AmplitudeVector steady_amplitudes(const SystemParams& params);

// 2 |C02|^2 / |C01|^4. Throws UndefinedCorrelationError when C01 == 0.
double g2_analytic(const SystemParams& params);
double g2_from_amplitudes(const AmplitudeVector& amps);

struct AmplitudeSample {
    double t{0.0};
    AmplitudeVector amps;
};

struct AmplitudeTrajectory {
    std::vector<AmplitudeSample> samples;  // includes t = 0 and t = t_final
    bool step_warning{false};              // dt > 0.1 / ||M||_inf
};

// Classic RK4 on the full six-amplitude system from the vacuum C00 = 1.
// The last step is shortened so the final sample lands on t_final.
AmplitudeTrajectory evolve_amplitudes(const SystemParams& params, double t_final, double dt);

} // namespace nrpb
