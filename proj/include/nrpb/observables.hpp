// observables.hpp — photon statistics of a density matrix on the magnon (x) photon space

#pragma once

#include "nrpb/lindblad.hpp"

namespace nrpb {

double photon_number(const DensityMatrix& rho, const HilbertConfig& cfg);

// Tr[a†a†aaρ] / Tr[a†aρ]². Throws UndefinedCorrelationError when the photon
// number is below 1e-300.
double g2_zero(const DensityMatrix& rho, const HilbertConfig& cfg);

// (Tr[a†²a²ρ] - Tr[a†aρ]²) / Tr[a†aρ]; negative means sub-Poissonian.
double mandel_q(const DensityMatrix& rho, const HilbertConfig& cfg);

// ½ Σ |eig(ρ - σ)|
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

} // namespace nrpb
