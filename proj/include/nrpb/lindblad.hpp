// lindblad.hpp — master-equation numerics for the reduced model
//
//   dρ/dt = -i[H, ρ] + (γ/2) D[a] ρ + (γ/2)(m_th + 1) D[m] ρ + (γ/2) m_th D[m†] ρ
//           + (γ_p/2) (2 n ρ n - n² ρ - ρ n²),   D[c] ρ = 2 c ρ c† - {c†c, ρ}
//
// with H the Hermitian reduced Hamiltonian and n = a†a. Density matrices are
// vectorized by stacking columns: vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ).

#pragma once

#include "nrpb/model.hpp"
#include "nrpb/operators.hpp"

#include <vector>

namespace nrpb {

struct DensityMatrix {
    ComplexMatrix rho;

    std::size_t dim() const noexcept { return static_cast<std::size_t>(rho.rows()); }
    Complex trace() const { return rho.trace(); }
    double hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }
    double min_eigenvalue() const;

    ComplexVector vec() const;
    static DensityMatrix from_vec(const ComplexVector& v, std::size_t dim);

    static DensityMatrix pure(const ComplexVector& psi);
    static DensityMatrix basis_state(const HilbertConfig& cfg, std::size_t m, std::size_t n);
};

struct Liouvillian {
    ComplexMatrix matrix;  // dim² × dim²
    std::size_t dim{0};    // Hilbert-space dimension

    ComplexVector apply(const ComplexVector& v) const { return matrix * v; }
    DensityMatrix apply(const DensityMatrix& rho) const {
        return DensityMatrix::from_vec(apply(rho.vec()), dim);
    }
};

inline constexpr std::size_t kMaxLiouvillianDim = 10'000;

// Throws SizeError if (n_magnon * n_photon)^2 exceeds kMaxLiouvillianDim.
Liouvillian build_liouvillian(const SystemParams& params, const HilbertConfig& cfg);

// Trace-one null vector of L, Hermitized. Throws NonUniqueSteadyStateError
// when the bordered system is numerically rank deficient, SolverError when
// the residual check ||L vec(ρ)||_∞ < 1e-10 ||L||_∞ fails.
DensityMatrix steady_state(const Liouvillian& L);

// Integrates dρ/dt = L ρ from t = 0 to t_final (rtol 1e-9, atol 1e-12) and
// re-Hermitizes. Throws StiffnessError on step-size underflow.
DensityMatrix evolve(const Liouvillian& L, const DensityMatrix& rho0, double t_final);

struct G2TauPoint {
    double tau{0.0};
    double g2{0.0};
};

// Normalized two-time correlation via the regression theorem: σ(0) = a ρ_ss a†
// is propagated under L and g2(τ) = Tr[a†a σ(τ)] / <a†a>². The grid must be
// nondecreasing and start at τ >= 0.
std::vector<G2TauPoint> g2_tau(const SystemParams& params, const HilbertConfig& cfg,
                               const std::vector<double>& tau_grid);

// Convenience: g2_zero of the steady state of build_liouvillian(params, cfg).
double g2_numeric(const SystemParams& params, const HilbertConfig& cfg);

} // namespace nrpb
