#include "nrpb/lindblad.hpp"

#include "nrpb/errors.hpp"
#include "nrpb/integrator.hpp"
#include "nrpb/observables.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace nrpb {
namespace {

ComplexMatrix spre(const ComplexMatrix& a) { return ops::tensor(ops::identity(a.rows()), a); }
ComplexMatrix spost(const ComplexMatrix& b) {
    const ComplexMatrix bt = b.transpose();
    return ops::tensor(bt, ops::identity(b.rows()));
}

// vec(c ρ d) = (dᵀ ⊗ c) vec(ρ)
ComplexMatrix sandwich(const ComplexMatrix& c, const ComplexMatrix& d) {
    const ComplexMatrix dt = d.transpose();
    return ops::tensor(dt, c);
}

// 2 c ρ c† - c†c ρ - ρ c†c
ComplexMatrix dissipator(const ComplexMatrix& c) {
    const ComplexMatrix cdc = c.adjoint() * c;
    return 2.0 * sandwich(c, c.adjoint()) - spre(cdc) - spost(cdc);
}

double inf_norm(const ComplexMatrix& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

} // namespace

double DensityMatrix::min_eigenvalue() const {
    const ComplexMatrix h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

ComplexVector DensityMatrix::vec() const {
    return Eigen::Map<const ComplexVector>(rho.data(), rho.size());
}

DensityMatrix DensityMatrix::from_vec(const ComplexVector& v, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    if (v.size() != d * d) {
        throw ShapeError("DensityMatrix::from_vec: vector length is not dim^2");
    }
    return {Eigen::Map<const ComplexMatrix>(v.data(), d, d)};
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
    const ComplexVector u = psi / psi.norm();
    return {u * u.adjoint()};
}

DensityMatrix DensityMatrix::basis_state(const HilbertConfig& cfg, std::size_t m, std::size_t n) {
    if (m >= cfg.n_magnon || n >= cfg.n_photon) {
        throw DimensionError("basis_state: Fock level outside the truncation");
    }
    const auto d = static_cast<Eigen::Index>(cfg.dim());
    ComplexMatrix rho = ComplexMatrix::Zero(d, d);
    const auto k = static_cast<Eigen::Index>(cfg.index(m, n));
    rho(k, k) = 1.0;
    return {rho};
}

Liouvillian build_liouvillian(const SystemParams& params, const HilbertConfig& cfg) {
    params.validate();
    cfg.validate();
    if (cfg.dim() * cfg.dim() > kMaxLiouvillianDim) {
        throw SizeError("build_liouvillian: (n_magnon * n_photon)^2 = " + std::to_string(cfg.dim() * cfg.dim()) +
                        " exceeds " + std::to_string(kMaxLiouvillianDim));
    }

    const ModeOperators o = embed_ops(cfg);
    const ComplexMatrix h = build_hamiltonian(params, cfg, true);
    const double g = params.gamma;

    ComplexMatrix l = -kI * (spre(h) - spost(h));
    l += (0.5 * g) * dissipator(o.a);
    l += (0.5 * g * (params.m_th + 1.0)) * dissipator(o.m);
    if (params.m_th > 0.0) {
        l += (0.5 * g * params.m_th) * dissipator(o.m_dag);
    }
    if (params.gamma_p > 0.0) {
        const ComplexMatrix n2 = o.n_a * o.n_a;
        l += (0.5 * params.gamma_p) * (2.0 * sandwich(o.n_a, o.n_a) - spre(n2) - spost(n2));
    }
    return {std::move(l), cfg.dim()};
}

DensityMatrix steady_state(const Liouvillian& L) {
    const auto d = static_cast<Eigen::Index>(L.dim);
    const double norm = inf_norm(L.matrix);
    if (norm == 0.0) {
        throw NonUniqueSteadyStateError("steady_state: generator is zero; every state is stationary");
    }

    // Replace the first equation with Tr ρ = 1, scaled to the size of L.
    ComplexMatrix a = L.matrix;
    a.row(0).setZero();
    const double scale = norm / static_cast<double>(d);
    for (Eigen::Index i = 0; i < d; ++i) a(0, i * d + i) = scale;
    ComplexVector b = ComplexVector::Zero(d * d);
    b(0) = scale;

    Eigen::PartialPivLU<ComplexMatrix> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-13)) {
        throw NonUniqueSteadyStateError("steady_state: bordered Liouvillian is rank deficient (rcond = " +
                                        std::to_string(rcond) + ")");
    }
    const ComplexVector x = lu.solve(b);
    if (!x.allFinite()) {
        throw NonUniqueSteadyStateError("steady_state: solve produced non-finite entries");
    }

    DensityMatrix rho = DensityMatrix::from_vec(x, L.dim);
    rho.rho = 0.5 * (rho.rho + rho.rho.adjoint());

    const double residual = L.apply(rho.vec()).cwiseAbs().maxCoeff();
    if (!(residual < 1e-10 * norm)) {
        throw SolverError("steady_state: residual " + std::to_string(residual) + " exceeds 1e-10 ||L||");
    }
    return rho;
}

DensityMatrix evolve(const Liouvillian& L, const DensityMatrix& rho0, double t_final) {
    if (rho0.dim() != L.dim) {
        throw ShapeError("evolve: state and generator dimensions differ");
    }
    if (!(t_final >= 0.0)) {
        throw ConfigError("evolve: t_final must be >= 0");
    }
    if (t_final == 0.0) return rho0;

    ComplexVector y = rho0.vec();
    const Complex tr0 = rho0.trace();
    double h = 0.0;
    ode::integrate([&L](const ComplexVector& v) { return L.apply(v); }, y, 0.0, t_final, h, inf_norm(L.matrix));

    DensityMatrix out = DensityMatrix::from_vec(y, L.dim);
    out.rho = 0.5 * (out.rho + out.rho.adjoint());
    if (std::abs(out.trace() - tr0) > 1e-8) {
        throw SolverError("evolve: trace drift exceeds 1e-8");
    }
    return out;
}

std::vector<G2TauPoint> g2_tau(const SystemParams& params, const HilbertConfig& cfg,
                               const std::vector<double>& tau_grid) {
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        if (!(tau_grid[i] >= 0.0) || (i > 0 && tau_grid[i] < tau_grid[i - 1])) {
            throw ConfigError("g2_tau: delay grid must be nondecreasing and start at tau >= 0");
        }
    }
    const Liouvillian L = build_liouvillian(params, cfg);
    const DensityMatrix rho_ss = steady_state(L);
    const ModeOperators o = embed_ops(cfg);
    const double n = photon_number(rho_ss, cfg);
    if (!(n > 1e-300)) {
        throw UndefinedCorrelationError("g2_tau: steady state has no photons");
    }

    // σ(0) / n has unit trace, so the integrator tolerances act on O(1) entries.
    DensityMatrix sigma{o.a * rho_ss.rho * o.a_dag / n};

    std::vector<G2TauPoint> out;
    out.reserve(tau_grid.size());
    double t = 0.0;
    for (double tau : tau_grid) {
        sigma = evolve(L, sigma, tau - t);
        t = tau;
        out.push_back({tau, (o.n_a * sigma.rho).trace().real() / n});
    }
    return out;
}

double g2_numeric(const SystemParams& params, const HilbertConfig& cfg) {
    return g2_zero(steady_state(build_liouvillian(params, cfg)), cfg);
}

} // namespace nrpb
