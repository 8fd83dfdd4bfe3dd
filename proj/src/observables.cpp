#include "nrpb/observables.hpp"

#include "nrpb/errors.hpp"

#include <Eigen/Eigenvalues>

namespace nrpb {
namespace {

struct PhotonMoments {
    double n;   // <a†a>
    double n2;  // <a†a†aa>
};

PhotonMoments moments(const DensityMatrix& rho, const HilbertConfig& cfg) {
    if (rho.dim() != cfg.dim()) {
        throw ShapeError("photon statistics: density matrix does not match the Hilbert config");
    }
    const ModeOperators o = embed_ops(cfg);
    const ComplexMatrix aa = o.a * o.a;
    return {(o.n_a * rho.rho).trace().real(), (aa.adjoint() * aa * rho.rho).trace().real()};
}

constexpr double kMinPopulation = 1e-300;

} // namespace

double photon_number(const DensityMatrix& rho, const HilbertConfig& cfg) { return moments(rho, cfg).n; }

double g2_zero(const DensityMatrix& rho, const HilbertConfig& cfg) {
    const PhotonMoments m = moments(rho, cfg);
    if (!(m.n > kMinPopulation)) {
        throw UndefinedCorrelationError("g2_zero: photon population is zero");
    }
    return m.n2 / (m.n * m.n);
}

double mandel_q(const DensityMatrix& rho, const HilbertConfig& cfg) {
    const PhotonMoments m = moments(rho, cfg);
    if (!(m.n > kMinPopulation)) {
        throw UndefinedCorrelationError("mandel_q: photon population is zero");
    }
    return (m.n2 - m.n * m.n) / m.n;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw ShapeError("trace_distance: dimensions differ");
    }
    const ComplexMatrix diff = rho.rho - sigma.rho;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

} // namespace nrpb
