// operators.hpp — dense complex matrices and truncated Fock-space operators
//
// Composite kets |m,n> (m magnons, n photons) map to the flat index
// m * n_photon + n, i.e. the magnon factor is always the slow index.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace nrpb {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

struct HilbertConfig {
    std::size_t n_magnon{5};
    std::size_t n_photon{5};

    std::size_t dim() const noexcept { return n_magnon * n_photon; }
    std::size_t index(std::size_t m, std::size_t n) const noexcept { return m * n_photon + n; }

    // Throws DimensionError unless both truncations are >= 3.
    void validate() const;
};

namespace ops {

// Checked arithmetic. Eigen only asserts shapes in debug builds; these
// throw ShapeError in every build.
ComplexMatrix product(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix sum(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix identity(std::size_t n);

// a|k> = sqrt(k)|k-1>, so entry (k-1, k) = sqrt(k). Requires n >= 2.
ComplexMatrix annihilation(std::size_t n);

// Kronecker product, left factor slow. Both operands must be square.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

} // namespace ops

// The six operators of the reduced photon-magnon model on the composite space.
struct ModeOperators {
    ComplexMatrix a;
    ComplexMatrix a_dag;
    ComplexMatrix m;
    ComplexMatrix m_dag;
    ComplexMatrix n_a;
    ComplexMatrix n_m;
};

ModeOperators embed_ops(const HilbertConfig& cfg);

} // namespace nrpb
