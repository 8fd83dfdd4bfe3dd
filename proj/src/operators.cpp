#include "nrpb/operators.hpp"

#include "nrpb/errors.hpp"

#include <cmath>
#include <string>

namespace nrpb {

void HilbertConfig::validate() const {
    if (n_magnon < 3 || n_photon < 3) {
        throw DimensionError("HilbertConfig: n_magnon and n_photon must both be >= 3 (got " +
                             std::to_string(n_magnon) + ", " + std::to_string(n_photon) + ")");
    }
}

namespace ops {

ComplexMatrix product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("product: inner dimensions differ (" + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()) + ")");
    }
    return a * b;
}

ComplexMatrix sum(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError("sum: operand shapes differ");
    }
    return a + b;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return sum(product(a, b), -product(b, a));
}

ComplexMatrix identity(std::size_t n) {
    const auto k = static_cast<Eigen::Index>(n);
    return ComplexMatrix::Identity(k, k);
}

ComplexMatrix annihilation(std::size_t n) {
    if (n < 2) {
        throw DimensionError("annihilation: truncation must be >= 2, got " + std::to_string(n));
    }
    const auto k = static_cast<Eigen::Index>(n);
    ComplexMatrix out = ComplexMatrix::Zero(k, k);
    for (Eigen::Index j = 1; j < k; ++j) {
        out(j - 1, j) = std::sqrt(static_cast<double>(j));
    }
    return out;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols()) {
        throw ShapeError("tensor: both factors must be square");
    }
    const Eigen::Index na = a.rows();
    const Eigen::Index nb = b.rows();
    ComplexMatrix out(na * nb, na * nb);
    for (Eigen::Index i = 0; i < na; ++i) {
        for (Eigen::Index j = 0; j < na; ++j) {
            out.block(i * nb, j * nb, nb, nb) = a(i, j) * b;
        }
    }
    return out;
}

} // namespace ops

ModeOperators embed_ops(const HilbertConfig& cfg) {
    cfg.validate();
    const ComplexMatrix id_m = ops::identity(cfg.n_magnon);
    const ComplexMatrix id_p = ops::identity(cfg.n_photon);

    ModeOperators out;
    out.a = ops::tensor(id_m, ops::annihilation(cfg.n_photon));
    out.m = ops::tensor(ops::annihilation(cfg.n_magnon), id_p);
    out.a_dag = out.a.adjoint();
    out.m_dag = out.m.adjoint();
    out.n_a = out.a_dag * out.a;
    out.n_m = out.m_dag * out.m;
    return out;
}

} // namespace nrpb
