#include "nrpb/amplitude.hpp"

#include "nrpb/errors.hpp"

#include <cmath>
#include <numbers>

namespace nrpb {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSingularTol = 1e-14;

// |det| small against the Hadamard bound (product of row norms).
template <int N>
void require_regular(const Eigen::Matrix<Complex, N, N>& a, const char* what) {
    double bound = 1.0;
    for (int i = 0; i < N; ++i) bound *= a.row(i).norm();
    if (bound == 0.0 || std::abs(a.determinant()) <= kSingularTol * bound) {
        throw SingularSystemError(std::string("steady_amplitudes: singular ") + what + " block");
    }
}

} // namespace

AmplitudeGenerator amplitude_generator(const SystemParams& p) {
    const Complex da = Complex(p.delta, -0.5 * p.gamma) + p.delta_F;  // Δ'a + ΔF
    const Complex dm = Complex(p.delta, -0.5 * p.gamma);             // Δ'm
    const Complex opa = kI * kSqrt2 * p.Lambda * std::exp(kI * p.beta);
    const double e = p.E;
    const double j2 = kSqrt2 * p.J;

    enum { c00, c10, c01, c11, c02, c20 };
    AmplitudeGenerator m = AmplitudeGenerator::Zero();
    m(c00, c01) = e;
    m(c00, c02) = -std::conj(opa);

    m(c10, c10) = dm + p.K;
    m(c10, c01) = p.J;
    m(c10, c11) = e;

    m(c01, c10) = p.J;
    m(c01, c01) = da;
    m(c01, c00) = e;
    m(c01, c02) = kSqrt2 * e;

    m(c11, c20) = j2;
    m(c11, c10) = e;
    m(c11, c11) = da + dm + p.K;
    m(c11, c02) = j2;

    m(c02, c11) = j2;
    m(c02, c02) = 2.0 * da;
    m(c02, c01) = kSqrt2 * e;
    m(c02, c00) = opa;

    m(c20, c20) = 2.0 * (dm + 2.0 * p.K);
    m(c20, c11) = j2;
    return m;
}

AmplitudeVector steady_amplitudes(const SystemParams& p) {
    const Complex da = Complex(p.delta, -0.5 * p.gamma) + p.delta_F;
    const Complex dm = Complex(p.delta, -0.5 * p.gamma);
    const double e = p.E;

    AmplitudeVector out;
    out.c00 = 1.0;

    // One excitation, second-order feeds (E c11, sqrt2 E c02) dropped.
    Eigen::Matrix<Complex, 2, 2> one;
    one << dm + p.K, p.J,
           p.J,      da;
    require_regular(one, "one-excitation");
    const Eigen::Matrix<Complex, 2, 1> one_rhs(0.0, -e * out.c00);
    const Eigen::Matrix<Complex, 2, 1> first = one.partialPivLu().solve(one_rhs);
    out.c10 = first(0);
    out.c01 = first(1);

    // Two excitations {c11, c02, c20}.
    const double j2 = kSqrt2 * p.J;
    Eigen::Matrix<Complex, 3, 3> two;
    two << da + dm + p.K, j2,       j2,
           j2,            2.0 * da, 0.0,
           j2,            0.0,      2.0 * (dm + 2.0 * p.K);
    require_regular(two, "two-excitation");
    Eigen::Matrix<Complex, 3, 1> two_rhs;
    two_rhs << -e * out.c10,
               -(kSqrt2 * e * out.c01 + kI * kSqrt2 * p.Lambda * std::exp(kI * p.beta) * out.c00),
               0.0;
    const Eigen::Matrix<Complex, 3, 1> second = two.partialPivLu().solve(two_rhs);
    out.c11 = second(0);
    out.c02 = second(1);
    out.c20 = second(2);
    return out;
}

double g2_from_amplitudes(const AmplitudeVector& amps) {
    const double p1 = std::norm(amps.c01);
    if (p1 == 0.0) {
        throw UndefinedCorrelationError("g2_analytic: C01 vanishes");
    }
    return 2.0 * std::norm(amps.c02) / (p1 * p1);
}

double g2_analytic(const SystemParams& params) { return g2_from_amplitudes(steady_amplitudes(params)); }

AmplitudeTrajectory evolve_amplitudes(const SystemParams& p, double t_final, double dt) {
    if (!(dt > 0.0) || !(t_final > 0.0)) {
        throw ConfigError("evolve_amplitudes: dt and t_final must be > 0");
    }
    using Vec6 = Eigen::Matrix<Complex, 6, 1>;
    const AmplitudeGenerator rhs = -kI * amplitude_generator(p);

    AmplitudeTrajectory out;
    out.step_warning = dt > 0.1 / amplitude_generator(p).cwiseAbs().rowwise().sum().maxCoeff();

    Vec6 c = Vec6::Zero();
    c(0) = 1.0;
    const auto record = [&out](double t, const Vec6& v) {
        out.samples.push_back({t, AmplitudeVector::from_array({v(0), v(1), v(2), v(3), v(4), v(5)})});
    };
    record(0.0, c);

    const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-12));
    out.samples.reserve(steps + 1);
    double t = 0.0;
    for (std::size_t s = 0; s < steps; ++s) {
        const double h = std::min(dt, t_final - t);
        const Vec6 k1 = rhs * c;
        const Vec6 k2 = rhs * (c + 0.5 * h * k1);
        const Vec6 k3 = rhs * (c + 0.5 * h * k2);
        const Vec6 k4 = rhs * (c + h * k3);
        c += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t = (s + 1 == steps) ? t_final : t + h;
        record(t, c);
    }
    return out;
}

} // namespace nrpb
