#include "nrpb/optimal.hpp"

#include "nrpb/amplitude.hpp"
#include "nrpb/errors.hpp"

#include <algorithm>
#include <cmath>

namespace nrpb {
namespace {

struct Point {
    double delta;   // omega_b units
    double lambda;  // omega_b units
};

class TwoPhotonAmplitude {
public:
    explicit TwoPhotonAmplitude(const SystemParams& base) : base_(base) {}

    Complex operator()(const Point& x) const {
        SystemParams p = base_;
        p.delta = x.delta * base_.omega_b;
        p.Lambda = x.lambda * base_.omega_b;
        return steady_amplitudes(p).c02;
    }

private:
    SystemParams base_;
};

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool changes_sign(double a, double b, double c, double d) {
    const int lo = std::min({sign(a), sign(b), sign(c), sign(d)});
    const int hi = std::max({sign(a), sign(b), sign(c), sign(d)});
    return lo < 0 && hi > 0;
}

void check_interval(const Interval& r, const char* name) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.hi > r.lo)) {
        throw ConfigError(std::string("find_optimal_pairs: ") + name + " range must satisfy min < max");
    }
}

struct NewtonOutcome {
    Point x;
    double residual;
    int iterations;
    bool converged;
    std::string reason;
};

NewtonOutcome damped_newton(const TwoPhotonAmplitude& f, Point x, const Interval& d_range,
                            const Interval& l_range, const OptimalSearchOptions& opt) {
    const double d_span = d_range.hi - d_range.lo;
    const double l_span = l_range.hi - l_range.lo;
    Complex fx = f(x);
    double res = std::abs(fx);

    int it = 0;
    for (; it < opt.max_iterations && res >= opt.tolerance; ++it) {
        const double hd = opt.relative_fd_step * std::max(std::abs(x.delta), d_span);
        const double hl = opt.relative_fd_step * std::max(std::abs(x.lambda), l_span);
        const Complex dfd = (f({x.delta + hd, x.lambda}) - f({x.delta - hd, x.lambda})) / (2.0 * hd);
        const Complex dfl = (f({x.delta, x.lambda + hl}) - f({x.delta, x.lambda - hl})) / (2.0 * hl);

        Eigen::Matrix2d jac;
        jac << dfd.real(), dfl.real(),
               dfd.imag(), dfl.imag();
        const double det = jac.determinant();
        if (!std::isfinite(det) || det == 0.0) {
            return {x, res, it, false, "singular Jacobian"};
        }
        const Eigen::Vector2d step = jac.inverse() * Eigen::Vector2d(fx.real(), fx.imag());

        // Halve the step until the residual stops growing.
        double damping = 1.0;
        Point trial{};
        Complex ft{};
        for (int k = 0; k < 30; ++k) {
            trial = {x.delta - damping * step(0), x.lambda - damping * step(1)};
            ft = f(trial);
            if (std::abs(ft) < res) break;
            damping *= 0.5;
        }
        if (!(std::abs(ft) < res)) {
            return {x, res, it, false, "no descent along Newton direction"};
        }
        x = trial;
        fx = ft;
        res = std::abs(fx);
    }
    if (res >= opt.tolerance) {
        return {x, res, it, false, "iteration limit reached"};
    }

    // A few undamped polishing steps, kept only while they help.
    for (int k = 0; k < 3; ++k) {
        const double hd = opt.relative_fd_step * std::max(std::abs(x.delta), d_span);
        const double hl = opt.relative_fd_step * std::max(std::abs(x.lambda), l_span);
        const Complex dfd = (f({x.delta + hd, x.lambda}) - f({x.delta - hd, x.lambda})) / (2.0 * hd);
        const Complex dfl = (f({x.delta, x.lambda + hl}) - f({x.delta, x.lambda - hl})) / (2.0 * hl);
        Eigen::Matrix2d jac;
        jac << dfd.real(), dfl.real(), dfd.imag(), dfl.imag();
        if (jac.determinant() == 0.0) break;
        const Eigen::Vector2d step = jac.inverse() * Eigen::Vector2d(fx.real(), fx.imag());
        const Point trial{x.delta - step(0), x.lambda - step(1)};
        const Complex ft = f(trial);
        if (!(std::abs(ft) < res)) break;
        x = trial;
        fx = ft;
        res = std::abs(ft);
    }
    return {x, res, it, true, {}};
}

} // namespace

OptimalSearchResult find_optimal_pairs(const SystemParams& params, Interval delta_range, Interval lambda_range,
                                       const OptimalSearchOptions& opt) {
    params.validate();
    check_interval(delta_range, "delta");
    check_interval(lambda_range, "lambda");
    if (opt.delta_points < 2 || opt.lambda_points < 2) {
        throw ConfigError("find_optimal_pairs: grid needs at least 2 points per axis");
    }

    const TwoPhotonAmplitude f(params);
    const std::size_t nd = opt.delta_points;
    const std::size_t nl = opt.lambda_points;
    const auto node = [&](std::size_t i, std::size_t j) {
        return Point{delta_range.lo + (delta_range.hi - delta_range.lo) * static_cast<double>(i) / (nd - 1),
                     lambda_range.lo + (lambda_range.hi - lambda_range.lo) * static_cast<double>(j) / (nl - 1)};
    };

    std::vector<Complex> grid(nd * nl);
    for (std::size_t i = 0; i < nd; ++i) {
        for (std::size_t j = 0; j < nl; ++j) {
            grid[i * nl + j] = f(node(i, j));
        }
    }

    OptimalSearchResult out;
    for (std::size_t i = 0; i + 1 < nd; ++i) {
        for (std::size_t j = 0; j + 1 < nl; ++j) {
            const Complex a = grid[i * nl + j];
            const Complex b = grid[i * nl + j + 1];
            const Complex c = grid[(i + 1) * nl + j];
            const Complex d = grid[(i + 1) * nl + j + 1];
            if (!changes_sign(a.real(), b.real(), c.real(), d.real()) ||
                !changes_sign(a.imag(), b.imag(), c.imag(), d.imag())) {
                continue;
            }
            const Point lo = node(i, j);
            const Point hi = node(i + 1, j + 1);
            const Point seed{0.5 * (lo.delta + hi.delta), 0.5 * (lo.lambda + hi.lambda)};

            const NewtonOutcome r = damped_newton(f, seed, delta_range, lambda_range, opt);
            if (!r.converged) {
                out.diagnostics.push_back({seed.delta, seed.lambda, r.iterations, r.residual, r.reason});
                continue;
            }
            const double eps = 1e-12;
            if (r.x.delta < delta_range.lo - eps || r.x.delta > delta_range.hi + eps ||
                r.x.lambda < lambda_range.lo - eps * std::abs(lambda_range.hi) ||
                r.x.lambda > lambda_range.hi + eps * std::abs(lambda_range.hi)) {
                out.diagnostics.push_back({seed.delta, seed.lambda, r.iterations, r.residual, "root left the box"});
                continue;
            }
            out.pairs.push_back({r.x.delta, r.x.lambda, r.residual});
        }
    }

    std::sort(out.pairs.begin(), out.pairs.end(),
              [](const OptimalPair& a, const OptimalPair& b) { return a.delta_opt < b.delta_opt; });
    std::vector<OptimalPair> merged;
    for (const OptimalPair& p : out.pairs) {
        auto dup = std::find_if(merged.begin(), merged.end(), [&](const OptimalPair& q) {
            return std::abs(p.delta_opt - q.delta_opt) <= opt.merge_distance &&
                   std::abs(p.lambda_opt - q.lambda_opt) <= opt.merge_distance;
        });
        if (dup == merged.end()) {
            merged.push_back(p);
        } else if (p.residual < dup->residual) {
            *dup = p;
        }
    }
    out.pairs = std::move(merged);
    return out;
}

} // namespace nrpb
