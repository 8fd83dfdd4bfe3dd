// optimal.hpp — locate (delta, Lambda) pairs where the two-photon amplitude
// C02 vanishes, i.e. where the analytic g2(0) is exactly zero.
//
// C02 = 0 is two real equations in two real unknowns. A coarse grid marks
// cells where both Re C02 and Im C02 change sign; each marked cell seeds a
// damped Newton iteration with a central-difference Jacobian.

#pragma once

#include "nrpb/model.hpp"

#include <string>
#include <vector>

namespace nrpb {

// Closed interval in units of omega_b.
struct Interval {
    double lo{0.0};
    double hi{0.0};
};

struct OptimalSearchOptions {
    std::size_t delta_points{400};
    std::size_t lambda_points{100};
    double relative_fd_step{1e-7};
    double tolerance{1e-12};      // on |C02| with C00 = 1
    int max_iterations{100};
    double merge_distance{1e-6};  // omega_b units, both coordinates
};

// Root location in units of omega_b; residual is |C02| at the root.
struct OptimalPair {
    double delta_opt{0.0};
    double lambda_opt{0.0};
    double residual{0.0};
};

// Why a seed cell did not produce a root.
struct SeedDiagnostic {
    double seed_delta{0.0};
    double seed_lambda{0.0};
    int iterations{0};
    double final_residual{0.0};
    std::string reason;
};

struct OptimalSearchResult {
    std::vector<OptimalPair> pairs;  // sorted by delta_opt, duplicates merged
    std::vector<SeedDiagnostic> diagnostics;
};

// Every field of `params` except delta and Lambda is held fixed. Throws
// ConfigError for an empty or reversed interval.
OptimalSearchResult find_optimal_pairs(const SystemParams& params, Interval delta_range, Interval lambda_range,
                                       const OptimalSearchOptions& options = {});

} // namespace nrpb
