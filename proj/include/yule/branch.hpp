#ifndef YULE_BRANCH_HPP
#define YULE_BRANCH_HPP

#include <cstddef>
#include <vector>

#include "yule/rng.hpp"
#include "yule/vec.hpp"

namespace yule {

// Piecewise-linear path of a single branch: unit-speed growth from the
// origin, direction changes at the turn times. turn_times are cumulative
// and strictly increasing in (0, horizon]; directions has one more entry
// than turn_times.
struct BranchPath {
    int dim = 0;
    double horizon = 0.0;
    std::vector<double> turn_times;
    std::vector<Vec> directions;

    std::size_t turns() const { return turn_times.size(); }
};

// Sequential-clock construction: Exp(rate) gaps drawn until the horizon is
// passed, a fresh uniform direction per piece.
BranchPath grow_branch(int dim, double rate, double horizon, Rng& rng);

// Poisson-count construction: turn count ~ Poisson(rate * horizon), turn
// times sorted uniforms. Equal in law to grow_branch; both are kept so the
// equivalence can be tested.
BranchPath grow_branch_poisson(int dim, double rate, double horizon, Rng& rng);

// Position of the path at time t in [0, horizon].
Vec branch_position(const BranchPath& path, double t);

Vec branch_endpoint(const BranchPath& path);

// max over [0, horizon] of |position|. Along each straight piece the norm is
// convex, so the max over turn points and the final endpoint is exact.
double max_displacement(const BranchPath& path);

// Shared raw draws (gaps, directions) from which both a branch and a
// projection walk can be built, realising the coupling B(t_k*) = X_k.
struct TurnSequence {
    int dim = 0;
    std::vector<double> gaps;  // i.i.d. Exp(rate)
    std::vector<Vec> directions;
};

TurnSequence sample_turns(int dim, double rate, std::size_t count, Rng& rng);

// Branch built from the leading turns of the sequence, truncated at horizon.
// Requires the cumulative gaps to pass horizon within the sequence.
BranchPath branch_from_turns(const TurnSequence& turns, double horizon);

// Projection walk X_k = sum_{i<=k} gap_i * dir_i.
struct Walk {
    int dim = 0;
    std::vector<Vec> steps;  // steps[k] = X_k, k = 0..k_max

    std::size_t k_max() const { return steps.size() - 1; }
};

Walk walk_from_turns(const TurnSequence& turns, std::size_t k_max);

// Monte Carlo moments of the walk at step k: per-coordinate mean and
// variance, pairwise cross-correlations, and the covariance between the
// (k+1)st increment and X_k. Standard errors accompany every estimate.
struct WalkMoments {
    int dim = 0;
    int k = 0;
    std::size_t n_trials = 0;
    std::vector<double> mean, mean_se;          // per coordinate
    std::vector<double> variance, variance_se;  // per coordinate
    std::vector<double> cross_correlation;      // pairs (m,n), m < n
    std::vector<double> cross_correlation_se;
    std::vector<double> increment_past_cov;  // per coordinate
    std::vector<double> increment_past_cov_se;
};

WalkMoments walk_moments(double rate, int dim, int k, std::size_t n_trials, Rng& rng);

}  // namespace yule

#endif  // YULE_BRANCH_HPP
