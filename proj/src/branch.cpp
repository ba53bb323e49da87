#include "yule/branch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "yule/geometry.hpp"

namespace yule {

namespace {

void check_branch_args(int dim, double rate, double horizon) {
    Vec::check_dim(dim);
    if (rate < 0.0) throw std::invalid_argument("branch: rate must be >= 0");
    if (!(horizon > 0.0)) throw std::invalid_argument("branch: horizon must be > 0");
}

}  // namespace

BranchPath grow_branch(int dim, double rate, double horizon, Rng& rng) {
    check_branch_args(dim, rate, horizon);
    BranchPath path;
    path.dim = dim;
    path.horizon = horizon;
    path.directions.push_back(sample_direction(dim, rng));
    double cum = 0.0;
    for (;;) {
        const double gap = rng.exponential(rate);
        if (!(cum + gap < horizon)) break;
        cum += gap;
        path.turn_times.push_back(cum);
        path.directions.push_back(sample_direction(dim, rng));
    }
    return path;
}

BranchPath grow_branch_poisson(int dim, double rate, double horizon, Rng& rng) {
    check_branch_args(dim, rate, horizon);
    BranchPath path;
    path.dim = dim;
    path.horizon = horizon;
    const std::uint64_t n = rng.poisson(rate * horizon);
    path.turn_times.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) path.turn_times[i] = horizon * rng.uniform_open();
    std::sort(path.turn_times.begin(), path.turn_times.end());
    path.directions.reserve(n + 1);
    for (std::uint64_t i = 0; i <= n; ++i)
        path.directions.push_back(sample_direction(dim, rng));
    return path;
}

Vec branch_position(const BranchPath& path, double t) {
    if (t < 0.0 || t > path.horizon)
        throw std::invalid_argument("branch_position: time outside [0, horizon]");
    Vec pos = Vec::zero(path.dim);
    double prev = 0.0;
    for (std::size_t i = 0; i < path.turn_times.size(); ++i) {
        const double turn = path.turn_times[i];
        if (t <= turn) {
            pos += (t - prev) * path.directions[i];
            return pos;
        }
        pos += (turn - prev) * path.directions[i];
        prev = turn;
    }
    pos += (t - prev) * path.directions.back();
    return pos;
}

Vec branch_endpoint(const BranchPath& path) { return branch_position(path, path.horizon); }

double max_displacement(const BranchPath& path) {
    Vec pos = Vec::zero(path.dim);
    double prev = 0.0;
    double best = 0.0;
    for (std::size_t i = 0; i < path.turn_times.size(); ++i) {
        pos += (path.turn_times[i] - prev) * path.directions[i];
        prev = path.turn_times[i];
        best = std::max(best, norm2(pos));
    }
    pos += (path.horizon - prev) * path.directions.back();
    best = std::max(best, norm2(pos));
    return std::sqrt(best);
}

TurnSequence sample_turns(int dim, double rate, std::size_t count, Rng& rng) {
    check_branch_args(dim, rate, 1.0);
    TurnSequence seq;
    seq.dim = dim;
    seq.gaps.resize(count);
    seq.directions.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        seq.gaps[i] = rng.exponential(rate);
        seq.directions[i] = sample_direction(dim, rng);
    }
    return seq;
}

BranchPath branch_from_turns(const TurnSequence& turns, double horizon) {
    if (!(horizon > 0.0)) throw std::invalid_argument("branch: horizon must be > 0");
    BranchPath path;
    path.dim = turns.dim;
    path.horizon = horizon;
    double cum = 0.0;
    for (std::size_t i = 0; i < turns.gaps.size(); ++i) {
        path.directions.push_back(turns.directions[i]);
        if (!(cum + turns.gaps[i] < horizon)) return path;
        cum += turns.gaps[i];
        path.turn_times.push_back(cum);
    }
    throw std::invalid_argument("branch_from_turns: sequence ends before the horizon");
}

Walk walk_from_turns(const TurnSequence& turns, std::size_t k_max) {
    if (turns.gaps.size() < k_max + 1)
        throw std::invalid_argument("walk_from_turns: sequence shorter than k_max + 1");
    Walk walk;
    walk.dim = turns.dim;
    walk.steps.resize(k_max + 1);
    Vec pos = Vec::zero(turns.dim);
    for (std::size_t i = 0; i <= k_max; ++i) {
        pos += turns.gaps[i] * turns.directions[i];
        walk.steps[i] = pos;
    }
    return walk;
}

WalkMoments walk_moments(double rate, int dim, int k, std::size_t n_trials, Rng& rng) {
    check_branch_args(dim, rate, 1.0);
    if (k < 0) throw std::invalid_argument("walk_moments: k must be >= 0");
    if (n_trials < 1000) throw std::invalid_argument("walk_moments: need >= 1000 trials");

    const std::size_t n = n_trials;
    // Per-trial records: X_k coordinates and the (k+1)st increment coordinates.
    std::vector<std::vector<double>> xk(dim, std::vector<double>(n));
    std::vector<std::vector<double>> inc(dim, std::vector<double>(n));
    for (std::size_t t = 0; t < n; ++t) {
        const TurnSequence seq = sample_turns(dim, rate, static_cast<std::size_t>(k) + 2, rng);
        const Walk walk = walk_from_turns(seq, static_cast<std::size_t>(k) + 1);
        for (int c = 0; c < dim; ++c) {
            xk[c][t] = walk.steps[k][c];
            inc[c][t] = walk.steps[k + 1][c] - walk.steps[k][c];
        }
    }

    auto sample_mean = [n](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(n);
    };

    WalkMoments m;
    m.dim = dim;
    m.k = k;
    m.n_trials = n;
    std::vector<double> mu(dim);
    for (int c = 0; c < dim; ++c) {
        mu[c] = sample_mean(xk[c]);
        double var = 0.0, m4 = 0.0;
        for (double x : xk[c]) {
            const double d = x - mu[c];
            var += d * d;
            m4 += d * d * d * d;
        }
        var /= static_cast<double>(n - 1);
        m4 /= static_cast<double>(n);
        m.mean.push_back(mu[c]);
        m.mean_se.push_back(std::sqrt(var / static_cast<double>(n)));
        m.variance.push_back(var);
        m.variance_se.push_back(std::sqrt(std::max(0.0, m4 - var * var) / static_cast<double>(n)));
    }
    for (int a = 0; a < dim; ++a) {
        for (int b = a + 1; b < dim; ++b) {
            double cov = 0.0;
            for (std::size_t t = 0; t < n; ++t) cov += (xk[a][t] - mu[a]) * (xk[b][t] - mu[b]);
            cov /= static_cast<double>(n - 1);
            const double corr = cov / std::sqrt(m.variance[a] * m.variance[b]);
            m.cross_correlation.push_back(corr);
            m.cross_correlation_se.push_back(1.0 / std::sqrt(static_cast<double>(n)));
        }
    }
    for (int c = 0; c < dim; ++c) {
        const double mi = sample_mean(inc[c]);
        double cov = 0.0, var_prod = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double p = (inc[c][t] - mi) * (xk[c][t] - mu[c]);
            cov += p;
        }
        cov /= static_cast<double>(n - 1);
        for (std::size_t t = 0; t < n; ++t) {
            const double p = (inc[c][t] - mi) * (xk[c][t] - mu[c]) - cov;
            var_prod += p * p;
        }
        var_prod /= static_cast<double>(n - 1);
        m.increment_past_cov.push_back(cov);
        m.increment_past_cov_se.push_back(std::sqrt(var_prod / static_cast<double>(n)));
    }
    return m;
}

}  // namespace yule
