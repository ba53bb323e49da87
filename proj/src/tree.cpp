#include "yule/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "yule/parallel.hpp"

namespace yule {

void SimConfig::validate() const {
    Vec::check_dim(dim);
    if (rate < 0.0) throw std::invalid_argument("SimConfig: rate must be >= 0");
    if (!(horizon > 0.0)) throw std::invalid_argument("SimConfig: horizon must be > 0");
    if (max_segments < 1) throw std::invalid_argument("SimConfig: max_segments must be >= 1");
}

double Tree::total_length() const {
    double sum = 0.0;
    for (const Segment& s : segments) sum += s.length();
    return sum;
}

Tree grow(const SimConfig& config, Rng& rng) {
    config.validate();
    Tree tree;
    tree.dim = config.dim;
    tree.rate = config.rate;
    tree.horizon = config.horizon;

    struct Pending {
        Vec start;
        double birth;
        std::int64_t parent;
    };
    std::vector<Pending> stack;
    stack.push_back({Vec::zero(config.dim), 0.0, -1});

    while (!stack.empty()) {
        const Pending p = stack.back();
        stack.pop_back();
        if (tree.segments.size() >= config.max_segments)
            throw BudgetExceeded(tree.segments.size(), config.max_segments);

        const Vec dir = sample_direction(config.dim, rng);
        const double wait = rng.exponential(config.rate);
        const double remaining = config.horizon - p.birth;
        const std::size_t idx = tree.segments.size();

        if (wait < remaining) {
            const double fire = p.birth + wait;
            const Vec end = p.start + wait * dir;
            tree.segments.push_back({p.start, end, p.birth});
            tree.parent.push_back(p.parent);
            tree.branch_points.push_back({end, fire});
            // LIFO: push the second child first so the first child (and its
            // whole subtree) is processed next, keeping stream order fixed.
            stack.push_back({end, fire, static_cast<std::int64_t>(idx)});
            stack.push_back({end, fire, static_cast<std::int64_t>(idx)});
        } else {
            const Vec end = p.start + remaining * dir;
            tree.segments.push_back({p.start, end, p.birth});
            tree.parent.push_back(p.parent);
            tree.leaves.push_back({end, dir, idx});
        }
    }
    return tree;
}

double radius(const Tree& tree) {
    double best = 0.0;
    for (const Segment& s : tree.segments) {
        best = std::max(best, norm2(s.start));
        best = std::max(best, norm2(s.end));
    }
    return std::sqrt(best);
}

double min_distance(const Tree& tree, const Vec& x) {
    double best = std::numeric_limits<double>::infinity();
    for (const Segment& s : tree.segments)
        best = std::min(best, point_segment_distance(x, s));
    return best;
}

Vec first_child_leaf_position(const Tree& tree) {
    // The first child of segment k is created immediately after k, so the
    // all-first-children path is the initial index chain 0,1,...,m where m
    // is the first segment that is a leaf.
    std::size_t best = tree.segments.size();
    for (const Leaf& leaf : tree.leaves) best = std::min(best, leaf.segment);
    for (const Leaf& leaf : tree.leaves)
        if (leaf.segment == best) return leaf.position;
    throw std::logic_error("first_child_leaf_position: tree has no leaves");
}

double TrialBatch::hit_fraction(std::size_t probe) const {
    std::size_t hits = 0, total = 0;
    for (const TrialSummary& t : trials) {
        if (!t.ok) continue;
        ++total;
        if (t.hits[probe]) ++hits;
    }
    if (total == 0) return 0.0;
    return static_cast<double>(hits) / static_cast<double>(total);
}

namespace {

TrialSummary run_one(const SimConfig& config, std::size_t trial,
                     const std::vector<Probe>& probes) {
    TrialSummary out;
    out.trial = trial;
    out.seed = child_seed(config.master_seed, trial);
    Rng rng(out.seed);
    try {
        const Tree tree = grow(config, rng);
        out.radius = radius(tree);
        out.total_length = tree.total_length();
        out.leaf_count = tree.leaves.size();
        out.branch_point_count = tree.branch_points.size();
        out.hits.resize(probes.size());
        for (std::size_t p = 0; p < probes.size(); ++p)
            out.hits[p] = min_distance(tree, probes[p].point) <= probes[p].r ? 1 : 0;
        out.ok = true;
    } catch (const BudgetExceeded&) {
        out.hits.assign(probes.size(), 0);
        out.ok = false;
    }
    return out;
}

TrialBatch run_trials_impl(const SimConfig& config, std::size_t n_trials,
                           const std::vector<Probe>& probes, bool parallel) {
    config.validate();
    if (n_trials < 1) throw std::invalid_argument("run_trials: n_trials must be >= 1");
    TrialBatch batch;
    batch.trials.resize(n_trials);
    const long n = static_cast<long>(n_trials);
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(max_threads())
        for (long i = 0; i < n; ++i)
            batch.trials[i] = run_one(config, static_cast<std::size_t>(i), probes);
    } else {
        for (long i = 0; i < n; ++i)
            batch.trials[i] = run_one(config, static_cast<std::size_t>(i), probes);
    }
    for (const TrialSummary& t : batch.trials)
        if (!t.ok) ++batch.n_failed;
    return batch;
}

}  // namespace

TrialBatch run_trials(const SimConfig& config, std::size_t n_trials,
                      const std::vector<Probe>& probes) {
    return run_trials_impl(config, n_trials, probes, true);
}

TrialBatch run_trials_serial(const SimConfig& config, std::size_t n_trials,
                             const std::vector<Probe>& probes) {
    return run_trials_impl(config, n_trials, probes, false);
}

}  // namespace yule
