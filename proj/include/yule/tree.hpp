#ifndef YULE_TREE_HPP
#define YULE_TREE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "yule/geometry.hpp"
#include "yule/rng.hpp"
#include "yule/vec.hpp"

namespace yule {

// Parameters of one simulation run. Splitting rate is per unit time; a leaf
// branches into two after an Exp(rate) wait. The expected segment count is
// about 2 * exp(rate * horizon) - 1, so max_segments must be sized to that.
struct SimConfig {
    int dim = 2;
    double rate = 1.0;
    double horizon = 1.0;
    std::uint64_t master_seed = 1;
    std::size_t max_segments = 10'000'000;

    void validate() const;
};

struct Leaf {
    Vec position;
    Vec direction;  // direction the tip was growing at the horizon
    std::size_t segment = 0;
};

struct BranchPoint {
    Vec position;
    double time = 0.0;
};

// One grown tree: full segment history plus the derived vertex sets.
// Invariants: every non-root segment starts at its parent's end; leaf count
// equals branch-point count + 1; every root-to-leaf path has length horizon.
struct Tree {
    int dim = 0;
    double rate = 0.0;
    double horizon = 0.0;
    std::vector<Segment> segments;
    std::vector<std::int64_t> parent;  // -1 for the root segment
    std::vector<Leaf> leaves;
    std::vector<BranchPoint> branch_points;

    double total_length() const;
};

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(std::size_t built, std::size_t cap)
        : std::runtime_error("segment budget exceeded: " + std::to_string(built) +
                             " of cap " + std::to_string(cap)),
          segments_built(built) {}
    std::size_t segments_built;
};

// Grows one tree, consuming the stream sequentially (depth-first, first
// child before second), so identical (config, stream state) reproduces the
// tree bit for bit. Throws BudgetExceeded past config.max_segments.
Tree grow(const SimConfig& config, Rng& rng);

// sup of |x| over the tree. The norm is convex along each segment, so the
// supremum is attained at a segment endpoint and the endpoint max is exact.
double radius(const Tree& tree);

// min over segments of the point-segment distance; brute force O(#segments).
double min_distance(const Tree& tree, const Vec& x);

// Position of the leaf reached from the root by always taking the first
// child. This path has the law of a single branch.
Vec first_child_leaf_position(const Tree& tree);

struct Probe {
    Vec point;
    double r = 0.0;
};

struct TrialSummary {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double radius = 0.0;
    double total_length = 0.0;
    std::size_t leaf_count = 0;
    std::size_t branch_point_count = 0;
    std::vector<std::uint8_t> hits;  // one flag per probe: min_distance <= r
    bool ok = false;                 // false when the trial hit the segment budget
};

struct TrialBatch {
    std::vector<TrialSummary> trials;  // indexed by trial, failed ones marked
    std::size_t n_failed = 0;

    // Hit fraction for one probe over the successful trials.
    double hit_fraction(std::size_t probe) const;
    std::size_t n_ok() const { return trials.size() - n_failed; }
};

// Runs n_trials independent trees. Trial i draws its stream from
// child_seed(master_seed, i), and results are stored by trial index, so the
// output is identical whatever the thread schedule. Budget blowups mark the
// trial failed instead of aborting the batch.
TrialBatch run_trials(const SimConfig& config, std::size_t n_trials,
                      const std::vector<Probe>& probes = {});

// Serial reference for the OpenMP kernel above; must match it bit for bit.
TrialBatch run_trials_serial(const SimConfig& config, std::size_t n_trials,
                             const std::vector<Probe>& probes = {});

}  // namespace yule

#endif  // YULE_TREE_HPP
