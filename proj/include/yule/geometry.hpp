#ifndef YULE_GEOMETRY_HPP
#define YULE_GEOMETRY_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "yule/rng.hpp"
#include "yule/vec.hpp"

namespace yule {

// Straight piece of the tree. start is where growth began (at birth_time),
// end is where it stopped, so |end - start| never exceeds the remaining
// time budget of the run.
struct Segment {
    Vec start;
    Vec end;
    double birth_time = 0.0;

    double length() const { return distance(start, end); }
};

// Uniform draw from the unit sphere S^{dim-1}. dim = 1 gives +1 or -1;
// higher dimensions normalise a standard Gaussian vector.
Vec sample_direction(int dim, Rng& rng);

// Euclidean distance from p to the closed segment s (exact; endpoint
// clamping of the orthogonal projection).
double point_segment_distance(const Vec& p, const Segment& s);

// Part of s inside the closed ball B(center, radius), or nothing if the
// segment misses the ball. Intersection parameters come from the exact
// quadratic, so clipping introduces no sampling error.
std::optional<Segment> clip_segment_to_ball(const Segment& s, const Vec& center,
                                            double radius);

// Lattice (spacing * Z^dim) restricted to the closed ball
// B(center, radius - shrink).
std::vector<Vec> lattice_points_in_ball(int dim, const Vec& center, double radius,
                                        double spacing, double shrink);

// Flattened copy of a segment set for repeated distance queries. Still a
// brute-force O(#segments) scan per query, just cache-friendly and free of
// per-segment square roots.
class SegmentDistanceScan {
public:
    SegmentDistanceScan(const std::vector<Segment>& segments, int dim);

    std::size_t size() const { return inv_len2_.size(); }

    // Squared distance from p to the nearest segment; +inf when empty.
    double min_distance2(const Vec& p) const;

    // Squared distance, abandoning the scan once it drops below `floor2`
    // (the exact value is then irrelevant to a running maximum).
    double min_distance2_pruned(const Vec& p, double floor2) const;

    // True as soon as some segment lies within distance r of p.
    bool any_within(const Vec& p, double r) const;

private:
    int dim_;
    std::vector<double> start_;     // size() * dim
    std::vector<double> delta_;     // size() * dim
    std::vector<double> inv_len2_;  // 0 for degenerate segments
};

struct HausdorffEstimate {
    double value = 0.0;
    bool empty_clipped_set = false;  // no segment part inside the ball
    std::size_t grid_points = 0;
    std::size_t clipped_segments = 0;
};

// Grid estimate of the Hausdorff distance between (segments restricted to
// the ball) and the ball itself. The clipped set is a subset of the ball,
// so only the ball-side supremum is nonzero; it is evaluated over the
// lattice (grid_step * Z^dim) intersected with B(center, radius - grid_step/2).
// Discretisation error is bounded by grid_step * sqrt(dim) / 2. Each lattice
// query is a brute-force scan over the clipped segments, O(#segments).
// Convention for an empty clipped set: value = radius, flag set.
HausdorffEstimate hausdorff_to_ball(const std::vector<Segment>& segments,
                                    const Vec& center, double radius,
                                    double grid_step);

// Serial reference for the OpenMP kernel above; kept for testing and
// benchmarking, must produce identical results.
HausdorffEstimate hausdorff_to_ball_serial(const std::vector<Segment>& segments,
                                           const Vec& center, double radius,
                                           double grid_step);

}  // namespace yule

#endif  // YULE_GEOMETRY_HPP
