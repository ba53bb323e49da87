#include "yule/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "yule/parallel.hpp"

namespace yule {

Vec sample_direction(int dim, Rng& rng) {
    if (dim < 1)
        throw std::invalid_argument("sample_direction: dimension must be >= 1");
    Vec::check_dim(dim);
    if (dim == 1) {
        Vec v(1);
        v[0] = rng.uniform() < 0.5 ? -1.0 : 1.0;
        return v;
    }
    for (;;) {
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = rng.gaussian();
        const double n = norm(v);
        if (n > 1e-12) {  // redraw a (practically impossible) near-zero vector
            v *= 1.0 / n;
            return v;
        }
    }
}

double point_segment_distance(const Vec& p, const Segment& s) {
    const Vec d = s.end - s.start;
    const double len2 = norm2(d);
    if (len2 == 0.0) return distance(p, s.start);
    double t = dot(p - s.start, d) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, s.start + t * d);
}

std::optional<Segment> clip_segment_to_ball(const Segment& s, const Vec& center,
                                            double radius) {
    const Vec u = s.end - s.start;
    const Vec w = s.start - center;
    const double a = norm2(u);
    if (a == 0.0) {
        if (norm(w) <= radius) return s;
        return std::nullopt;
    }
    const double b = 2.0 * dot(w, u);
    const double c = norm2(w) - radius * radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    double t0 = (-b - sq) / (2.0 * a);
    double t1 = (-b + sq) / (2.0 * a);
    t0 = std::max(t0, 0.0);
    t1 = std::min(t1, 1.0);
    if (t0 > t1) return std::nullopt;
    Segment out;
    out.start = s.start + t0 * u;
    out.end = s.start + t1 * u;
    out.birth_time = s.birth_time;
    return out;
}

std::vector<Vec> lattice_points_in_ball(int dim, const Vec& center, double radius,
                                        double spacing, double shrink) {
    if (spacing <= 0.0) throw std::invalid_argument("lattice: spacing must be > 0");
    Vec::check_dim(dim);
    const double reach = radius - shrink;
    std::vector<Vec> pts;
    if (reach < 0.0) return pts;
    const double r2 = reach * reach;

    // Nested scan over integer coordinates, one axis at a time.
    std::vector<long> lo(dim), hi(dim), idx(dim);
    for (int i = 0; i < dim; ++i) {
        lo[i] = static_cast<long>(std::ceil((center[i] - reach) / spacing));
        hi[i] = static_cast<long>(std::floor((center[i] + reach) / spacing));
        idx[i] = lo[i];
    }
    for (int i = 0; i < dim; ++i)
        if (lo[i] > hi[i]) return pts;
    for (;;) {
        Vec p(dim);
        double d2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            p[i] = idx[i] * spacing;
            const double di = p[i] - center[i];
            d2 += di * di;
        }
        if (d2 <= r2) pts.push_back(p);
        int axis = dim - 1;
        while (axis >= 0) {
            if (++idx[axis] <= hi[axis]) break;
            idx[axis] = lo[axis];
            --axis;
        }
        if (axis < 0) break;
    }
    return pts;
}

SegmentDistanceScan::SegmentDistanceScan(const std::vector<Segment>& segments, int dim)
    : dim_(dim) {
    Vec::check_dim(dim);
    const std::size_t n = segments.size();
    start_.resize(n * static_cast<std::size_t>(dim));
    delta_.resize(n * static_cast<std::size_t>(dim));
    inv_len2_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Segment& s = segments[k];
        double len2 = 0.0;
        for (int c = 0; c < dim; ++c) {
            const double d = s.end[c] - s.start[c];
            start_[k * dim_ + c] = s.start[c];
            delta_[k * dim_ + c] = d;
            len2 += d * d;
        }
        inv_len2_[k] = len2 > 0.0 ? 1.0 / len2 : 0.0;
    }
}

double SegmentDistanceScan::min_distance2(const Vec& p) const {
    return min_distance2_pruned(p, -1.0);
}

double SegmentDistanceScan::min_distance2_pruned(const Vec& p, double floor2) const {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = inv_len2_.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double* a = &start_[k * dim_];
        const double* d = &delta_[k * dim_];
        double proj = 0.0;
        for (int c = 0; c < dim_; ++c) proj += (p[c] - a[c]) * d[c];
        double t = proj * inv_len2_[k];
        t = std::clamp(t, 0.0, 1.0);
        double dist2 = 0.0;
        for (int c = 0; c < dim_; ++c) {
            const double diff = p[c] - a[c] - t * d[c];
            dist2 += diff * diff;
        }
        if (dist2 < best) {
            best = dist2;
            if (best < floor2) break;  // cannot matter to a running maximum
        }
    }
    return best;
}

bool SegmentDistanceScan::any_within(const Vec& p, double r) const {
    const double r2 = r * r;
    const std::size_t n = inv_len2_.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double* a = &start_[k * dim_];
        const double* d = &delta_[k * dim_];
        double proj = 0.0;
        for (int c = 0; c < dim_; ++c) proj += (p[c] - a[c]) * d[c];
        double t = proj * inv_len2_[k];
        t = std::clamp(t, 0.0, 1.0);
        double dist2 = 0.0;
        for (int c = 0; c < dim_; ++c) {
            const double diff = p[c] - a[c] - t * d[c];
            dist2 += diff * diff;
        }
        if (dist2 <= r2) return true;
    }
    return false;
}

namespace {

HausdorffEstimate hausdorff_impl(const std::vector<Segment>& segments,
                                 const Vec& center, double radius,
                                 double grid_step, bool parallel) {
    if (radius <= 0.0) throw std::invalid_argument("hausdorff_to_ball: radius must be > 0");
    if (grid_step <= 0.0)
        throw std::invalid_argument("hausdorff_to_ball: grid_step must be > 0");

    std::vector<Segment> clipped;
    clipped.reserve(segments.size());
    for (const Segment& s : segments) {
        if (auto cs = clip_segment_to_ball(s, center, radius)) clipped.push_back(*cs);
    }

    const std::vector<Vec> grid =
        lattice_points_in_ball(center.dim, center, radius, grid_step, grid_step / 2.0);

    HausdorffEstimate est;
    est.grid_points = grid.size();
    est.clipped_segments = clipped.size();
    if (clipped.empty()) {
        est.value = radius;
        est.empty_clipped_set = true;
        return est;
    }

    const SegmentDistanceScan scan(clipped, center.dim);
    // Points whose running minimum falls below the max seen so far cannot
    // change the supremum, so their scans may stop early; the final value
    // is exact either way.
    double sup2 = 0.0;
    const long n = static_cast<long>(grid.size());
    if (parallel) {
#pragma omp parallel for schedule(static) reduction(max : sup2) \
    num_threads(max_threads())
        for (long i = 0; i < n; ++i) {
            const double d2 = scan.min_distance2_pruned(grid[i], sup2);
            if (d2 > sup2) sup2 = d2;
        }
    } else {
        for (long i = 0; i < n; ++i) {
            const double d2 = scan.min_distance2_pruned(grid[i], sup2);
            if (d2 > sup2) sup2 = d2;
        }
    }
    est.value = std::sqrt(sup2);
    return est;
}

}  // namespace

HausdorffEstimate hausdorff_to_ball(const std::vector<Segment>& segments,
                                    const Vec& center, double radius,
                                    double grid_step) {
    return hausdorff_impl(segments, center, radius, grid_step, true);
}

HausdorffEstimate hausdorff_to_ball_serial(const std::vector<Segment>& segments,
                                           const Vec& center, double radius,
                                           double grid_step) {
    return hausdorff_impl(segments, center, radius, grid_step, false);
}

}  // namespace yule
