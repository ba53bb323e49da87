#ifndef YULE_FE_HPP
#define YULE_FE_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace yule {

// Discretisation of the planar miss-probability functional equation.
// Nodes are t_i = i*dt (i < nt) and d_j = j*dd (j < nd). Keeping dt = dd
// aligns the discontinuity sheet t = d - r with grid nodes when r is a
// multiple of the step.
struct FeParams {
    double rate = 1.0;
    double r = 0.3;
    double t_max = 2.0;
    double d_max = 2.4;
    double dt = 0.02;
    double dd = 0.02;
    int n_alpha = 48;  // trapezoid panels per angular interval
    int n_s = 48;      // trapezoid panels on the graded radial mesh
    bool parallel = true;

    void validate() const;
};

struct FeGrid {
    double rate = 0.0;
    double r = 0.0;
    double dt = 0.0;
    double dd = 0.0;
    std::size_t nt = 0;
    std::size_t nd = 0;
    std::vector<double> q;  // row-major, q[i*nd + j] in [0,1]

    double t_of(std::size_t i) const { return static_cast<double>(i) * dt; }
    double d_of(std::size_t j) const { return static_cast<double>(j) * dd; }
    double t_max() const { return t_of(nt - 1); }
    double d_max() const { return d_of(nd - 1); }
    double at(std::size_t i, std::size_t j) const { return q[i * nd + j]; }

    // Node classification used both by the solver and by tests.
    bool inside_ball(std::size_t j) const;     // d_j <= r: q = 0 exactly
    bool pre_reach(std::size_t i, std::size_t j) const;  // t_i < d_j - r: q = 1
};

class GridExtentError : public std::runtime_error {
public:
    GridExtentError(double t, double d, double s, double alpha, double reach)
        : std::runtime_error("fe solve: interpolation outside the d grid at t=" +
                             std::to_string(t) + " d=" + std::to_string(d) +
                             " s=" + std::to_string(s) + " alpha=" +
                             std::to_string(alpha) + " (needs d=" +
                             std::to_string(reach) + ")") {}
};

// Time-marching solve. The equation is explicit in t (the right side only
// uses the solution at earlier times); the s -> 0 edge of each layer reads
// the previous layer. Inner integrals use composite trapezoid: uniform in
// the angle, graded mesh s_k = s_max (k/n_s)^2 in the radial variable so the
// exponential kernel's boundary layer at s = 0 stays resolved for large
// rates. Values are clamped to [0,1]; boundary nodes are set exactly.
FeGrid solve_fe(const FeParams& params);

// Boundary-aware bilinear read of the grid at an arbitrary (t, d).
double fe_value(const FeGrid& grid, double t, double d);

struct FeConsistency {
    double max_abs_diff = 0.0;
    std::size_t nodes_compared = 0;
};

// Max discrepancy over shared nodes between a grid and one with the same
// (rate, r, extents) and identical or halved steps.
FeConsistency limit_consistency(const FeGrid& grid, const FeGrid& finer);

// q at a fixed probe for a sweep of rates; used to watch the high-rate
// drift of the solution toward {0, 1}.
std::vector<double> fe_lambda_sweep(const std::vector<double>& rates, double r,
                                    double t, double d, const FeParams& base);

}  // namespace yule

#endif  // YULE_FE_HPP
