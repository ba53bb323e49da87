#include "yule/fe.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "yule/analytic.hpp"
#include "yule/parallel.hpp"

namespace yule {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Absolute slack for classifying nodes against d = r and t = d - r; the
// grids live on O(1) scales.
constexpr double kGridEps = 1e-9;

}  // namespace

void FeParams::validate() const {
    if (!(r > 0.0)) throw std::invalid_argument("fe: r must be > 0");
    if (rate < 0.0) throw std::invalid_argument("fe: rate must be >= 0");
    if (!(dt > 0.0 && dd > 0.0)) throw std::invalid_argument("fe: steps must be > 0");
    if (n_alpha < 16 || n_s < 16)
        throw std::invalid_argument("fe: quadrature orders must be >= 16");
    if (!(t_max >= dt && d_max >= dd))
        throw std::invalid_argument("fe: extents must cover at least one step");
}

bool FeGrid::inside_ball(std::size_t j) const { return d_of(j) <= r + kGridEps; }

bool FeGrid::pre_reach(std::size_t i, std::size_t j) const {
    return t_of(i) < d_of(j) - r - kGridEps;
}

namespace {

// Bilinear read of rows 0..row_limit with the analytic boundary shortcuts.
// s and alpha are carried only for the extent error message.
double lookup(const FeGrid& g, double u, double reach, std::size_t row_limit,
              double t_here, double d_here, double s, double alpha) {
    if (reach <= g.r + kGridEps) return 0.0;
    if (u <= reach - g.r + kGridEps) return 1.0;
    if (reach > g.d_max() + kGridEps)
        throw GridExtentError(t_here, d_here, s, alpha, reach);

    // The newest dt-band of history is not on the grid yet; read it from
    // the previous layer.
    const double u_cap = g.t_of(row_limit);
    if (u > u_cap) u = u_cap;
    if (u < 0.0) u = 0.0;

    const double ti = u / g.dt;
    const double dj = std::min(reach, g.d_max()) / g.dd;
    std::size_t i0 = static_cast<std::size_t>(ti);
    std::size_t j0 = static_cast<std::size_t>(dj);
    if (i0 > row_limit) i0 = row_limit;
    if (j0 >= g.nd - 1) j0 = g.nd - 2;
    // Never touch the layer under construction: collapse onto row_limit.
    const std::size_t i1 = std::min(i0 + 1, row_limit);
    const double ft = ti - static_cast<double>(i0);
    const double fd = dj - static_cast<double>(j0);
    const double q00 = g.at(i0, j0);
    const double q01 = g.at(i0, j0 + 1);
    const double q10 = g.at(i1, j0);
    const double q11 = g.at(i1, j0 + 1);
    return (1.0 - ft) * ((1.0 - fd) * q00 + fd * q01) +
           ft * ((1.0 - fd) * q10 + fd * q11);
}

struct NodeSolver {
    const FeGrid& g;
    const FeParams& p;
    std::size_t row;  // layer being built; rows < row are complete
    double t;

    // integral over s in [0, s_max] of (rate e^{-rate s}/2pi) q(t-s, D)^2,
    // composite trapezoid on the graded mesh.
    double inner(double d, double cos_a, double alpha, double s_max) const {
        if (s_max <= 0.0 || p.rate == 0.0) return 0.0;
        const int n = p.n_s;
        double sum = 0.0;
        double s_prev = 0.0;
        double f_prev = integrand(d, cos_a, alpha, 0.0);
        for (int k = 1; k <= n; ++k) {
            const double frac = static_cast<double>(k) / n;
            const double s = s_max * frac * frac;
            const double f = integrand(d, cos_a, alpha, s);
            sum += 0.5 * (s - s_prev) * (f_prev + f);
            s_prev = s;
            f_prev = f;
        }
        return sum;
    }

    double integrand(double d, double cos_a, double alpha, double s) const {
        const double reach2 = d * d + s * s - 2.0 * d * s * cos_a;
        const double reach = std::sqrt(std::max(0.0, reach2));
        const double qv = lookup(g, t - s, reach, row - 1, t, d, s, alpha);
        return p.rate * std::exp(-p.rate * s) / (2.0 * kPi) * qv * qv;
    }

    double solve_node(double d) const {
        const double a0 = fe_alpha0(d, g.r);

        // Near cone: the first piece can enter the ball; branching matters
        // only before min(s0(alpha), t).
        double near_cone = 0.0;
        {
            const int n = p.n_alpha;
            const double da = a0 / n;
            for (int m = 0; m <= n; ++m) {
                // m/n is exact at the endpoints, so alpha never overshoots a0
                const double alpha = a0 * (static_cast<double>(m) / n);
                const double w = (m == 0 || m == n) ? 0.5 : 1.0;
                const double s0 = fe_s0(d, g.r, alpha);
                near_cone +=
                    w * da * inner(d, std::cos(alpha), alpha, std::min(s0, t));
            }
        }

        // Far side: the first piece cannot enter the ball before branching.
        double far_side = 0.0;
        {
            const int n = p.n_alpha;
            const double da = (kPi - a0) / n;
            for (int m = 0; m <= n; ++m) {
                const double alpha = a0 + (kPi - a0) * m / n;
                const double w = (m == 0 || m == n) ? 0.5 : 1.0;
                far_side += w * da * inner(d, std::cos(alpha), alpha, t);
            }
        }

        // Both halves of the plane contribute symmetrically. Nodes sitting
        // on the reach sheet within rounding are evaluated at t = d - r.
        const double t_eff = std::max(t, d - g.r);
        const double no_branch =
            std::exp(-p.rate * t) * miss_given_no_branch(t_eff, d, g.r);
        const double q = 2.0 * near_cone + 2.0 * far_side + no_branch;
        return std::clamp(q, 0.0, 1.0);
    }
};

}  // namespace

FeGrid solve_fe(const FeParams& params) {
    params.validate();
    FeGrid g;
    g.rate = params.rate;
    g.r = params.r;
    g.dt = params.dt;
    g.dd = params.dd;
    g.nt = static_cast<std::size_t>(std::round(params.t_max / params.dt)) + 1;
    g.nd = static_cast<std::size_t>(std::round(params.d_max / params.dd)) + 1;
    g.q.assign(g.nt * g.nd, 0.0);

    // Boundary values first: 0 inside the ball, 1 before the sheet t = d - r.
    for (std::size_t i = 0; i < g.nt; ++i)
        for (std::size_t j = 0; j < g.nd; ++j)
            g.q[i * g.nd + j] = g.inside_ball(j) ? 0.0 : (g.pre_reach(i, j) ? 1.0 : 0.0);

    // Row 0 has no interior nodes (t = 0 is pre-reach everywhere outside the
    // ball), so marching starts at row 1.
    for (std::size_t i = 1; i < g.nt; ++i) {
        NodeSolver solver{g, params, i, g.t_of(i)};
        const long nd = static_cast<long>(g.nd);
        if (params.parallel) {
            // exceptions must not unwind out of the OpenMP region
            std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
            for (long j = 0; j < nd; ++j) {
                try {
                    const std::size_t ju = static_cast<std::size_t>(j);
                    if (!g.inside_ball(ju) && !g.pre_reach(i, ju))
                        g.q[i * g.nd + ju] = solver.solve_node(g.d_of(ju));
                } catch (...) {
#pragma omp critical
                    if (!error) error = std::current_exception();
                }
            }
            if (error) std::rethrow_exception(error);
        } else {
            for (long j = 0; j < nd; ++j) {
                const std::size_t ju = static_cast<std::size_t>(j);
                if (!g.inside_ball(ju) && !g.pre_reach(i, ju))
                    g.q[i * g.nd + ju] = solver.solve_node(g.d_of(ju));
            }
        }
    }
    return g;
}

double fe_value(const FeGrid& grid, double t, double d) {
    if (d <= grid.r + kGridEps) return 0.0;
    if (t < d - grid.r - kGridEps) return 1.0;
    if (d > grid.d_max() + kGridEps || t > grid.t_max() + kGridEps)
        throw GridExtentError(t, d, 0.0, 0.0, d);
    const double ti = std::min(t, grid.t_max()) / grid.dt;
    const double dj = std::min(d, grid.d_max()) / grid.dd;
    std::size_t i0 = static_cast<std::size_t>(ti);
    std::size_t j0 = static_cast<std::size_t>(dj);
    if (i0 >= grid.nt - 1) i0 = grid.nt - 2;
    if (j0 >= grid.nd - 1) j0 = grid.nd - 2;
    const double ft = ti - static_cast<double>(i0);
    const double fd = dj - static_cast<double>(j0);
    return (1.0 - ft) * ((1.0 - fd) * grid.at(i0, j0) + fd * grid.at(i0, j0 + 1)) +
           ft * ((1.0 - fd) * grid.at(i0 + 1, j0) + fd * grid.at(i0 + 1, j0 + 1));
}

FeConsistency limit_consistency(const FeGrid& grid, const FeGrid& finer) {
    const auto close = [](double a, double b) { return std::abs(a - b) < 1e-12; };
    if (!close(grid.r, finer.r) || !close(grid.t_max(), finer.t_max()) ||
        !close(grid.d_max(), finer.d_max()) || !close(grid.rate, finer.rate))
        throw std::invalid_argument("limit_consistency: grids must share rate, r and extents");

    std::size_t stride;
    if (close(grid.dt, finer.dt) && close(grid.dd, finer.dd)) {
        stride = 1;
    } else if (close(grid.dt, 2.0 * finer.dt) && close(grid.dd, 2.0 * finer.dd)) {
        stride = 2;
    } else {
        throw std::invalid_argument("limit_consistency: steps must match or be halved");
    }

    FeConsistency out;
    for (std::size_t i = 0; i < grid.nt; ++i) {
        for (std::size_t j = 0; j < grid.nd; ++j) {
            const double diff = std::abs(grid.at(i, j) - finer.at(i * stride, j * stride));
            out.max_abs_diff = std::max(out.max_abs_diff, diff);
            ++out.nodes_compared;
        }
    }
    return out;
}

std::vector<double> fe_lambda_sweep(const std::vector<double>& rates, double r,
                                    double t, double d, const FeParams& base) {
    std::vector<double> out;
    out.reserve(rates.size());
    for (double rate : rates) {
        FeParams p = base;
        p.rate = rate;
        p.r = r;
        const FeGrid g = solve_fe(p);
        out.push_back(fe_value(g, t, d));
    }
    return out;
}

}  // namespace yule
