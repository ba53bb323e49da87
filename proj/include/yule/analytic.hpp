#ifndef YULE_ANALYTIC_HPP
#define YULE_ANALYTIC_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace yule {

// Thrown by miss_given_no_branch when the segment cannot reach the ball at
// all (t < d - r); callers treat that region via the boundary value 1.
class OutOfReach : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// First-success pmf y(1-y)^{k-1}, k >= 1; the leaf-count law with
// y = exp(-rate * horizon).
double fs_pmf(double y, int k);

// Expected total length (exp(rate*horizon) - 1)/rate, with the rate -> 0
// limit (= horizon) handled explicitly.
double length_mean(double rate, double horizon);

// Moment generating function of the total length,
// (x - rate) / (x e^{(rate-x) horizon} - rate). Exact 1 at x = 0. Throws
// std::domain_error at or beyond the divergence point.
double length_mgf(double rate, double horizon, double x);

// Supremum of the finiteness domain of length_mgf: the smallest positive
// non-removable root of x e^{(rate-x)t} = rate (x = rate itself is a
// removable point of the formula when rate*horizon < 1). +infinity when
// rate = 0.
double length_mgf_domain_max(double rate, double horizon);

// Probability that a single non-branching segment of length t misses the
// ball of radius r around a point at distance d (two-dimensional formula).
// Requires d > r > 0 and t >= d - r (else OutOfReach).
double miss_given_no_branch(double t, double d, double r);

// Kernels of the planar connection functional equation.
double fe_alpha0(double d, double r);                  // arcsin(r/d)
double fe_s0(double d, double r, double alpha);        // first ball hit along the ray
double fe_travel_distance(double d, double s, double alpha);  // |x - s*u(alpha)|

struct FeKernels {
    double alpha0 = 0.0;
    double s0 = 0.0;
    double travel_distance = 0.0;
};

FeKernels fe_kernels(double d, double r, double s, double alpha);

// Series sums used by the explicit bounds. Terms are accumulated until the
// next one drops below 1e-16 in absolute value; if the iteration guard is
// hit first, the geometric tail bound is added so the result still
// dominates the series. The term count is reported for BoundReport.
struct SeriesSum {
    double value = 0.0;
    std::size_t terms = 0;
};

SeriesSum sum_qn_over_np1(double q);      // sum_{n>=1} q^n/(n+1)
SeriesSum sum_qn_over_n(double q);        // sum_{n>=1} q^n/n
SeriesSum sum_qn_over_n_from2(double q);  // sum_{n>=2} q^n/n

// Explicit all-rate lower bound on P(radius of the unit-time tree >= 1/2 - eps):
// (1 - e^{-eps L}(1 + C)) (1 - exp(-e^{L/2}/8)) (1 - Ctilde exp(-e^{eps L}/4)).
struct RadiusProductBound {
    double value = 0.0;    // unclamped product
    double clamped = 0.0;  // max(value, 0), still <= 1
    double factor_enough_leaves = 0.0;
    double factor_good_directions = 0.0;
    double factor_long_interval = 0.0;
    double c_lambda_eps = 0.0;
    double c_tilde = 0.0;
    std::size_t series_terms = 0;
};

RadiusProductBound radius_lower_bound_product(double rate, double eps);

// Conditional two-factor bound: if P(radius >= d) >= p holds for large
// rates, then P(radius >= d - eps) is at least
// (1 - exp(e^{(1-beta) eps L/2} log(1-p))) (1 - e^{-eps beta L/2}(1 + sum)).
// May be <= 0 (vacuous) for small rates; returned unclamped.
double radius_lower_bound_conditional(double rate, double eps, double beta, double d,
                                      double p);

// First-success tail bound b * sum_{n>=1} y^{n-a}/n and its exact
// counterpart P(N_y <= m) = 1 - (1-y)^{floor(m)}.
double fs_tail_bound(double y, double a, double b);
double fs_cdf_exact(double y, double m);

// Bound on P(max of floor(b e^{ax}) i.i.d. Exp(x) variables <= c) for
// a > c > 0: C_{a,b,c,x} exp(-b e^{(a-c)x}), and the exact value
// (1 - e^{-cx})^{floor(b e^{ax})}.
double exp_max_bound(double a, double b, double c, double x);
double exp_max_exact(double a, double b, double c, double x);

// Uniform carrier for bound evaluations, printed by the check harness.
struct BoundReport {
    std::string name;
    std::map<std::string, double> params;
    double bound_value = 0.0;
    std::optional<double> empirical;
    std::optional<bool> satisfied;
    std::size_t series_terms = 0;
    std::string detail;
};

// Monte Carlo check of the rescaling identity for connection probabilities:
// hitting a ball of radius r around a point at distance xnorm by time t at
// the given rate, versus the rescaled parameter set with time horizon s.
struct ScalingCheck {
    double p_lhs = 0.0;
    double p_rhs = 0.0;
    double tolerance = 0.0;  // 3 sigma combined binomial error
    bool agree = false;
};

ScalingCheck p_scaling_identity_check(double rate, double t, double r, double xnorm,
                                      double s, int dim, std::size_t n_trials,
                                      std::uint64_t seed);

}  // namespace yule

#endif  // YULE_ANALYTIC_HPP
