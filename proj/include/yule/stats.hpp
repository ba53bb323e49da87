#ifndef YULE_STATS_HPP
#define YULE_STATS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace yule {

class StatError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
};

// Two-sided two-sample Kolmogorov-Smirnov test with the asymptotic
// p-value. Both samples must have at least 100 entries. Ties (e.g. integer
// samples) are handled by stepping both empirical cdfs through equal values
// before comparing, which keeps the test conservative.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// One-sample KS distance sup |F_hat - F| against a reference cdf.
double ks_distance_to_cdf(std::vector<double> sample,
                          const std::function<double(double)>& cdf);

// Asymptotic Kolmogorov survival function 2 sum (-1)^{j-1} exp(-2 j^2 t^2),
// series truncated below 1e-12.
double kolmogorov_sf(double t);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 0.0;
};

// Goodness-of-fit chi-square for precomputed bins; dof = bins - 1.
ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& expected);

// Regularised upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson score interval for a binomial proportion at z standard deviations.
Interval wilson_interval(std::size_t successes, std::size_t n, double z);

double mean_of(const std::vector<double>& v);
double variance_of(const std::vector<double>& v);  // unbiased
double median_of(std::vector<double> v);

// One line of a statistical check: what was measured, against what
// threshold, and with which seed/sample size so a failure can be replayed.
struct StatReport {
    std::string name;
    double value = 0.0;
    double p_value = -1.0;  // < 0 when not applicable
    double threshold = 0.0;
    bool passed = false;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::string detail;
};

}  // namespace yule

#endif  // YULE_STATS_HPP
