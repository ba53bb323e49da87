#include "yule/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace yule {

double kolmogorov_sf(double t) {
    if (t <= 0.2) return 1.0;  // tail beyond series resolution at 1e-12
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j < 200; ++j) {
        const double term = std::exp(-2.0 * j * j * t * t);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-12) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.size() < 100 || b.size() < 100)
        throw StatError("ks_two_sample: both samples need >= 100 entries");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t na = a.size(), nb = b.size();
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < na && j < nb) {
        const double v = std::min(a[i], b[j]);
        while (i < na && a[i] <= v) ++i;
        while (j < nb && b[j] <= v) ++j;
        const double fa = static_cast<double>(i) / static_cast<double>(na);
        const double fb = static_cast<double>(j) / static_cast<double>(nb);
        d = std::max(d, std::abs(fa - fb));
    }
    KsResult res;
    res.statistic = d;
    res.n_a = na;
    res.n_b = nb;
    const double ne = static_cast<double>(na) * static_cast<double>(nb) /
                      static_cast<double>(na + nb);
    res.p_value = kolmogorov_sf(std::sqrt(ne) * d);
    return res;
}

double ks_distance_to_cdf(std::vector<double> sample,
                          const std::function<double(double)>& cdf) {
    if (sample.empty()) throw StatError("ks_distance_to_cdf: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    return d;
}

namespace {

// Regularised lower incomplete gamma by series (x < a + 1).
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularised upper incomplete gamma by continued fraction (x >= a + 1).
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw StatError("gamma_q: need a > 0 and x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return std::clamp(1.0 - gamma_p_series(a, x), 0.0, 1.0);
    return std::clamp(gamma_q_cf(a, x), 0.0, 1.0);
}

ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& expected) {
    if (observed.size() != expected.size() || observed.size() < 2)
        throw StatError("chi_square_gof: need matching bins, at least 2");
    ChiSquareResult res;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(expected[i] > 0.0))
            throw StatError("chi_square_gof: expected counts must be positive");
        const double diff = observed[i] - expected[i];
        res.statistic += diff * diff / expected[i];
    }
    res.dof = static_cast<int>(observed.size()) - 1;
    res.p_value = gamma_q(0.5 * res.dof, 0.5 * res.statistic);
    return res;
}

Interval wilson_interval(std::size_t successes, std::size_t n, double z) {
    if (n == 0) throw StatError("wilson_interval: n must be > 0");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) throw StatError("mean_of: empty sample");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
    if (v.size() < 2) throw StatError("variance_of: need >= 2 entries");
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

double median_of(std::vector<double> v) {
    if (v.empty()) throw StatError("median_of: empty sample");
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
    return 0.5 * (hi + v[mid - 1]);
}

}  // namespace yule
