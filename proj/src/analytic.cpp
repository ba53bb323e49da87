#include "yule/analytic.hpp"

#include <cmath>
#include <limits>

#include "yule/tree.hpp"

namespace yule {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSeriesEps = 1e-16;
constexpr std::size_t kSeriesMaxTerms = 10'000'000;

}  // namespace

double fs_pmf(double y, int k) {
    if (!(y > 0.0 && y < 1.0)) throw std::domain_error("fs_pmf: y must be in (0,1)");
    if (k < 1) throw std::domain_error("fs_pmf: k must be >= 1");
    return y * std::pow(1.0 - y, k - 1);
}

double length_mean(double rate, double horizon) {
    if (rate < 0.0) throw std::domain_error("length_mean: rate must be >= 0");
    if (rate == 0.0) return horizon;
    return std::expm1(rate * horizon) / rate;
}

double length_mgf_domain_max(double rate, double horizon) {
    if (rate < 0.0) throw std::domain_error("length_mgf: rate must be >= 0");
    if (!(horizon > 0.0)) throw std::domain_error("length_mgf: horizon must be > 0");
    if (rate == 0.0) return std::numeric_limits<double>::infinity();

    const double lt = rate * horizon;
    if (lt == 1.0) return rate;

    // x e^{(rate-x)t} rises from 0 to its max at x = 1/t, then decays to 0;
    // the two positive roots of x e^{(rate-x)t} = rate straddle 1/t and one
    // of them is x = rate (removable in the MGF). The other root is the
    // divergence point.
    const auto h = [&](double x) { return x * std::exp((rate - x) * horizon) - rate; };
    double lo, hi;
    if (lt > 1.0) {
        // genuine pole below 1/t
        lo = 0.0;
        hi = 1.0 / horizon;
    } else {
        // genuine pole above 1/t; grow the bracket until h goes negative
        lo = 1.0 / horizon;
        hi = 2.0 / horizon;
        while (h(hi) > 0.0) hi *= 2.0;
    }
    const bool rising = lt > 1.0;  // sign of h at the bracket's low end
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const bool positive = h(mid) > 0.0;
        if (positive == rising)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

double length_mgf(double rate, double horizon, double x) {
    if (rate < 0.0) throw std::domain_error("length_mgf: rate must be >= 0");
    if (!(horizon > 0.0)) throw std::domain_error("length_mgf: horizon must be > 0");
    if (x == 0.0) return 1.0;
    const double x_max = length_mgf_domain_max(rate, horizon);
    if (x >= x_max)
        throw std::domain_error("length_mgf: diverges at and beyond x = " +
                                std::to_string(x_max));
    if (x == rate) {
        // removable point of the formula (only reachable when rate*horizon < 1)
        return 1.0 / (1.0 - rate * horizon);
    }
    return (x - rate) / (x * std::exp((rate - x) * horizon) - rate);
}

double miss_given_no_branch(double t, double d, double r) {
    if (!(d > r && r > 0.0))
        throw std::domain_error("miss_given_no_branch: need d > r > 0");
    if (t < d - r)
        throw OutOfReach("miss_given_no_branch: t < d - r, segment cannot reach");
    const double thresh2 = d * d - r * r;
    if (t * t <= thresh2) {
        double arg = (d * d + t * t - r * r) / (2.0 * t * d);
        arg = std::min(1.0, std::max(-1.0, arg));
        return 1.0 - std::acos(arg) / kPi;
    }
    return 1.0 - std::asin(r / d) / kPi;
}

double fe_alpha0(double d, double r) {
    if (!(d >= r && r > 0.0)) throw std::domain_error("fe_alpha0: need d >= r > 0");
    return std::asin(std::min(1.0, r / d));
}

double fe_s0(double d, double r, double alpha) {
    const double a0 = fe_alpha0(d, r);
    if (std::abs(alpha) > a0 * (1.0 + 1e-12) + 1e-15)
        throw std::domain_error("fe_s0: |alpha| exceeds the contact angle");
    const double sn = d * std::sin(alpha);
    const double under = std::max(0.0, r * r - sn * sn);
    return d * std::cos(alpha) - std::sqrt(under);
}

double fe_travel_distance(double d, double s, double alpha) {
    const double d2 = d * d + s * s - 2.0 * d * s * std::cos(alpha);
    return std::sqrt(std::max(0.0, d2));
}

FeKernels fe_kernels(double d, double r, double s, double alpha) {
    FeKernels k;
    k.alpha0 = fe_alpha0(d, r);
    k.s0 = fe_s0(d, r, alpha);
    k.travel_distance = fe_travel_distance(d, s, alpha);
    return k;
}

namespace {

// sum_{n>=start} q^n / (n + offset), truncated when a term falls below
// kSeriesEps; geometric tail added if the guard trips, so the truncation
// never undershoots the series.
SeriesSum tail_series(double q, int start, int offset) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("series: q must be in [0,1]");
    SeriesSum out;
    if (q == 0.0) return out;
    if (q == 1.0) {
        // harmonic-type series; diverges, which makes the caller's bound vacuous
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    double qn = std::pow(q, start);
    for (std::size_t n = static_cast<std::size_t>(start);; ++n) {
        const double term = qn / (static_cast<double>(n) + offset);
        out.value += term;
        ++out.terms;
        qn *= q;
        if (term < kSeriesEps) break;
        if (out.terms >= kSeriesMaxTerms) {
            out.value += qn / ((static_cast<double>(n) + 1 + offset) * (1.0 - q));
            break;
        }
    }
    return out;
}

}  // namespace

SeriesSum sum_qn_over_np1(double q) { return tail_series(q, 1, 1); }
SeriesSum sum_qn_over_n(double q) { return tail_series(q, 1, 0); }
SeriesSum sum_qn_over_n_from2(double q) { return tail_series(q, 2, 0); }

RadiusProductBound radius_lower_bound_product(double rate, double eps) {
    if (!(rate > 0.0)) throw std::domain_error("radius bound: rate must be > 0");
    if (!(eps > 0.0 && eps < 0.5)) throw std::domain_error("radius bound: eps in (0,1/2)");

    RadiusProductBound b;
    const double half_eps_rate = (0.5 + eps) * rate;

    const SeriesSum c = sum_qn_over_np1(std::exp(-half_eps_rate));
    b.c_lambda_eps = c.value;
    b.series_terms = c.terms;
    b.factor_enough_leaves = 1.0 - std::exp(-eps * rate) * (1.0 + c.value);

    b.factor_good_directions = 1.0 - std::exp(-std::exp(0.5 * rate) / 8.0);

    const SeriesSum s2 = sum_qn_over_n_from2(std::exp(-half_eps_rate));
    b.series_terms += s2.terms;
    double arg;
    if (s2.value > 0.0) {
        arg = std::exp(0.5 * rate + std::log(s2.value) - std::log(4.0));
    } else {
        arg = 0.0;
    }
    b.c_tilde = std::exp(-arg) / (1.0 - std::exp(-half_eps_rate));
    b.factor_long_interval = 1.0 - b.c_tilde * std::exp(-0.25 * std::exp(eps * rate));

    b.value = b.factor_enough_leaves * b.factor_good_directions * b.factor_long_interval;
    b.clamped = std::max(0.0, b.value);
    return b;
}

double radius_lower_bound_conditional(double rate, double eps, double beta, double d,
                                      double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("conditional bound: p in (0,1)");
    if (!(eps > 0.0 && eps < d && d <= 1.0))
        throw std::domain_error("conditional bound: need 0 < eps < d <= 1");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::domain_error("conditional bound: beta in (0,1)");
    if (rate < 0.0) throw std::domain_error("conditional bound: rate must be >= 0");

    const double factor1 =
        1.0 - std::exp(std::exp(0.5 * (1.0 - beta) * eps * rate) * std::log1p(-p));
    const SeriesSum sum = sum_qn_over_np1(std::exp(-0.5 * eps * rate));
    const double factor2 =
        1.0 - std::exp(-0.5 * eps * beta * rate) * (1.0 + sum.value);
    return factor1 * factor2;
}

double fs_tail_bound(double y, double a, double b) {
    if (!(y > 0.0 && y < 1.0)) throw std::domain_error("fs_tail_bound: y in (0,1)");
    if (!(a > 0.0 && a < 1.0)) throw std::domain_error("fs_tail_bound: a in (0,1)");
    if (!(b > 0.0)) throw std::domain_error("fs_tail_bound: b > 0");
    return b * std::pow(y, -a) * sum_qn_over_n(y).value;
}

double fs_cdf_exact(double y, double m) {
    if (!(y > 0.0 && y < 1.0)) throw std::domain_error("fs_cdf_exact: y in (0,1)");
    const double k = std::floor(m);
    if (k < 1.0) return 0.0;
    return -std::expm1(k * std::log1p(-y));
}

double exp_max_bound(double a, double b, double c, double x) {
    if (!(a > c && c > 0.0))
        throw std::domain_error("exp_max_bound: need a > c > 0");
    if (!(b > 0.0 && x > 0.0)) throw std::domain_error("exp_max_bound: need b, x > 0");
    const double s = sum_qn_over_n_from2(std::exp(-c * x)).value;
    double arg = b * std::exp(a * x) * s;
    if (std::isnan(arg)) arg = std::numeric_limits<double>::infinity();
    const double cst = std::exp(-arg) / (1.0 - std::exp(-c * x));
    return cst * std::exp(-b * std::exp((a - c) * x));
}

double exp_max_exact(double a, double b, double c, double x) {
    if (!(a > c && c > 0.0))
        throw std::domain_error("exp_max_exact: need a > c > 0");
    if (!(b > 0.0 && x > 0.0)) throw std::domain_error("exp_max_exact: need b, x > 0");
    const double count = std::floor(b * std::exp(a * x));
    if (count < 1.0) return 1.0;
    return std::exp(count * std::log1p(-std::exp(-c * x)));
}

ScalingCheck p_scaling_identity_check(double rate, double t, double r, double xnorm,
                                      double s, int dim, std::size_t n_trials,
                                      std::uint64_t seed) {
    if (!(s > 0.0)) throw std::domain_error("scaling check: s must be > 0");

    const auto estimate = [&](double lam, double horizon, double dist, double rad,
                              std::uint64_t sd) {
        SimConfig cfg;
        cfg.dim = dim;
        cfg.rate = lam;
        cfg.horizon = horizon;
        cfg.master_seed = sd;
        Vec x = Vec::zero(dim);
        x[0] = dist;
        const TrialBatch batch = run_trials(cfg, n_trials, {{x, rad}});
        return batch.hit_fraction(0);
    };

    ScalingCheck out;
    const double scale = s / t;
    out.p_lhs = estimate(rate, t, xnorm, r, seed);
    out.p_rhs = estimate(rate * t / s, s, xnorm * scale, r * scale, seed + 1);
    const double n = static_cast<double>(n_trials);
    const double v1 = out.p_lhs * (1.0 - out.p_lhs) / n;
    const double v2 = out.p_rhs * (1.0 - out.p_rhs) / n;
    out.tolerance = 3.0 * std::sqrt(v1 + v2);
    out.agree = std::abs(out.p_lhs - out.p_rhs) <= out.tolerance;
    return out;
}

}  // namespace yule
