#include "yule/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "yule/branch.hpp"
#include "yule/csv.hpp"
#include "yule/fe.hpp"
#include "yule/parallel.hpp"
#include "yule/tree.hpp"

namespace yule {

namespace {

constexpr double kPThreshold = 0.001;  // fixed a priori for every test

std::vector<double> collect_radius(const TrialBatch& b) {
    std::vector<double> v;
    v.reserve(b.trials.size());
    for (const auto& t : b.trials)
        if (t.ok) v.push_back(t.radius);
    return v;
}

std::vector<double> collect_length(const TrialBatch& b) {
    std::vector<double> v;
    v.reserve(b.trials.size());
    for (const auto& t : b.trials)
        if (t.ok) v.push_back(t.total_length);
    return v;
}

std::vector<double> collect_leaves(const TrialBatch& b) {
    std::vector<double> v;
    v.reserve(b.trials.size());
    for (const auto& t : b.trials)
        if (t.ok) v.push_back(static_cast<double>(t.leaf_count));
    return v;
}

void scale_all(std::vector<double>& v, double factor) {
    for (double& x : v) x *= factor;
}

std::string fmt6(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

void maybe_write(const std::string& dir, const std::string& file,
                 const std::function<void(std::ostream&)>& writer) {
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    std::ofstream os(dir + "/" + file, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + dir + "/" + file);
    writer(os);
}

// Chi-square bins for the leaf-count pmf: k counted individually while the
// expected count stays >= 5, remaining tail pooled.
struct GeomBins {
    std::vector<double> expected;
    int k_cut = 0;  // tail bin collects k >= k_cut
};

GeomBins make_geom_bins(double y, std::size_t n, double min_expected = 5.0) {
    GeomBins bins;
    int k = 1;
    const double nn = static_cast<double>(n);
    for (;;) {
        const double pk = fs_pmf(y, k);
        if (nn * pk < min_expected || k > 1000) break;
        bins.expected.push_back(nn * pk);
        ++k;
    }
    bins.k_cut = k;
    const double tail = nn * std::pow(1.0 - y, k - 1);  // n * P(N >= k)
    if (tail < min_expected && !bins.expected.empty()) {
        bins.expected.back() += tail;
        bins.k_cut = k - 1;
        // the last individual bin now also collects the tail
    } else {
        bins.expected.push_back(tail);
    }
    return bins;
}

std::vector<double> observed_geom_counts(const std::vector<double>& leaves,
                                         const GeomBins& bins) {
    std::vector<double> obs(bins.expected.size(), 0.0);
    const int last = static_cast<int>(bins.expected.size()) - 1;
    for (double lv : leaves) {
        const int bin = std::min(static_cast<int>(lv) - 1, last);
        obs[static_cast<std::size_t>(bin)] += 1.0;
    }
    return obs;
}

StatReport ks_report(const std::string& name, std::vector<double> a,
                     std::vector<double> b, std::uint64_t seed) {
    const KsResult ks = ks_two_sample(std::move(a), std::move(b));
    StatReport rep;
    rep.name = name;
    rep.value = ks.statistic;
    rep.p_value = ks.p_value;
    rep.threshold = kPThreshold;
    rep.passed = ks.p_value > kPThreshold;
    rep.seed = seed;
    rep.n = ks.n_a;
    rep.detail = "two-sample KS, D=" + fmt6(ks.statistic);
    return rep;
}

SimConfig base_config(double rate, double horizon, std::uint64_t seed, int dim = 2) {
    SimConfig cfg;
    cfg.dim = dim;
    cfg.rate = rate;
    cfg.horizon = horizon;
    cfg.master_seed = seed;
    return cfg;
}

// ---------------------------------------------------------------- leafdist

std::vector<StatReport> experiment_leafdist(const ExperimentConfig& cfg) {
    const double rate = cfg.get("rate", 1.0);
    const double horizon = cfg.get("horizon", 1.0);
    const std::size_t n = cfg.n_trials ? cfg.n_trials : 100000;
    const TrialBatch batch =
        run_trials(base_config(rate, horizon, cfg.master_seed), n);
    maybe_write(cfg.output_path, "leafdist_trials.csv",
                [&](std::ostream& os) { write_trials_csv(os, batch, 0); });

    const std::vector<double> leaves = collect_leaves(batch);
    const double y = std::exp(-rate * horizon);
    const GeomBins bins = make_geom_bins(y, leaves.size());
    const std::vector<double> obs = observed_geom_counts(leaves, bins);
    const ChiSquareResult chi = chi_square_gof(obs, bins.expected);

    StatReport chi_rep;
    chi_rep.name = "leafdist_chi2";
    chi_rep.value = chi.statistic;
    chi_rep.p_value = chi.p_value;
    chi_rep.threshold = kPThreshold;
    chi_rep.passed = chi.p_value > kPThreshold;
    chi_rep.seed = cfg.master_seed;
    chi_rep.n = leaves.size();
    chi_rep.detail = "dof=" + std::to_string(chi.dof) +
                     " bins=" + std::to_string(bins.expected.size());

    const double expected_mean = std::exp(rate * horizon);
    const double m = mean_of(leaves);
    StatReport mean_rep;
    mean_rep.name = "leafdist_mean";
    mean_rep.value = m;
    mean_rep.threshold = 0.01;
    mean_rep.passed = std::abs(m - expected_mean) <= 0.01 * expected_mean;
    mean_rep.seed = cfg.master_seed;
    mean_rep.n = leaves.size();
    mean_rep.detail = "expected " + fmt6(expected_mean) + ", off by " +
                      fmt6(std::abs(m - expected_mean) / expected_mean * 100.0) + "%";
    return {chi_rep, mean_rep};
}

// ------------------------------------------------------------------ length

std::vector<StatReport> experiment_length(const ExperimentConfig& cfg) {
    const double rate = cfg.get("rate", 1.0);
    const double horizon = cfg.get("horizon", 1.0);
    const std::size_t n = cfg.n_trials ? cfg.n_trials : 100000;
    const TrialBatch batch =
        run_trials(base_config(rate, horizon, cfg.master_seed), n);
    maybe_write(cfg.output_path, "length_trials.csv",
                [&](std::ostream& os) { write_trials_csv(os, batch, 0); });

    const std::vector<double> lengths = collect_length(batch);
    const double expected = length_mean(rate, horizon);
    const double m = mean_of(lengths);
    StatReport rep;
    rep.name = "length_mean";
    rep.value = m;
    rep.threshold = 0.01;
    rep.passed = std::abs(m - expected) <= 0.01 * expected;
    rep.seed = cfg.master_seed;
    rep.n = lengths.size();
    rep.detail = "expected " + fmt6(expected) + ", off by " +
                 fmt6(std::abs(m - expected) / expected * 100.0) + "%";
    return {rep};
}

// ----------------------------------------------------------------- scaling

std::vector<StatReport> experiment_scaling(const ExperimentConfig& cfg) {
    const double rate = cfg.get("rate", 1.0);
    const double horizon = cfg.get("horizon", 5.0);
    const double s = cfg.get("s", 5.0);
    const std::size_t n = cfg.n_trials ? cfg.n_trials : 10000;

    const TrialBatch big =
        run_trials(base_config(rate, horizon, cfg.master_seed), n);
    const TrialBatch small =
        run_trials(base_config(rate * s, horizon / s, cfg.master_seed + 1), n);
    maybe_write(cfg.output_path, "scaling_lhs.csv",
                [&](std::ostream& os) { write_trials_csv(os, big, 0); });
    maybe_write(cfg.output_path, "scaling_rhs.csv",
                [&](std::ostream& os) { write_trials_csv(os, small, 0); });

    std::vector<double> r1 = collect_radius(big);
    scale_all(r1, 1.0 / s);
    std::vector<double> l1 = collect_length(big);
    scale_all(l1, 1.0 / s);

    return {
        ks_report("scaling_ks_radius", r1, collect_radius(small), cfg.master_seed),
        ks_report("scaling_ks_length", l1, collect_length(small), cfg.master_seed),
        ks_report("scaling_ks_leaves", collect_leaves(big), collect_leaves(small),
                  cfg.master_seed),
    };
}

// -------------------------------------------------------------------- walk

std::vector<StatReport> experiment_walk(const ExperimentConfig& cfg) {
    const double rate = cfg.get("rate", 1.0);
    const int dim = static_cast<int>(cfg.get("dim", 2.0));
    const int k = static_cast<int>(cfg.get("k", 9.0));
    const std::size_t n = cfg.n_trials ? cfg.n_trials : 100000;

    Rng rng(cfg.master_seed);
    const WalkMoments m = walk_moments(rate, dim, k, n, rng);
    const double var_exact = 2.0 * (k + 1) / (dim * rate * rate);
    const double var_dimfree = 2.0 * (k + 1) / (rate * rate);

    std::vector<StatReport> reps;
    {
        StatReport r;
        r.name = "walk_mean_zero";
        double worst = 0.0;
        for (int c = 0; c < dim; ++c)
            worst = std::max(worst, std::abs(m.mean[c]) / m.mean_se[c]);
        r.value = worst;
        r.threshold = 4.0;
        r.passed = worst <= 4.0;
        r.seed = cfg.master_seed;
        r.n = n;
        r.detail = "max |mean|/se over coordinates";
        reps.push_back(r);
    }
    {
        StatReport r;
        r.name = "walk_var_dimfree_bound";
        r.value = *std::max_element(m.variance.begin(), m.variance.end());
        r.threshold = var_dimfree;
        r.passed = r.value <= var_dimfree;
        r.seed = cfg.master_seed;
        r.n = n;
        r.detail = "bound 2(k+1)/rate^2 = " + fmt6(var_dimfree);
        reps.push_back(r);
    }
    {
        StatReport r;
        r.name = "walk_var_exact";
        double worst = 0.0;
        for (int c = 0; c < dim; ++c)
            worst = std::max(worst, std::abs(m.variance[c] - var_exact) / var_exact);
        r.value = worst;
        r.threshold = 0.05;
        r.passed = worst <= 0.05;
        r.seed = cfg.master_seed;
        r.n = n;
        r.detail = "relative deviation from 2(k+1)/(dim rate^2) = " + fmt6(var_exact);
        reps.push_back(r);
    }
    if (!m.cross_correlation.empty()) {
        StatReport r;
        r.name = "walk_cross_corr";
        double worst = 0.0;
        for (std::size_t i = 0; i < m.cross_correlation.size(); ++i)
            worst = std::max(worst, std::abs(m.cross_correlation[i]) /
                                        m.cross_correlation_se[i]);
        r.value = worst;
        r.threshold = 4.0;
        r.passed = worst <= 4.0;
        r.seed = cfg.master_seed;
        r.n = n;
        r.detail = "max |corr|/se over coordinate pairs";
        reps.push_back(r);
    }
    {
        StatReport r;
        r.name = "walk_increment_past_cov";
        double worst = 0.0;
        for (int c = 0; c < dim; ++c)
            worst = std::max(worst, std::abs(m.increment_past_cov[c]) /
                                        m.increment_past_cov_se[c]);
        r.value = worst;
        r.threshold = 4.0;
        r.passed = worst <= 4.0;
        r.seed = cfg.master_seed;
        r.n = n;
        r.detail = "cov of increment k+1 with X_k, per coordinate";
        reps.push_back(r);
    }
    maybe_write(cfg.output_path, "walk_moments.csv", [&](std::ostream& os) {
        os << "coord,mean,mean_se,variance,variance_se,inc_cov,inc_cov_se\n";
        for (int c = 0; c < dim; ++c)
            os << c << "," << fmt(m.mean[c]) << "," << fmt(m.mean_se[c]) << ","
               << fmt(m.variance[c]) << "," << fmt(m.variance_se[c]) << ","
               << fmt(m.increment_past_cov[c]) << "," << fmt(m.increment_past_cov_se[c])
               << "\n";
    });
    return reps;
}

// --------------------------------------------------------- branch-collapse

std::vector<StatReport> experiment_branch_collapse(const ExperimentConfig& cfg) {
    const std::vector<double> rates = cfg.get_list("rates", {1.0, 4.0, 16.0, 64.0});
    const int dim = static_cast<int>(cfg.get("dim", 2.0));
    const double horizon = cfg.get("horizon", 1.0);
    const std::size_t n = cfg.n_trials ? cfg.n_trials : 10000;

    std::vector<double> medians;
    for (std::size_t li = 0; li < rates.size(); ++li) {
        Rng rng(child_seed(cfg.master_seed, li));
        std::vector<double> disp(n);
        for (std::size_t i = 0; i < n; ++i)
            disp[i] = max_displacement(grow_branch(dim, rates[li], horizon, rng));
        medians.push_back(median_of(std::move(disp)));
    }

    bool decreasing = true;
    double worst_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < medians.size(); ++i) {
        worst_gap = std::min(worst_gap, medians[i - 1] - medians[i]);
        if (!(medians[i] < medians[i - 1])) decreasing = false;
    }

    StatReport rep;
    rep.name = "branch_collapse_medians";
    rep.value = worst_gap;
    rep.threshold = 0.0;
    rep.passed = decreasing;
    rep.seed = cfg.master_seed;
    rep.n = n;
    std::string meds;
    for (std::size_t i = 0; i < medians.size(); ++i)
        meds += (i ? ", " : "") + fmt6(rates[i]) + "->" + fmt6(medians[i]);
    rep.detail = "medians by rate: " + meds;
    maybe_write(cfg.output_path, "branch_collapse.csv", [&](std::ostream& os) {
        os << "rate,median_max_displacement\n";
        for (std::size_t i = 0; i < medians.size(); ++i)
            os << fmt(rates[i]) << "," << fmt(medians[i]) << "\n";
    });
    return {rep};
}

// ------------------------------------------------------------- radius-tail

std::vector<StatReport> experiment_radius_tail(const ExperimentConfig& cfg) {
    const std::vector<double> rates = cfg.get_list("rates", {6.0, 8.0, 10.0});
    const double eps = cfg.get("eps", 0.1);
    const std::size_t n = cfg.n_trials ? cfg.n_trials : 10000;
    const double threshold_radius = 0.5 - eps;

    std::vector<StatReport> reps;
    std::ostringstream csv;
    csv << "rate,eps,bound,frequency,sigma\n";
    for (std::size_t li = 0; li < rates.size(); ++li) {
        const double rate = rates[li];
        const SimConfig sc = base_config(rate, 1.0, child_seed(cfg.master_seed, li));
        const TrialBatch batch = run_trials(sc, n);
        std::size_t hits = 0, total = 0;
        for (const auto& t : batch.trials) {
            if (!t.ok) continue;
            ++total;
            if (t.radius >= threshold_radius) ++hits;
        }
        const double freq = total ? static_cast<double>(hits) / total : 0.0;
        const double sigma = total ? std::sqrt(freq * (1.0 - freq) / total) : 0.0;
        const RadiusProductBound bound = radius_lower_bound_product(rate, eps);

        StatReport rep;
        rep.name = "radius_tail_rate_" + fmt6(rate);
        rep.value = freq;
        rep.threshold = bound.clamped - 3.0 * sigma;
        rep.passed = freq >= bound.clamped - 3.0 * sigma;
        rep.seed = sc.master_seed;
        rep.n = total;
        rep.detail = "P(R >= " + fmt6(threshold_radius) + "): MC " + fmt6(freq) +
                     " vs product bound " + fmt6(bound.clamped) +
                     " (explicit all-rate product only; the asymptotic thresholds"
                     " are not reproduced)";
        reps.push_back(rep);
        csv << fmt(rate) << "," << fmt(eps) << "," << fmt(bound.clamped) << ","
            << fmt(freq) << "," << fmt(sigma) << "\n";
    }
    maybe_write(cfg.output_path, "radius_tail.csv",
                [&](std::ostream& os) { os << csv.str(); });
    return reps;
}

// ------------------------------------------------------------------ bounds

void append_appendix_reports(std::vector<BoundReport>& out) {
    for (double y : {0.5, 0.1, 0.01}) {
        for (double a : {0.3, 0.7}) {
            for (double b : {0.5, 1.0, 2.0}) {
                BoundReport rep;
                rep.name = "fs_tail";
                rep.params = {{"y", y}, {"a", a}, {"b", b}};
                rep.bound_value = fs_tail_bound(y, a, b);
                rep.empirical = fs_cdf_exact(y, b * std::pow(y, -a));
                rep.satisfied = *rep.empirical <= rep.bound_value;
                rep.detail = "exact cdf vs series bound";
                out.push_back(rep);
            }
        }
    }
    for (double a : {1.0, 2.0}) {
        for (double c : {0.3, 0.8}) {
            for (double b : {0.5, 2.0}) {
                for (double x : {1.0, 2.0, 4.0}) {
                    BoundReport rep;
                    rep.name = "exp_max";
                    rep.params = {{"a", a}, {"b", b}, {"c", c}, {"x", x}};
                    rep.bound_value = exp_max_bound(a, b, c, x);
                    rep.empirical = exp_max_exact(a, b, c, x);
                    rep.satisfied = *rep.empirical <= rep.bound_value;
                    rep.detail = "exact cdf power vs bound";
                    out.push_back(rep);
                }
            }
        }
    }
}

std::vector<StatReport> experiment_bounds(const ExperimentConfig& cfg) {
    std::vector<BoundReport> bound_reports;
    append_appendix_reports(bound_reports);

    double worst_fs = -std::numeric_limits<double>::infinity();
    double worst_exp = -std::numeric_limits<double>::infinity();
    std::size_t violations = 0;
    for (const BoundReport& r : bound_reports) {
        const double margin = *r.empirical - r.bound_value;  // <= 0 when dominated
        if (r.name == "fs_tail") worst_fs = std::max(worst_fs, margin);
        if (r.name == "exp_max") worst_exp = std::max(worst_exp, margin);
        if (!*r.satisfied) ++violations;
    }

    std::vector<StatReport> reps;
    {
        StatReport r;
        r.name = "fs_tail_domination";
        r.value = worst_fs;
        r.threshold = 0.0;
        r.passed = worst_fs <= 0.0;
        r.n = 18;
        r.detail = "max(exact - bound) over the scan";
        reps.push_back(r);
    }
    {
        StatReport r;
        r.name = "exp_max_domination";
        r.value = worst_exp;
        r.threshold = 0.0;
        r.passed = worst_exp <= 0.0;
        r.n = 24;
        r.detail = "max(exact - bound) over the scan";
        reps.push_back(r);
    }
    {
        const double y = cfg.get("y", 1e-3);
        const std::size_t n = cfg.n_trials ? cfg.n_trials : 100000;
        Rng rng(cfg.master_seed);
        std::vector<double> sample(n);
        const double log1my = std::log1p(-y);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = rng.uniform_open();
            const double geom = 1.0 + std::floor(std::log(u) / log1my);
            sample[i] = y * geom;
        }
        const double d = ks_distance_to_cdf(
            std::move(sample), [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); });
        StatReport r;
        r.name = "fs_weak_limit_ks";
        r.value = d;
        r.threshold = 0.01;
        r.passed = d < 0.01;
        r.seed = cfg.master_seed;
        r.n = n;
        r.detail = "KS distance of y*N_y to Exp(1) at y=" + fmt6(y);
        reps.push_back(r);
    }
    if (violations > 0) reps[0].detail += " (" + std::to_string(violations) + " violations)";
    maybe_write(cfg.output_path, "bounds.csv", [&](std::ostream& os) {
        write_bound_reports_csv(bound_reports, os);
    });
    return reps;
}

// ---------------------------------------------------------------- fe-vs-mc

std::vector<StatReport> experiment_fe_vs_mc(const ExperimentConfig& cfg) {
    FeParams params;
    params.rate = cfg.get("rate", 1.0);
    params.r = cfg.get("r", 0.3);
    params.t_max = cfg.get("tmax", 2.0);
    params.d_max = cfg.get("dmax", 2.4);
    params.dt = cfg.get("dt", 0.01);
    params.dd = cfg.get("dd", 0.01);
    params.n_alpha = static_cast<int>(cfg.get("nalpha", 96.0));
    params.n_s = static_cast<int>(cfg.get("ns", 96.0));
    const std::size_t n = cfg.n_trials ? cfg.n_trials : 100000;

    const FeGrid fine = solve_fe(params);
    maybe_write(cfg.output_path, "fe_grid.csv",
                [&](std::ostream& os) { write_fe_csv(os, fine, params); });

    const std::vector<std::pair<double, double>> probes = {
        {1.0, 0.5}, {1.0, 0.9}, {2.0, 1.0}, {2.0, 1.5}, {0.5, 0.6}};

    std::vector<StatReport> reps;
    std::ostringstream csv;
    csv << "t,d,q_solver,q_mc,abs_diff\n";
    for (std::size_t p = 0; p < probes.size(); ++p) {
        const auto [t, d] = probes[p];
        const double q_solver = fe_value(fine, t, d);
        SimConfig sc = base_config(params.rate, t, child_seed(cfg.master_seed, p));
        Vec x = Vec::zero(2);
        x[0] = d;
        const TrialBatch batch = run_trials(sc, n, {{x, params.r}});
        const double q_mc = 1.0 - batch.hit_fraction(0);
        const double diff = std::abs(q_solver - q_mc);

        StatReport rep;
        rep.name = "fe_mc_t" + fmt6(t) + "_d" + fmt6(d);
        rep.value = diff;
        rep.threshold = 0.02;
        rep.passed = diff <= 0.02;
        rep.seed = sc.master_seed;
        rep.n = batch.n_ok();
        rep.detail = "q_solver=" + fmt6(q_solver) + " q_mc=" + fmt6(q_mc);
        reps.push_back(rep);
        csv << fmt(t) << "," << fmt(d) << "," << fmt(q_solver) << "," << fmt(q_mc)
            << "," << fmt(diff) << "\n";
    }
    maybe_write(cfg.output_path, "fe_vs_mc.csv",
                [&](std::ostream& os) { os << csv.str(); });

    {  // degenerate rate: the solver must reproduce the no-branching formula
        FeParams p0 = params;
        p0.rate = 0.0;
        p0.dt = p0.dd = 0.02;
        const FeGrid g0 = solve_fe(p0);
        double worst = 0.0;
        for (std::size_t i = 0; i < g0.nt; ++i) {
            for (std::size_t j = 0; j < g0.nd; ++j) {
                if (g0.inside_ball(j) || g0.pre_reach(i, j)) continue;
                const double t_eff = std::max(g0.t_of(i), g0.d_of(j) - g0.r);
                const double f = miss_given_no_branch(t_eff, g0.d_of(j), g0.r);
                worst = std::max(worst, std::abs(g0.at(i, j) - f));
            }
        }
        StatReport rep;
        rep.name = "fe_rate0_degenerate";
        rep.value = worst;
        rep.threshold = 1e-10;
        rep.passed = worst <= 1e-10;
        rep.n = g0.nt * g0.nd;
        rep.detail = "max |q - f_r| over interior nodes at rate 0";
        reps.push_back(rep);
    }

    {  // halving dt, dd must shrink the discrepancy by at least 2x. The sup
       // is taken over nodes away from the exact solution's discontinuity
       // set (the jump column d = r and the reach sheet t = d - r, where q
       // is not Lipschitz and no grid metric can contract); the margin is
       // fixed across resolutions.
        const double margin = cfg.get("refine_margin", 0.05);
        FeParams coarse = params;
        coarse.dt = coarse.dd = 4.0 * params.dt;
        FeParams mid = params;
        mid.dt = mid.dd = 2.0 * params.dt;
        const FeGrid g_coarse = solve_fe(coarse);
        const FeGrid g_mid = solve_fe(mid);
        const auto regular_sup = [margin](const FeGrid& a, const FeGrid& b) {
            double worst = 0.0;
            for (std::size_t i = 0; i < a.nt; ++i) {
                for (std::size_t j = 0; j < a.nd; ++j) {
                    const double t = a.t_of(i), d = a.d_of(j);
                    if (std::abs(d - a.r) < margin) continue;
                    if (std::abs(t - (d - a.r)) < margin) continue;
                    worst = std::max(worst, std::abs(a.at(i, j) - b.at(2 * i, 2 * j)));
                }
            }
            return worst;
        };
        const double disc1 = regular_sup(g_coarse, g_mid);
        const double disc2 = regular_sup(g_mid, fine);
        StatReport rep;
        rep.name = "fe_refinement";
        rep.value = disc2 > 0.0 ? disc1 / disc2 : std::numeric_limits<double>::infinity();
        rep.threshold = 2.0;
        rep.passed = rep.value >= 2.0;
        rep.detail = "disc(" + fmt6(coarse.dt) + "->" + fmt6(mid.dt) + ")=" + fmt6(disc1) +
                     " disc(" + fmt6(mid.dt) + "->" + fmt6(params.dt) + ")=" + fmt6(disc2) +
                     " outside margin " + fmt6(margin) + " of the discontinuities";
        reps.push_back(rep);
    }
    return reps;
}

// --------------------------------------------------------------- hausdorff

std::vector<StatReport> experiment_hausdorff(const ExperimentConfig& cfg) {
    const double d = cfg.get("d", 0.45);
    const double t = cfg.get("t", 1.0);
    const double grid_step = cfg.get("grid_step", 0.02);
    const double rate_lo = cfg.get("rate_lo", 4.0);
    const double rate_hi = cfg.get("rate_hi", 12.0);
    const std::size_t n = cfg.n_trials ? cfg.n_trials : 200;

    const auto median_dist = [&](double rate, std::uint64_t seed, std::ostringstream* csv) {
        std::vector<double> dists(n, std::numeric_limits<double>::quiet_NaN());
        const long nn = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
        for (long i = 0; i < nn; ++i) {
            SimConfig sc = base_config(rate, t, 0);
            Rng rng(child_seed(seed, static_cast<std::uint64_t>(i)));
            try {
                const Tree tree = grow(sc, rng);
                dists[i] =
                    hausdorff_to_ball(tree.segments, Vec::zero(2), d, grid_step).value;
            } catch (const BudgetExceeded&) {
                // excluded below
            }
        }
        std::vector<double> ok;
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isnan(dists[i])) ok.push_back(dists[i]);
            if (csv) *csv << fmt(rate) << "," << i << "," << fmt(dists[i]) << "\n";
        }
        return median_of(std::move(ok));
    };

    std::ostringstream csv;
    csv << "rate,trial,hausdorff\n";
    const double med_lo = median_dist(rate_lo, child_seed(cfg.master_seed, 0), &csv);
    const double med_hi = median_dist(rate_hi, child_seed(cfg.master_seed, 1), &csv);
    maybe_write(cfg.output_path, "hausdorff.csv",
                [&](std::ostream& os) { os << csv.str(); });

    StatReport rep;
    rep.name = "hausdorff_median_decreasing";
    rep.value = med_hi - med_lo;
    rep.threshold = 0.0;
    rep.passed = med_hi < med_lo;
    rep.seed = cfg.master_seed;
    rep.n = n;
    rep.detail = "median at rate " + fmt6(rate_hi) + " = " + fmt6(med_hi) +
                 ", at rate " + fmt6(rate_lo) + " = " + fmt6(med_lo);
    return {rep};
}

// ----------------------------------------------------------------- connect

std::vector<StatReport> experiment_connect(const ExperimentConfig& cfg) {
    const double rate = cfg.get("rate", 12.0);
    const double t = cfg.get("t", 1.0);
    const double d = cfg.get("d", 0.45);
    const double delta = cfg.get("delta", 0.2);
    const double a = cfg.get("a", 0.5);
    const double alpha_margin = cfg.get("alpha", 1.0);
    const std::size_t n = cfg.n_trials ? cfg.n_trials : 200;

    const HoleReport main =
        hole_probability(rate, t, d, delta, a, alpha_margin, n, child_seed(cfg.master_seed, 0));
    const HoleReport control =
        hole_probability(0.0, t, d, delta, a, alpha_margin, n, child_seed(cfg.master_seed, 1));

    std::vector<StatReport> reps;
    {
        StatReport rep;
        rep.name = "hole_freq_le_bound";
        rep.value = main.frequency;
        rep.threshold = main.bound;
        rep.passed = main.frequency <= main.bound;
        rep.seed = cfg.master_seed;
        rep.n = n;
        rep.detail = "rate " + fmt6(rate) + ": frequency " + fmt6(main.frequency) +
                     " vs bound " + fmt6(main.bound) + " (lattice " +
                     std::to_string(main.lattice_points) + " points)";
        reps.push_back(rep);
    }
    {
        StatReport rep;
        rep.name = "hole_rate0_control";
        rep.value = control.frequency;
        rep.threshold = 0.9;
        rep.passed = control.frequency >= 0.9;
        rep.seed = cfg.master_seed;
        rep.n = n;
        rep.detail = "a single segment leaves holes: frequency " +
                     fmt6(control.frequency);
        reps.push_back(rep);
    }
    maybe_write(cfg.output_path, "connect.csv", [&](std::ostream& os) {
        os << "rate,frequency,bound,lattice_points,n_trials,n_failed\n";
        os << fmt(rate) << "," << fmt(main.frequency) << "," << fmt(main.bound) << ","
           << main.lattice_points << "," << main.n_trials << "," << main.n_failed << "\n";
        os << fmt(0.0) << "," << fmt(control.frequency) << "," << fmt(control.bound)
           << "," << control.lattice_points << "," << control.n_trials << ","
           << control.n_failed << "\n";
    });
    return reps;
}

}  // namespace

// ------------------------------------------------------------- public API

ExperimentKind parse_kind(const std::string& name) {
    if (name == "leafdist") return ExperimentKind::LeafDist;
    if (name == "length") return ExperimentKind::Length;
    if (name == "scaling") return ExperimentKind::Scaling;
    if (name == "walk") return ExperimentKind::Walk;
    if (name == "branch-collapse") return ExperimentKind::BranchCollapse;
    if (name == "radius-tail") return ExperimentKind::RadiusTail;
    if (name == "bounds") return ExperimentKind::Bounds;
    if (name == "fe-vs-mc") return ExperimentKind::FeVsMc;
    if (name == "hausdorff") return ExperimentKind::Hausdorff;
    if (name == "connect") return ExperimentKind::Connect;
    throw std::invalid_argument("unknown experiment kind: " + name);
}

std::string kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::LeafDist: return "leafdist";
        case ExperimentKind::Length: return "length";
        case ExperimentKind::Scaling: return "scaling";
        case ExperimentKind::Walk: return "walk";
        case ExperimentKind::BranchCollapse: return "branch-collapse";
        case ExperimentKind::RadiusTail: return "radius-tail";
        case ExperimentKind::Bounds: return "bounds";
        case ExperimentKind::FeVsMc: return "fe-vs-mc";
        case ExperimentKind::Hausdorff: return "hausdorff";
        case ExperimentKind::Connect: return "connect";
    }
    throw std::logic_error("unreachable");
}

double ExperimentConfig::get(const std::string& key, double dflt) const {
    const auto it = params.find(key);
    if (it == params.end()) return dflt;
    return std::stod(it->second);
}

std::vector<double> ExperimentConfig::get_list(const std::string& key,
                                               const std::vector<double>& dflt) const {
    const auto it = params.find(key);
    if (it == params.end()) return dflt;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read config " + path);
    ExperimentConfig cfg;
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        if (key == "kind")
            cfg.kind = parse_kind(val);
        else if (key == "trials")
            cfg.n_trials = static_cast<std::size_t>(std::stoull(val));
        else if (key == "seed")
            cfg.master_seed = std::stoull(val);
        else if (key == "out")
            cfg.output_path = val;
        else
            cfg.params[key] = val;
    }
    return cfg;
}

std::vector<StatReport> run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentKind::LeafDist: return experiment_leafdist(cfg);
        case ExperimentKind::Length: return experiment_length(cfg);
        case ExperimentKind::Scaling: return experiment_scaling(cfg);
        case ExperimentKind::Walk: return experiment_walk(cfg);
        case ExperimentKind::BranchCollapse: return experiment_branch_collapse(cfg);
        case ExperimentKind::RadiusTail: return experiment_radius_tail(cfg);
        case ExperimentKind::Bounds: return experiment_bounds(cfg);
        case ExperimentKind::FeVsMc: return experiment_fe_vs_mc(cfg);
        case ExperimentKind::Hausdorff: return experiment_hausdorff(cfg);
        case ExperimentKind::Connect: return experiment_connect(cfg);
    }
    throw std::logic_error("unreachable");
}

HoleReport hole_probability(double rate, double t, double d, double delta, double a,
                            double alpha_margin, std::size_t n_trials,
                            std::uint64_t seed) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("hole_probability: delta in (0,1)");
    if (!(d > 0.0 && d <= 1.0))
        throw std::invalid_argument("hole_probability: d in (0,1]");

    const int dim = 2;
    const double spacing = delta * t / 2.0;
    const std::vector<Vec> lattice =
        lattice_points_in_ball(dim, Vec::zero(dim), t * d, spacing, spacing / 2.0);

    HoleReport rep;
    rep.lattice_points = lattice.size();
    rep.n_trials = n_trials;
    rep.a_const = a;
    rep.c_const = 8.0 * d * d * (1.0 + alpha_margin);
    rep.bound = rep.c_const * std::pow(delta, -2.0 * dim) *
                std::exp(-(1.0 - a) / 16.0 * rate * delta * t);
    if (lattice.empty()) return rep;  // frequency 0 on an empty probe set

    std::vector<int> hole(n_trials, -1);
    const double threshold = delta * t;
    const long nn = static_cast<long>(n_trials);
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
    for (long i = 0; i < nn; ++i) {
        SimConfig sc;
        sc.dim = dim;
        sc.rate = rate;
        sc.horizon = t;
        Rng rng(child_seed(seed, static_cast<std::uint64_t>(i)));
        try {
            const Tree tree = grow(sc, rng);
            const SegmentDistanceScan scan(tree.segments, dim);
            int found = 0;
            for (const Vec& x : lattice) {
                if (!scan.any_within(x, threshold)) {
                    found = 1;
                    break;
                }
            }
            hole[i] = found;
        } catch (const BudgetExceeded&) {
            hole[i] = -1;
        }
    }
    std::size_t holes = 0, ok = 0;
    for (int h : hole) {
        if (h < 0) continue;
        ++ok;
        holes += static_cast<std::size_t>(h);
    }
    rep.n_failed = n_trials - ok;
    rep.frequency = ok ? static_cast<double>(holes) / static_cast<double>(ok) : 0.0;
    return rep;
}

std::vector<BoundReport> appendix_bound_reports() {
    std::vector<BoundReport> out;
    append_appendix_reports(out);
    for (double rate : {6.0, 8.0, 10.0, 100.0}) {
        BoundReport rep;
        rep.name = "radius_product";
        rep.params = {{"rate", rate}, {"eps", 0.1}};
        const RadiusProductBound b = radius_lower_bound_product(rate, 0.1);
        rep.bound_value = b.clamped;
        rep.series_terms = b.series_terms;
        rep.detail = "lower bound on P(R(1) >= 0.4), unclamped " + fmt6(b.value);
        out.push_back(rep);
    }
    {
        BoundReport rep;
        rep.name = "radius_conditional";
        rep.params = {{"rate", 200.0}, {"eps", 0.05}, {"beta", 0.5}, {"d", 0.45}, {"p", 0.5}};
        rep.bound_value = radius_lower_bound_conditional(200.0, 0.05, 0.5, 0.45, 0.5);
        rep.detail = "two-factor bound on P(R(1) >= 0.4) given P(R(1) >= 0.45) >= 0.5";
        out.push_back(rep);
    }
    return out;
}

void print_bound_reports(const std::vector<BoundReport>& reports, std::ostream& os) {
    os << std::left << std::setw(20) << "name" << std::setw(44) << "params"
       << std::setw(14) << "bound" << std::setw(14) << "exact" << "ok\n";
    for (const BoundReport& r : reports) {
        std::string params;
        for (const auto& [k, v] : r.params) params += k + "=" + fmt6(v) + " ";
        os << std::left << std::setw(20) << r.name << std::setw(44) << params
           << std::setw(14) << fmt6(r.bound_value) << std::setw(14)
           << (r.empirical ? fmt6(*r.empirical) : std::string("-"))
           << (r.satisfied ? (*r.satisfied ? "yes" : "NO") : "-") << "\n";
    }
}

void write_bound_reports_csv(const std::vector<BoundReport>& reports,
                             std::ostream& os) {
    os << "name,params,bound_value,empirical,satisfied,series_terms\n";
    for (const BoundReport& r : reports) {
        std::string params;
        for (const auto& [k, v] : r.params) {
            if (!params.empty()) params += ';';
            params += k + "=" + fmt(v);
        }
        os << r.name << "," << params << "," << fmt(r.bound_value) << ","
           << (r.empirical ? fmt(*r.empirical) : std::string()) << ","
           << (r.satisfied ? (*r.satisfied ? "1" : "0") : std::string()) << ","
           << r.series_terms << "\n";
    }
}

namespace {

CriterionResult run_criterion(int index, const std::string& name,
                              const ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult res;
    res.index = index;
    res.name = name;
    res.reports = run_experiment(cfg);
    res.passed = true;
    for (const StatReport& r : res.reports)
        if (!r.passed) res.passed = false;
    res.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::uint64_t master_seed,
                                            const std::string& out_dir) {
    std::vector<CriterionResult> out;
    const auto cfg_for = [&](ExperimentKind kind, int index) {
        ExperimentConfig cfg;
        cfg.kind = kind;
        cfg.master_seed = child_seed(master_seed, 0xACC0 + static_cast<std::uint64_t>(index));
        cfg.output_path = out_dir;
        return cfg;
    };

    out.push_back(run_criterion(1, "leaf-count law", cfg_for(ExperimentKind::LeafDist, 1)));
    out.push_back(run_criterion(2, "mean length", cfg_for(ExperimentKind::Length, 2)));
    out.push_back(run_criterion(3, "scaling law", cfg_for(ExperimentKind::Scaling, 3)));
    out.push_back(run_criterion(4, "projection moments", cfg_for(ExperimentKind::Walk, 4)));
    out.push_back(
        run_criterion(5, "branch collapse", cfg_for(ExperimentKind::BranchCollapse, 5)));
    out.push_back(run_criterion(6, "radius bound", cfg_for(ExperimentKind::RadiusTail, 6)));
    out.push_back(run_criterion(7, "appendix domination", cfg_for(ExperimentKind::Bounds, 7)));
    out.push_back(run_criterion(8, "fe solver vs mc", cfg_for(ExperimentKind::FeVsMc, 8)));
    out.push_back(
        run_criterion(9, "hausdorff convergence", cfg_for(ExperimentKind::Hausdorff, 9)));
    out.push_back(run_criterion(10, "hole probability", cfg_for(ExperimentKind::Connect, 10)));
    return out;
}

void print_acceptance(const std::vector<CriterionResult>& results, std::ostream& os) {
    for (const CriterionResult& c : results) {
        os << (c.passed ? "PASS" : "FAIL") << " criterion " << std::setw(2) << c.index
           << "  " << std::left << std::setw(24) << c.name << std::right << " ("
           << std::fixed << std::setprecision(1) << c.seconds << " s)";
        os.unsetf(std::ios::fixed);
        for (const StatReport& r : c.reports) {
            if (!r.passed) os << "  [" << r.name << ": " << r.detail << "]";
        }
        os << "\n";
    }
    std::size_t failed = 0;
    for (const CriterionResult& c : results)
        if (!c.passed) ++failed;
    os << (failed == 0 ? "all criteria passed"
                       : std::to_string(failed) + " criteria FAILED")
       << "\n";
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const CriterionResult& c : results)
        if (!c.passed) return false;
    return true;
}

}  // namespace yule
