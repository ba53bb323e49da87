#include <doctest.h>

#include <cmath>

#include "yule/analytic.hpp"
#include "yule/fe.hpp"
#include "yule/tree.hpp"

using namespace yule;

namespace {

FeParams small_params(double rate) {
    FeParams p;
    p.rate = rate;
    p.r = 0.3;
    p.t_max = 1.0;
    p.d_max = 1.4;
    p.dt = p.dd = 0.05;
    p.n_alpha = 24;
    p.n_s = 24;
    return p;
}

}  // namespace

TEST_CASE("parameter validation") {
    FeParams p = small_params(1.0);
    p.n_alpha = 8;
    CHECK_THROWS_AS(solve_fe(p), std::invalid_argument);
    p = small_params(1.0);
    p.r = 0.0;
    CHECK_THROWS_AS(solve_fe(p), std::invalid_argument);
    p = small_params(1.0);
    p.dt = -0.1;
    CHECK_THROWS_AS(solve_fe(p), std::invalid_argument);
}

TEST_CASE("boundary conditions are exact on the output grid") {
    const FeGrid g = solve_fe(small_params(1.0));
    for (std::size_t i = 0; i < g.nt; ++i) {
        for (std::size_t j = 0; j < g.nd; ++j) {
            if (g.inside_ball(j)) CHECK(g.at(i, j) == 0.0);
            else if (g.pre_reach(i, j)) CHECK(g.at(i, j) == 1.0);
        }
    }
}

TEST_CASE("rate 0 reproduces the single-ray miss probability to 1e-10") {
    const FeGrid g = solve_fe(small_params(0.0));
    double worst = 0.0;
    for (std::size_t i = 0; i < g.nt; ++i) {
        for (std::size_t j = 0; j < g.nd; ++j) {
            if (g.inside_ball(j) || g.pre_reach(i, j)) continue;
            const double t_eff = std::max(g.t_of(i), g.d_of(j) - g.r);
            worst = std::max(
                worst, std::abs(g.at(i, j) - miss_given_no_branch(t_eff, g.d_of(j), g.r)));
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("solution lies in [0,1] and is non-increasing in t") {
    const FeGrid g = solve_fe(small_params(1.0));
    for (double v : g.q) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    for (std::size_t j = 0; j < g.nd; ++j)
        for (std::size_t i = 1; i < g.nt; ++i)
            CHECK(g.at(i, j) <= g.at(i - 1, j) + 1e-3);
}

TEST_CASE("parallel solve equals the serial reference bit for bit") {
    FeParams p = small_params(1.5);
    const FeGrid par = solve_fe(p);
    p.parallel = false;
    const FeGrid ser = solve_fe(p);
    CHECK(par.q == ser.q);
}

TEST_CASE("identical grids have zero discrepancy; mismatches are rejected") {
    const FeGrid a = solve_fe(small_params(1.0));
    const FeConsistency same = limit_consistency(a, a);
    CHECK(same.max_abs_diff == 0.0);
    CHECK(same.nodes_compared == a.q.size());

    FeParams other = small_params(1.0);
    other.r = 0.25;
    const FeGrid b = solve_fe(other);
    CHECK_THROWS_AS(limit_consistency(a, b), std::invalid_argument);

    FeParams third = small_params(1.0);
    third.dt = third.dd = 0.03125;
    CHECK_THROWS_AS(limit_consistency(a, solve_fe(third)), std::invalid_argument);
}

TEST_CASE("halving the steps shrinks the discrepancy") {
    FeParams coarse = small_params(1.0);
    coarse.dt = coarse.dd = 0.1;
    FeParams mid = small_params(1.0);
    mid.dt = mid.dd = 0.05;
    FeParams fine = small_params(1.0);
    fine.dt = fine.dd = 0.025;
    const double d1 = limit_consistency(solve_fe(coarse), solve_fe(mid)).max_abs_diff;
    const double d2 = limit_consistency(solve_fe(mid), solve_fe(fine)).max_abs_diff;
    CHECK(d2 < d1);
}

TEST_CASE("interpolation read respects boundaries and hits nodes") {
    const FeGrid g = solve_fe(small_params(1.0));
    CHECK(fe_value(g, 0.5, 0.1) == 0.0);   // inside the ball
    CHECK(fe_value(g, 0.1, 1.0) == 1.0);   // before the reach sheet
    CHECK(fe_value(g, 0.5, 0.6) == doctest::Approx(g.at(10, 12)).epsilon(1e-12));
}

TEST_CASE("interpolation outside the d extent raises the grid error") {
    FeParams p = small_params(1.0);
    p.t_max = 2.0;
    p.d_max = 1.0;  // too small for horizon 2: lookups past d_max occur
    CHECK_THROWS_AS(solve_fe(p), GridExtentError);
}

TEST_CASE("solver agrees with Monte Carlo at a probe point (quick)") {
    FeParams p = small_params(1.0);
    p.dt = p.dd = 0.02;
    p.n_alpha = p.n_s = 32;
    const FeGrid g = solve_fe(p);
    const double q_solver = fe_value(g, 1.0, 0.5);

    SimConfig cfg;
    cfg.dim = 2;
    cfg.rate = 1.0;
    cfg.horizon = 1.0;
    cfg.master_seed = 99;
    const TrialBatch batch = run_trials(cfg, 20000, {{Vec{0.5, 0.0}, 0.3}});
    const double q_mc = 1.0 - batch.hit_fraction(0);
    CHECK(std::abs(q_solver - q_mc) <= 0.03);
}

TEST_CASE("trial hit fractions cross-check the solver at another radius") {
    // probe at distance 0.3 with r = 0.2, horizon 1
    FeParams p;
    p.rate = 1.0;
    p.r = 0.2;
    p.t_max = 1.0;
    p.d_max = 1.3;
    p.dt = p.dd = 0.02;
    p.n_alpha = p.n_s = 32;
    const FeGrid g = solve_fe(p);
    const double p_solver = 1.0 - fe_value(g, 1.0, 0.3);

    SimConfig cfg;
    cfg.dim = 2;
    cfg.rate = 1.0;
    cfg.horizon = 1.0;
    cfg.master_seed = 123;
    const std::size_t n = 10000;
    const TrialBatch batch = run_trials(cfg, n, {{Vec{0.3, 0.0}, 0.2}});
    const double f = batch.hit_fraction(0);
    const double sigma = std::sqrt(f * (1.0 - f) / static_cast<double>(n));
    CHECK(std::abs(f - p_solver) <= 3.0 * sigma + 0.01);  // MC noise + solver bias
}

TEST_CASE("higher rates drive the miss probability down at a reachable probe") {
    FeParams base = small_params(1.0);
    base.r = 0.05;
    base.t_max = 1.0;
    base.d_max = 1.1;
    base.dt = base.dd = 0.01;
    base.n_alpha = base.n_s = 24;
    const std::vector<double> qs =
        fe_lambda_sweep({1.0, 4.0, 16.0, 64.0}, 0.05, 1.0, 0.3, base);
    for (std::size_t i = 1; i < qs.size(); ++i) CHECK(qs[i] < qs[i - 1]);
}
