#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "yule/branch.hpp"
#include "yule/stats.hpp"
#include "yule/tree.hpp"

using namespace yule;

TEST_CASE("rate 0 branch is one straight piece") {
    Rng rng(1);
    const BranchPath path = grow_branch(2, 0.0, 2.5, rng);
    CHECK(path.turns() == 0);
    CHECK(path.directions.size() == 1);
    CHECK(norm(branch_endpoint(path)) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(max_displacement(path) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("turn count at rate*horizon = 1 has Poisson mass e^-1 at zero") {
    Rng rng(2);
    int zero_turns = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i)
        if (grow_branch(2, 1.0, 1.0, rng).turns() == 0) ++zero_turns;
    CHECK(std::abs(zero_turns / static_cast<double>(n) - std::exp(-1.0)) <= 0.015);
}

TEST_CASE("branch path structure: increasing turns, unit directions, full length") {
    Rng rng(3);
    const BranchPath path = grow_branch(2, 2.0, 20.0, rng);
    REQUIRE(path.directions.size() == path.turns() + 1);
    double prev = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < path.turn_times.size(); ++i) {
        CHECK(path.turn_times[i] > prev);
        total += path.turn_times[i] - prev;
        prev = path.turn_times[i];
    }
    total += path.horizon - prev;
    CHECK(total == doctest::Approx(20.0).epsilon(1e-12));
    for (const Vec& d : path.directions) CHECK(std::abs(norm(d) - 1.0) <= 1e-12);
    // a branch that turned is shorter than its length
    CHECK(norm(branch_endpoint(path)) < 20.0);
}

TEST_CASE("the two branch constructions agree in law (KS on endpoint norms)") {
    Rng rng(4);
    const int n = 4000;
    std::vector<double> a, b;
    for (int i = 0; i < n; ++i)
        a.push_back(norm(branch_endpoint(grow_branch(2, 1.0, 1.0, rng))));
    for (int i = 0; i < n; ++i)
        b.push_back(norm(branch_endpoint(grow_branch_poisson(2, 1.0, 1.0, rng))));
    CHECK(ks_two_sample(a, b).p_value > 0.001);
}

TEST_CASE("the first-child path of a tree has the branch law") {
    const int n = 4000;
    std::vector<double> from_tree, from_branch;
    SimConfig cfg;
    cfg.dim = 2;
    cfg.rate = 1.0;
    cfg.horizon = 1.0;
    for (int i = 0; i < n; ++i) {
        Rng rng(child_seed(5, static_cast<std::uint64_t>(i)));
        from_tree.push_back(norm(first_child_leaf_position(grow(cfg, rng))));
    }
    Rng rng(6);
    for (int i = 0; i < n; ++i)
        from_branch.push_back(norm(branch_endpoint(grow_branch(2, 1.0, 1.0, rng))));
    CHECK(ks_two_sample(from_tree, from_branch).p_value > 0.001);
}

TEST_CASE("max displacement of a monotone path is the horizon") {
    BranchPath path;
    path.dim = 2;
    path.horizon = 1.0;
    path.turn_times = {0.3, 0.6};
    path.directions = {Vec{1, 0}, Vec{1, 0}, Vec{1, 0}};
    CHECK(max_displacement(path) == doctest::Approx(1.0));
}

TEST_CASE("median max displacement decreases with the rate") {
    double prev = 1e300;
    for (double rate : {1.0, 4.0, 16.0, 64.0}) {
        Rng rng(static_cast<std::uint64_t>(rate) + 7);
        std::vector<double> disp;
        for (int i = 0; i < 2000; ++i)
            disp.push_back(max_displacement(grow_branch(2, rate, 1.0, rng)));
        const double med = median_of(std::move(disp));
        CHECK(med < prev);
        prev = med;
    }
}

TEST_CASE("walk moments match the closed forms") {
    Rng rng(8);
    const WalkMoments m = walk_moments(1.0, 2, 9, 20000, rng);
    const double var_exact = 2.0 * 10.0 / (2.0 * 1.0);  // 2(k+1)/(dim rate^2)
    for (int c = 0; c < 2; ++c) {
        CHECK(std::abs(m.mean[c]) <= 4.0 * m.mean_se[c]);
        CHECK(m.variance[c] <= 2.0 * 10.0);  // dimension-free bound 2(k+1)/rate^2
        CHECK(std::abs(m.variance[c] - var_exact) <= 0.1 * var_exact);
        CHECK(std::abs(m.increment_past_cov[c]) <= 4.0 * m.increment_past_cov_se[c]);
    }
    REQUIRE(m.cross_correlation.size() == 1);
    CHECK(std::abs(m.cross_correlation[0]) <= 4.0 * m.cross_correlation_se[0]);
}

TEST_CASE("walk radius sandwich holds on every sampled path") {
    Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const TurnSequence seq = sample_turns(3, 1.0, 11, rng);
        const Walk walk = walk_from_turns(seq, 10);
        double r_joint = 0.0;
        std::vector<double> r_coord(3, 0.0);
        for (const Vec& x : walk.steps) {
            r_joint = std::max(r_joint, norm(x));
            for (int c = 0; c < 3; ++c)
                r_coord[c] = std::max(r_coord[c], std::abs(x[c]));
        }
        const double max_coord = *std::max_element(r_coord.begin(), r_coord.end());
        const double sum_coord = r_coord[0] + r_coord[1] + r_coord[2];
        CHECK(max_coord <= r_joint + 1e-12);
        CHECK(r_joint <= sum_coord + 1e-12);
    }
}

TEST_CASE("branch and walk built from shared turns coincide at turn times") {
    Rng rng(10);
    const TurnSequence seq = sample_turns(2, 2.0, 40, rng);
    double cum = 0.0;
    std::size_t turns_before_horizon = 0;
    const double horizon = 5.0;
    for (std::size_t i = 0; i < seq.gaps.size(); ++i) {
        if (cum + seq.gaps[i] >= horizon) break;
        cum += seq.gaps[i];
        ++turns_before_horizon;
    }
    REQUIRE(turns_before_horizon >= 2);
    const BranchPath path = branch_from_turns(seq, horizon);
    REQUIRE(path.turns() == turns_before_horizon);
    const Walk walk = walk_from_turns(seq, turns_before_horizon - 1);
    for (std::size_t k = 0; k < turns_before_horizon; ++k) {
        const Vec at_turn = branch_position(path, path.turn_times[k]);
        for (int c = 0; c < 2; ++c)
            CHECK(std::abs(at_turn[c] - walk.steps[k][c]) <= 1e-12);
    }
}

TEST_CASE("walk_from_turns validates the sequence length") {
    Rng rng(11);
    const TurnSequence seq = sample_turns(2, 1.0, 3, rng);
    CHECK_THROWS_AS(walk_from_turns(seq, 5), std::invalid_argument);
}

TEST_CASE("argument validation") {
    Rng rng(12);
    CHECK_THROWS_AS(grow_branch(2, -1.0, 1.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(grow_branch(2, 1.0, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(walk_moments(1.0, 2, 3, 10, rng), std::invalid_argument);
}
