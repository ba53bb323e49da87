#include <doctest.h>

#include <cmath>
#include <vector>

#include "yule/analytic.hpp"
#include "yule/stats.hpp"
#include "yule/tree.hpp"

using namespace yule;

namespace {

SimConfig make_config(double rate, double horizon, std::uint64_t seed, int dim = 2) {
    SimConfig cfg;
    cfg.dim = dim;
    cfg.rate = rate;
    cfg.horizon = horizon;
    cfg.master_seed = seed;
    return cfg;
}

double path_length_to_root(const Tree& tree, std::size_t leaf_segment) {
    double sum = 0.0;
    std::int64_t k = static_cast<std::int64_t>(leaf_segment);
    while (k >= 0) {
        sum += tree.segments[static_cast<std::size_t>(k)].length();
        k = tree.parent[static_cast<std::size_t>(k)];
    }
    return sum;
}

}  // namespace

TEST_CASE("rate 0 grows a single segment to the horizon") {
    Rng rng(1);
    const Tree tree = grow(make_config(0.0, 3.0, 1), rng);
    CHECK(tree.segments.size() == 1);
    CHECK(tree.leaves.size() == 1);
    CHECK(tree.branch_points.empty());
    CHECK(radius(tree) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(tree.total_length() == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("tree invariants hold on grown trees") {
    for (std::uint64_t seed : {2u, 3u, 4u, 5u}) {
        Rng rng(seed);
        const Tree tree = grow(make_config(2.0, 1.0, seed), rng);
        CHECK(tree.leaves.size() == tree.branch_points.size() + 1);
        CHECK(radius(tree) <= 1.0 + 1e-12);
        for (const Leaf& leaf : tree.leaves)
            CHECK(std::abs(path_length_to_root(tree, leaf.segment) - 1.0) <= 1e-9);
        for (std::size_t k = 1; k < tree.segments.size(); ++k) {
            const auto p = static_cast<std::size_t>(tree.parent[k]);
            CHECK(tree.segments[k].start == tree.segments[p].end);
        }
        for (const Segment& s : tree.segments)
            CHECK(s.length() <= 1.0 - s.birth_time + 1e-12);
    }
}

TEST_CASE("growth is deterministic in the seed") {
    Rng a(42), b(42);
    const Tree ta = grow(make_config(3.0, 1.0, 42), a);
    const Tree tb = grow(make_config(3.0, 1.0, 42), b);
    REQUIRE(ta.segments.size() == tb.segments.size());
    for (std::size_t i = 0; i < ta.segments.size(); ++i) {
        CHECK(ta.segments[i].start == tb.segments[i].start);
        CHECK(ta.segments[i].end == tb.segments[i].end);
        CHECK(ta.segments[i].birth_time == tb.segments[i].birth_time);
    }
}

TEST_CASE("segment budget overrun throws with the partial count") {
    SimConfig cfg = make_config(5.0, 2.0, 9);
    cfg.max_segments = 10;
    Rng rng(9);
    try {
        grow(cfg, rng);
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(e.segments_built == 10);
    }
}

TEST_CASE("radius of a hand-built tree") {
    Tree tree;
    tree.dim = 2;
    tree.horizon = 0.5;
    tree.segments.push_back({Vec{0, 0}, Vec{0.3, 0.4}, 0.0});
    tree.parent.push_back(-1);
    CHECK(radius(tree) == doctest::Approx(0.5));
}

TEST_CASE("min_distance basics") {
    Rng rng(10);
    const Tree tree = grow(make_config(1.0, 1.0, 10), rng);
    CHECK(min_distance(tree, Vec{0, 0}) <= 1e-12);
    const Vec mid = 0.5 * (tree.segments[0].start + tree.segments[0].end);
    CHECK(min_distance(tree, mid) <= 1e-12);
    CHECK(min_distance(tree, Vec{2.0, 0}) >= 1.0 - 1e-9);
}

TEST_CASE("run_trials is reproducible and matches the serial reference") {
    const SimConfig cfg = make_config(2.0, 1.0, 77);
    const std::vector<Probe> probes = {{Vec{0, 0}, 0.1}, {Vec{0.4, 0.2}, 0.15}};
    const TrialBatch par = run_trials(cfg, 64, probes);
    const TrialBatch ser = run_trials_serial(cfg, 64, probes);
    REQUIRE(par.trials.size() == ser.trials.size());
    for (std::size_t i = 0; i < par.trials.size(); ++i) {
        CHECK(par.trials[i].seed == ser.trials[i].seed);
        CHECK(par.trials[i].radius == ser.trials[i].radius);
        CHECK(par.trials[i].total_length == ser.trials[i].total_length);
        CHECK(par.trials[i].leaf_count == ser.trials[i].leaf_count);
        CHECK(par.trials[i].hits == ser.trials[i].hits);
    }
    const TrialBatch again = run_trials(cfg, 64, probes);
    for (std::size_t i = 0; i < par.trials.size(); ++i)
        CHECK(par.trials[i].radius == again.trials[i].radius);
}

TEST_CASE("a probe at the origin is always hit") {
    const TrialBatch batch = run_trials(make_config(1.0, 1.0, 11), 200, {{Vec{0, 0}, 0.05}});
    CHECK(batch.hit_fraction(0) == doctest::Approx(1.0));
}

TEST_CASE("rate 0 hit fraction matches the single-ray formula") {
    // distance 0.5, radius 0.2, horizon 1 > sqrt(d^2 - r^2): hit probability
    // is asin(r/d)/pi
    const TrialBatch batch =
        run_trials(make_config(0.0, 1.0, 12), 20000, {{Vec{0.5, 0}, 0.2}});
    const double expected = std::asin(0.2 / 0.5) / 3.14159265358979323846;
    CHECK(std::abs(batch.hit_fraction(0) - expected) <= 0.012);
}

TEST_CASE("budget failures are recorded per trial, not fatal") {
    SimConfig cfg = make_config(3.0, 1.5, 13);
    cfg.max_segments = 30;  // many trials will blow this
    const TrialBatch batch = run_trials(cfg, 100);
    CHECK(batch.n_failed > 0);
    CHECK(batch.n_failed < 100);  // and some survive
    for (const auto& t : batch.trials)
        if (!t.ok) CHECK(t.leaf_count == 0);
}

TEST_CASE("leaf counts follow the first-success law (chi-square)") {
    const TrialBatch batch = run_trials(make_config(1.0, 1.0, 14), 20000);
    const double y = std::exp(-1.0);
    // bins k = 1..10 with the tail pooled into the last bin
    std::vector<double> expected;
    double tail = 1.0;
    for (int k = 1; k <= 10; ++k) {
        expected.push_back(20000 * fs_pmf(y, k));
        tail -= fs_pmf(y, k);
    }
    expected.push_back(20000 * tail);
    std::vector<double> observed(expected.size(), 0.0);
    for (const auto& t : batch.trials) {
        const std::size_t bin = std::min<std::size_t>(t.leaf_count - 1, 10);
        observed[bin] += 1.0;
    }
    const ChiSquareResult res = chi_square_gof(observed, expected);
    CHECK(res.p_value > 0.001);
}

TEST_CASE("mean leaf count and mean length match the closed forms") {
    const TrialBatch batch = run_trials(make_config(1.0, 1.0, 15), 20000);
    double leaves = 0.0, length = 0.0;
    for (const auto& t : batch.trials) {
        leaves += static_cast<double>(t.leaf_count);
        length += t.total_length;
    }
    leaves /= 20000;
    length /= 20000;
    CHECK(std::abs(leaves - std::exp(1.0)) <= 0.02 * std::exp(1.0));
    CHECK(std::abs(length - length_mean(1.0, 1.0)) <= 0.02 * length_mean(1.0, 1.0));
}

TEST_CASE("rescaled radius law is invariant (quick two-sample KS)") {
    const TrialBatch big = run_trials(make_config(1.0, 2.0, 16), 3000);
    const TrialBatch small = run_trials(make_config(2.0, 1.0, 17), 3000);
    std::vector<double> a, b;
    for (const auto& t : big.trials) a.push_back(t.radius / 2.0);
    for (const auto& t : small.trials) b.push_back(t.radius);
    CHECK(ks_two_sample(a, b).p_value > 0.001);
}

TEST_CASE("area of the r-neighbourhood sits in the sandwich (D=2)") {
    const double r = 0.2;
    const double kPi = 3.14159265358979323846;
    for (std::uint64_t seed : {18u, 19u, 20u}) {
        Rng rng(seed);
        const Tree tree = grow(make_config(1.0, 1.0, seed), rng);
        Rng prng(seed + 1000);
        const double box = 2.0 * (1.0 + r);
        const int n = 40000;
        int inside = 0;
        for (int i = 0; i < n; ++i) {
            Vec p{prng.uniform() * box - box / 2, prng.uniform() * box - box / 2};
            if (min_distance(tree, p) <= r) ++inside;
        }
        const double frac = inside / static_cast<double>(n);
        const double area = box * box * frac;
        const double sigma = box * box * std::sqrt(frac * (1 - frac) / n);
        const double upper = 2 * r * tree.total_length() +
                             kPi * r * r / 2 * (tree.leaves.size() + 1);
        CHECK(area >= kPi * r * r - 3 * sigma);
        CHECK(area <= upper + 3 * sigma);
    }
}

TEST_CASE("config validation") {
    Rng rng(1);
    CHECK_THROWS_AS(grow(make_config(-1.0, 1.0, 1), rng), std::invalid_argument);
    CHECK_THROWS_AS(grow(make_config(1.0, 0.0, 1), rng), std::invalid_argument);
    CHECK_THROWS_AS(run_trials(make_config(1.0, 1.0, 1), 0), std::invalid_argument);
}
