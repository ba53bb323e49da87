// Timings of the OpenMP kernels against their serial references.

#include <chrono>
#include <iostream>

#include "yule/fe.hpp"
#include "yule/geometry.hpp"
#include "yule/parallel.hpp"
#include "yule/tree.hpp"

namespace {

template <typename F>
double seconds(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

void report(const char* name, double serial, double parallel) {
    std::cout << name << ": serial " << serial << " s, parallel " << parallel
              << " s, speedup " << serial / parallel << "\n";
}

}  // namespace

int main() {
    std::cout << "threads: " << yule::max_threads() << "\n";

    {
        yule::SimConfig cfg;
        cfg.rate = 8.0;
        cfg.horizon = 1.0;
        cfg.master_seed = 7;
        const std::size_t n = 2000;
        yule::TrialBatch a, b;
        const double ts = seconds([&] { a = yule::run_trials_serial(cfg, n); });
        const double tp = seconds([&] { b = yule::run_trials(cfg, n); });
        report("run_trials (rate 8, 2000 trials)", ts, tp);
        for (std::size_t i = 0; i < n; ++i)
            if (a.trials[i].radius != b.trials[i].radius) {
                std::cout << "MISMATCH at trial " << i << "\n";
                return 1;
            }
    }

    {
        yule::SimConfig cfg;
        cfg.rate = 10.0;
        cfg.horizon = 1.0;
        cfg.master_seed = 11;
        yule::Rng rng(cfg.master_seed);
        const yule::Tree tree = yule::grow(cfg, rng);
        yule::HausdorffEstimate a, b;
        const double ts = seconds([&] {
            a = yule::hausdorff_to_ball_serial(tree.segments, yule::Vec::zero(2), 0.45,
                                               0.005);
        });
        const double tp = seconds([&] {
            b = yule::hausdorff_to_ball(tree.segments, yule::Vec::zero(2), 0.45, 0.005);
        });
        report("hausdorff_to_ball (rate 10 tree, step 0.005)", ts, tp);
        if (a.value != b.value) {
            std::cout << "MISMATCH in hausdorff estimate\n";
            return 1;
        }
    }

    {
        yule::FeParams p;
        p.rate = 1.0;
        p.r = 0.3;
        p.t_max = 2.0;
        p.d_max = 2.4;
        p.dt = p.dd = 0.01;
        yule::FeParams ps = p;
        ps.parallel = false;
        yule::FeGrid a, b;
        const double ts = seconds([&] { a = yule::solve_fe(ps); });
        const double tp = seconds([&] { b = yule::solve_fe(p); });
        report("solve_fe (dt 0.01)", ts, tp);
        if (a.q != b.q) {
            std::cout << "MISMATCH in fe grid\n";
            return 1;
        }
    }
    return 0;
}
