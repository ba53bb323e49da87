#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "yule/branch.hpp"
#include "yule/csv.hpp"
#include "yule/experiments.hpp"
#include "yule/fe.hpp"
#include "yule/stats.hpp"
#include "yule/tree.hpp"

namespace {

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path);
    return file;
}

// "x0,x1,...:r" -> probe at the given point with the given radius
yule::Probe parse_probe(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--probe", "expected x0,x1,...:r");
    std::vector<double> coords;
    std::stringstream ss(text.substr(0, colon));
    std::string tok;
    while (std::getline(ss, tok, ',')) coords.push_back(std::stod(tok));
    if (coords.empty() || coords.size() > static_cast<std::size_t>(yule::kMaxDim))
        throw CLI::ValidationError("--probe", "bad coordinate count");
    yule::Vec x(static_cast<int>(coords.size()));
    for (std::size_t i = 0; i < coords.size(); ++i) x[static_cast<int>(i)] = coords[i];
    return {x, std::stod(text.substr(colon + 1))};
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-tree growth simulator, analytics and solvers"};
    app.require_subcommand(1);

    int dim = 2;
    double rate = 1.0;
    double horizon = 1.0;
    std::size_t trials = 1000;
    std::uint64_t seed = 20240601;
    std::string out;

    // simulate: one tree -> segment CSV
    auto* sim = app.add_subcommand("simulate", "grow one tree and dump its segments");
    sim->add_option("--dim", dim);
    sim->add_option("--rate", rate);
    sim->add_option("--horizon", horizon);
    sim->add_option("--seed", seed);
    sim->add_option("--out", out);
    std::size_t max_segments = 10'000'000;
    sim->add_option("--max-segments", max_segments);
    sim->callback([&] {
        yule::SimConfig cfg;
        cfg.dim = dim;
        cfg.rate = rate;
        cfg.horizon = horizon;
        cfg.master_seed = seed;
        cfg.max_segments = max_segments;
        if (2.0 * std::exp(rate * horizon) > static_cast<double>(max_segments))
            std::cerr << "warning: expected segment count ~2*exp(rate*horizon) exceeds"
                         " --max-segments; the run may abort\n";
        yule::Rng rng(cfg.master_seed);
        const yule::Tree tree = yule::grow(cfg, rng);
        std::ofstream file;
        yule::write_segments_csv(open_out(file, out), tree);
    });

    // branch: one branch path -> CSV
    auto* br = app.add_subcommand("branch", "grow one branch and dump its turn points");
    br->add_option("--dim", dim);
    br->add_option("--rate", rate);
    br->add_option("--horizon", horizon);
    br->add_option("--seed", seed);
    br->add_option("--out", out);
    br->callback([&] {
        yule::Rng rng(seed);
        const yule::BranchPath path = yule::grow_branch(dim, rate, horizon, rng);
        std::ofstream file;
        yule::write_branch_csv(open_out(file, out), path);
    });

    // radius-survey: trial summaries over a (rate, horizon) grid
    auto* survey = app.add_subcommand("radius-survey",
                                      "trial summaries over a rate/horizon grid");
    std::string rates_text = "1";
    std::string horizons_text = "1";
    survey->add_option("--rates", rates_text, "comma-separated rates");
    survey->add_option("--horizons", horizons_text, "comma-separated horizons");
    survey->add_option("--dim", dim);
    survey->add_option("--trials", trials);
    survey->add_option("--seed", seed);
    survey->add_option("--out", out);
    survey->callback([&] {
        std::ofstream file;
        std::ostream& os = open_out(file, out);
        os << "rate,horizon,trial,seed,radius,total_length,leaf_count,branch_points\n";
        std::uint64_t run = 0;
        for (double lam : parse_list(rates_text)) {
            for (double t : parse_list(horizons_text)) {
                yule::SimConfig cfg;
                cfg.dim = dim;
                cfg.rate = lam;
                cfg.horizon = t;
                cfg.master_seed = yule::child_seed(seed, run++);
                const yule::TrialBatch batch = yule::run_trials(cfg, trials);
                for (const auto& tr : batch.trials) {
                    if (!tr.ok) continue;
                    os << yule::fmt(lam) << "," << yule::fmt(t) << "," << tr.trial << ","
                       << tr.seed << "," << yule::fmt(tr.radius) << ","
                       << yule::fmt(tr.total_length) << "," << tr.leaf_count << ","
                       << tr.branch_point_count << "\n";
                }
                if (batch.n_failed)
                    std::cerr << "rate " << lam << " horizon " << t << ": "
                              << batch.n_failed << " trials exceeded the budget\n";
            }
        }
    });

    // connect-mc: hit fractions for probes
    auto* connect = app.add_subcommand("connect-mc",
                                       "Monte Carlo connection probabilities");
    std::vector<std::string> probe_texts;
    connect->add_option("--probe", probe_texts, "probe as x0,x1,...:r (repeatable)")
        ->required();
    connect->add_option("--dim", dim);
    connect->add_option("--rate", rate);
    connect->add_option("--horizon", horizon);
    connect->add_option("--trials", trials);
    connect->add_option("--seed", seed);
    connect->add_option("--out", out);
    connect->callback([&] {
        std::vector<yule::Probe> probes;
        for (const auto& text : probe_texts) probes.push_back(parse_probe(text));
        yule::SimConfig cfg;
        cfg.dim = dim;
        cfg.rate = rate;
        cfg.horizon = horizon;
        cfg.master_seed = seed;
        const yule::TrialBatch batch = yule::run_trials(cfg, trials, probes);
        std::ofstream file;
        yule::write_trials_csv(open_out(file, out), batch, probes.size());
        for (std::size_t p = 0; p < probes.size(); ++p) {
            const double f = batch.hit_fraction(p);
            const auto ci = yule::wilson_interval(
                static_cast<std::size_t>(std::lround(f * batch.n_ok())), batch.n_ok(),
                3.0);
            std::cerr << "probe " << p << ": hit fraction " << f << "  (3-sigma Wilson ["
                      << ci.lo << ", " << ci.hi << "])\n";
        }
    });

    // solve-fe: functional-equation grid -> CSV
    auto* fe = app.add_subcommand("solve-fe", "solve the miss-probability equation");
    yule::FeParams fep;
    fe->add_option("--rate", fep.rate);
    fe->add_option("--r", fep.r);
    fe->add_option("--tmax", fep.t_max);
    fe->add_option("--dmax", fep.d_max);
    fe->add_option("--dt", fep.dt);
    fe->add_option("--dd", fep.dd);
    fe->add_option("--nalpha", fep.n_alpha);
    fe->add_option("--ns", fep.n_s);
    fe->add_option("--out", out);
    fe->callback([&] {
        const yule::FeGrid grid = yule::solve_fe(fep);
        std::ofstream file;
        yule::write_fe_csv(open_out(file, out), grid, fep);
    });

    // run: one experiment from flags/config file
    auto* run = app.add_subcommand("run", "run one experiment kind");
    std::string kind_text = "leafdist";
    std::string config_path;
    std::vector<std::string> overrides;
    run->add_option("--kind", kind_text, "experiment kind");
    run->add_option("--config", config_path, "key=value config file");
    run->add_option("--set", overrides, "key=value override (repeatable)");
    run->add_option("--trials", trials);
    run->add_option("--seed", seed);
    run->add_option("--out", out);
    run->callback([&] {
        yule::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = yule::load_experiment_config(config_path);
        if (run->count("--kind") || config_path.empty())
            cfg.kind = yule::parse_kind(kind_text);
        if (run->count("--trials")) cfg.n_trials = trials;
        if (run->count("--seed")) cfg.master_seed = seed;
        if (run->count("--out")) cfg.output_path = out;
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("--set", "expected key=value");
            cfg.params[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
        const auto reports = yule::run_experiment(cfg);
        bool ok = true;
        for (const auto& r : reports) {
            std::cout << (r.passed ? "pass " : "FAIL ") << r.name << "  value="
                      << r.value;
            if (r.p_value >= 0.0) std::cout << " p=" << r.p_value;
            std::cout << "  " << r.detail << "\n";
            ok = ok && r.passed;
        }
        if (!ok) throw CLI::RuntimeError(1);
    });

    // check: full acceptance suite + bound table, exit 0/1
    auto* check = app.add_subcommand("check", "run the full acceptance suite");
    check->add_option("--seed", seed);
    check->add_option("--out", out, "directory for CSV artifacts");
    bool show_bounds = true;
    check->add_flag("--bounds,!--no-bounds", show_bounds, "print the bound table");
    check->callback([&] {
        if (show_bounds) {
            yule::print_bound_reports(yule::appendix_bound_reports(), std::cout);
            std::cout << "\n";
        }
        const auto results = yule::run_acceptance(seed, out);
        yule::print_acceptance(results, std::cout);
        if (!yule::all_passed(results)) throw CLI::RuntimeError(1);
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}
