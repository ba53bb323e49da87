#ifndef YULE_EXPERIMENTS_HPP
#define YULE_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "yule/analytic.hpp"
#include "yule/stats.hpp"

namespace yule {

// One experiment kind per acceptance criterion.
enum class ExperimentKind {
    LeafDist,        // leaf-count law
    Length,          // mean total length
    Scaling,         // rescaling invariance of radius/length/leaf count
    Walk,            // projection-walk moments
    BranchCollapse,  // max displacement of a branch vs rate
    RadiusTail,      // explicit radius lower bound vs Monte Carlo
    Bounds,          // first-success / exponential-maximum bound domination
    FeVsMc,          // functional-equation solver vs Monte Carlo
    Hausdorff,       // ball-filling in Hausdorff distance
    Connect,         // hole probability on the covering lattice
};

ExperimentKind parse_kind(const std::string& name);
std::string kind_name(ExperimentKind kind);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::LeafDist;
    std::map<std::string, std::string> params;
    std::size_t n_trials = 0;  // 0 means the kind's default
    std::uint64_t master_seed = 20240601;
    std::string output_path;  // directory for CSV artifacts; empty disables them

    double get(const std::string& key, double dflt) const;
    std::vector<double> get_list(const std::string& key,
                                 const std::vector<double>& dflt) const;
};

// Flat key=value file, one entry per line, '#' comments. Recognised keys:
// kind, trials, seed, out, plus kind-specific parameters.
ExperimentConfig load_experiment_config(const std::string& path);

// Runs the experiment, writes CSV artifacts when output_path is set, and
// returns one StatReport per sub-check. Deterministic in master_seed.
std::vector<StatReport> run_experiment(const ExperimentConfig& cfg);

struct HoleReport {
    double frequency = 0.0;
    std::size_t lattice_points = 0;
    double bound = 0.0;
    double c_const = 0.0;
    double a_const = 0.0;
    std::size_t n_trials = 0;
    std::size_t n_failed = 0;
};

// Frequency of { some lattice point of spacing delta*t/2 inside
// B(0, t*d - delta*t/4) lies farther than delta*t from the tree }, against
// the explicit bound C delta^{-2 dim} exp(-(1-a) rate delta t / 16) with
// C = 8 d^2 (1 + alpha_margin).
HoleReport hole_probability(double rate, double t, double d, double delta, double a,
                            double alpha_margin, std::size_t n_trials,
                            std::uint64_t seed);

// Bound evaluations for the check harness.
std::vector<BoundReport> appendix_bound_reports();
void print_bound_reports(const std::vector<BoundReport>& reports, std::ostream& os);
void write_bound_reports_csv(const std::vector<BoundReport>& reports,
                             std::ostream& os);

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    double seconds = 0.0;
    std::vector<StatReport> reports;
};

// The full acceptance suite; out_dir may be empty. Prints nothing.
std::vector<CriterionResult> run_acceptance(std::uint64_t master_seed,
                                            const std::string& out_dir);

// One PASS/FAIL line per criterion.
void print_acceptance(const std::vector<CriterionResult>& results, std::ostream& os);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace yule

#endif  // YULE_EXPERIMENTS_HPP
