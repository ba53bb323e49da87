#include "yule/csv.hpp"

#include <charconv>

namespace yule {

std::string fmt(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_segments_csv(std::ostream& os, const Tree& tree) {
    os << "segment_id,parent_id,birth_time";
    for (int i = 0; i < tree.dim; ++i) os << ",x" << i;
    for (int i = 0; i < tree.dim; ++i) os << ",y" << i;
    os << "\n";
    for (std::size_t k = 0; k < tree.segments.size(); ++k) {
        const Segment& s = tree.segments[k];
        os << k << "," << tree.parent[k] << "," << fmt(s.birth_time);
        for (int i = 0; i < tree.dim; ++i) os << "," << fmt(s.start[i]);
        for (int i = 0; i < tree.dim; ++i) os << "," << fmt(s.end[i]);
        os << "\n";
    }
}

void write_trials_csv(std::ostream& os, const TrialBatch& batch,
                      std::size_t n_probes) {
    os << "trial,seed,radius,total_length,leaf_count,branch_points";
    for (std::size_t p = 0; p < n_probes; ++p) os << ",hit_" << p;
    os << "\n";
    for (const TrialSummary& t : batch.trials) {
        if (!t.ok) continue;
        os << t.trial << "," << t.seed << "," << fmt(t.radius) << ","
           << fmt(t.total_length) << "," << t.leaf_count << ","
           << t.branch_point_count;
        for (std::size_t p = 0; p < n_probes; ++p)
            os << "," << static_cast<int>(t.hits[p]);
        os << "\n";
    }
}

void write_branch_csv(std::ostream& os, const BranchPath& path) {
    os << "turn_index,time";
    for (int i = 0; i < path.dim; ++i) os << ",x" << i;
    os << "\n";
    const auto row = [&](std::size_t idx, double t, const Vec& pos) {
        os << idx << "," << fmt(t);
        for (int i = 0; i < path.dim; ++i) os << "," << fmt(pos[i]);
        os << "\n";
    };
    row(0, 0.0, Vec::zero(path.dim));
    for (std::size_t i = 0; i < path.turn_times.size(); ++i)
        row(i + 1, path.turn_times[i], branch_position(path, path.turn_times[i]));
    row(path.turn_times.size() + 1, path.horizon, branch_endpoint(path));
}

void write_fe_csv(std::ostream& os, const FeGrid& grid, const FeParams& params) {
    os << "# rate=" << fmt(params.rate) << " r=" << fmt(params.r)
       << " tmax=" << fmt(params.t_max) << " dmax=" << fmt(params.d_max)
       << " dt=" << fmt(params.dt) << " dd=" << fmt(params.dd)
       << " nalpha=" << params.n_alpha << " ns=" << params.n_s << "\n";
    os << "t,d,q\n";
    for (std::size_t i = 0; i < grid.nt; ++i)
        for (std::size_t j = 0; j < grid.nd; ++j)
            os << fmt(grid.t_of(i)) << "," << fmt(grid.d_of(j)) << ","
               << fmt(grid.at(i, j)) << "\n";
}

}  // namespace yule
