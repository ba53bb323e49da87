#ifndef YULE_CSV_HPP
#define YULE_CSV_HPP

#include <ostream>
#include <string>

#include "yule/branch.hpp"
#include "yule/fe.hpp"
#include "yule/tree.hpp"

namespace yule {

// Locale-independent shortest round-trip formatting ('.' decimal always).
std::string fmt(double x);

// Header: segment_id,parent_id,birth_time,x0..x{D-1},y0..y{D-1}
// (start coordinates, then end coordinates).
void write_segments_csv(std::ostream& os, const Tree& tree);

// Header: trial,seed,radius,total_length,leaf_count,branch_points
// [,hit_0..hit_{P-1}]. Failed trials are excluded.
void write_trials_csv(std::ostream& os, const TrialBatch& batch,
                      std::size_t n_probes);

// Header: turn_index,time,x0..x{D-1}; rows at time 0, every turn, and the
// final endpoint.
void write_branch_csv(std::ostream& os, const BranchPath& path);

// Metadata comment line with all parameters, then t,d,q rows.
void write_fe_csv(std::ostream& os, const FeGrid& grid, const FeParams& params);

}  // namespace yule

#endif  // YULE_CSV_HPP
