// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#ifndef VRVI_TOOLS_CSV_HPP_
#define VRVI_TOOLS_CSV_HPP_

#include <array>
#include <string>
#include <vector>

namespace vrvi_cli {

// One trace row in the fixed column order:
//   iter, epoch, oracle_h_calls, oracle_g_calls,
//   dist_sq, q_gap, res_norm, cons_viol, obj_gap, wall_ms.
using TraceRow = std::array<double, 10>;

inline constexpr const char* kTraceHeader =
    "iter,epoch,oracle_h_calls,oracle_g_calls,dist_sq,q_gap,res_norm,cons_viol,obj_gap,wall_ms";

// Formats one row: count columns as integers when integral, metric columns
// with round-trip precision, NaN as an empty field, wall_ms with ms precision.
std::string format_trace_row(const TraceRow& row);

// Writes header + rows; throws CliError on I/O failure.
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows);

// Averages rows across seeds, grouped by the iter column (union of iteration
// indices, sorted). A metric is empty in the mean when it is missing in any
// contributing row.
std::vector<TraceRow> mean_by_iter(const std::vector<std::vector<TraceRow>>& per_seed);

}  // namespace vrvi_cli

#endif  // VRVI_TOOLS_CSV_HPP_
