// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include "csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "config.hpp"

namespace vrvi_cli {

namespace {

std::string format_count(double v) {
  char buf[64];
  double r = std::round(v);
  if (std::abs(v - r) < 1e-9 && std::abs(v) < 9.0e15)
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(r));
  else
    std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_metric(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_wall(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string format_trace_row(const TraceRow& row) {
  std::string out;
  for (int c = 0; c < 10; ++c) {
    if (c > 0) out += ",";
    if (c < 4)
      out += format_count(row[static_cast<std::size_t>(c)]);
    else if (c == 9)
      out += format_wall(row[9]);
    else
      out += format_metric(row[static_cast<std::size_t>(c)]);
  }
  return out;
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows) {
  std::ofstream out(path);
  if (!out) throw CliError{2, "cannot open output file " + path};
  out << kTraceHeader << "\n";
  for (const TraceRow& row : rows) out << format_trace_row(row) << "\n";
  out.flush();
  if (!out) throw CliError{2, "write failed for " + path};
}

std::vector<TraceRow> mean_by_iter(const std::vector<std::vector<TraceRow>>& per_seed) {
  std::map<long long, std::pair<TraceRow, int>> groups;  // iter -> (sum, count)
  for (const auto& rows : per_seed) {
    for (const TraceRow& row : rows) {
      auto key = static_cast<long long>(row[0]);
      auto [it, fresh] = groups.try_emplace(key, std::pair<TraceRow, int>{TraceRow{}, 0});
      TraceRow& acc = it->second.first;
      if (fresh) acc.fill(0.0);
      for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += row[c];  // NaN poisons the mean
      ++it->second.second;
    }
  }
  std::vector<TraceRow> out;
  out.reserve(groups.size());
  for (const auto& [iter, pair] : groups) {
    TraceRow mean = pair.first;
    for (double& v : mean) v /= pair.second;
    mean[0] = static_cast<double>(iter);
    out.push_back(mean);
  }
  return out;
}

}  // namespace vrvi_cli
