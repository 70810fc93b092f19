#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "evotest/metrics.hpp"

namespace evotest {

/// Mean coverage of one method over the runs that reported it.
struct CoverageRow {
  std::string method;
  int runs = 0;
  double line = 0;
  double branch = 0;
  double function = 0;
};

struct TraceReport {
  int traces = 0;
  std::vector<std::string> skipped;
  /// Edge-case batches at the end of the search, per method.
  std::vector<CoverageRow> search_coverage;
  /// Synthesized test files, per method.
  std::vector<CoverageRow> final_coverage;
  /// Evolutionary runs only.
  ResolutionStats resolution;
};

/// Reads every *.jsonl trace under `dir` (recursively, in path order).
/// Unreadable or corrupted traces are listed in `skipped` and reported to
/// `warnings`.
TraceReport build_report(const std::filesystem::path& dir, std::ostream* warnings = nullptr);

Json to_json(const TraceReport& report);
std::string render_text(const TraceReport& report);

}  // namespace evotest
