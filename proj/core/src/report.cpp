#include "evotest/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "evotest/errors.hpp"
#include "evotest/trace.hpp"

namespace evotest {

namespace {

struct Accumulator {
  int runs = 0;
  double line = 0, branch = 0, function = 0;

  void add(const CoverageReport& c) {
    ++runs;
    line += c.line;
    branch += c.branch;
    function += c.function;
  }
  CoverageRow row(const std::string& method) const {
    return {method, runs, line / runs, branch / runs, function / runs};
  }
};

std::vector<CoverageRow> rows(const std::map<std::string, Accumulator>& acc) {
  std::vector<CoverageRow> out;
  for (const auto& [method, a] : acc) {
    if (a.runs > 0) out.push_back(a.row(method));
  }
  return out;
}

Json rows_json(const std::vector<CoverageRow>& rs) {
  Json out = Json::array();
  for (const auto& r : rs) {
    out.push_back({{"method", r.method},
                   {"runs", r.runs},
                   {"line", r.line},
                   {"branch", r.branch},
                   {"function", r.function}});
  }
  return out;
}

std::string rows_text(const std::string& title, const std::vector<CoverageRow>& rs) {
  std::string out = title + "\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "  %-28s %5s %9s %9s %9s\n", "method", "runs", "line",
                "branch", "function");
  out += buf;
  if (rs.empty()) return out + "  (no runs)\n";
  for (const auto& r : rs) {
    std::snprintf(buf, sizeof buf, "  %-28s %5d %8.2f%% %8.2f%% %8.2f%%\n", r.method.c_str(),
                  r.runs, r.line * 100, r.branch * 100, r.function * 100);
    out += buf;
  }
  return out;
}

}  // namespace

TraceReport build_report(const std::filesystem::path& dir, std::ostream* warnings) {
  TraceReport report;
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  if (std::filesystem::is_directory(dir, ec)) {
    for (auto it = std::filesystem::recursive_directory_iterator(dir, ec);
         !ec && it != std::filesystem::recursive_directory_iterator(); it.increment(ec)) {
      if (it->is_regular_file() && it->path().extension() == ".jsonl") files.push_back(it->path());
    }
  }
  std::sort(files.begin(), files.end());

  std::map<std::string, Accumulator> search, final_cov;
  std::vector<RunSummary> evolutionary;
  for (const auto& file : files) {
    try {
      auto records = read_trace(file);
      const Json* summary = nullptr;
      for (const auto& r : records) {
        if (r.at("type") == "summary") summary = &r;
      }
      if (!summary) throw Error(ErrorKind::kTrace, file.string() + ": no summary record");
      auto run = run_summary_from_json(*summary);
      const auto method = summary->value("method", std::string("evolutionary"));
      ++report.traces;
      if (run.coverage_search) search[method].add(*run.coverage_search);
      if (run.coverage_final) final_cov[method].add(*run.coverage_final);
      if (method == "evolutionary") evolutionary.push_back(std::move(run));
    } catch (const std::exception& e) {
      report.skipped.push_back(file.string());
      if (warnings) *warnings << "warning: skipping trace " << file.string() << ": " << e.what() << "\n";
    }
  }
  report.search_coverage = rows(search);
  report.final_coverage = rows(final_cov);
  report.resolution = resolution_stats(evolutionary);
  return report;
}

Json to_json(const TraceReport& report) {
  return {{"traces", report.traces},
          {"skipped", report.skipped},
          {"search_coverage", rows_json(report.search_coverage)},
          {"final_coverage", rows_json(report.final_coverage)},
          {"resolution", to_json(report.resolution)}};
}

std::string render_text(const TraceReport& report) {
  std::string out = "traces read: " + std::to_string(report.traces) +
                    ", skipped: " + std::to_string(report.skipped.size()) + "\n\n";
  out += rows_text("Edge-case coverage at end of search", report.search_coverage) + "\n";
  out += rows_text("Final test file coverage", report.final_coverage) + "\n";
  out += "Resolution by iteration count\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "  %6s %5s %9s %16s\n", "stages", "runs", "resolved",
                "mean wall (ms)");
  out += buf;
  for (const auto& [stages, bin] : report.resolution.by_stages) {
    std::snprintf(buf, sizeof buf, "  %6d %5d %9d %16.1f\n", stages, bin.runs, bin.resolved,
                  bin.mean_wall_time_ms);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "  overall resolution rate: %.4f (%d/%d)\n",
                report.resolution.rate(), report.resolution.resolved, report.resolution.runs);
  out += buf;
  return out;
}

}  // namespace evotest
