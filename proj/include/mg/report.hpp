#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mg {

struct BenchmarkResult {
  std::string benchmark_id;
  std::string category;
  bool solved = false;
  double runtime_seconds = 0.0;
  std::uint64_t cost = 0;
};

struct ReportRow {
  std::string category;  // "total" for the totals row
  std::size_t total = 0;
  std::size_t solved = 0;
  std::size_t unique_vs_baseline = 0;
  double avg_time_seconds = 0.0;  // over solved benchmarks; 0 if none solved
  double avg_cost = 0.0;          // over solved benchmarks
};

struct ReportColumn {
  std::string metagrammar;
  std::vector<ReportRow> rows;  // one per category, then the totals row
};

/// Per-category comparison of a candidate against a baseline. The
/// baseline's unique count is measured against the candidate.
struct Report {
  std::vector<std::string> categories;
  ReportColumn baseline;
  ReportColumn candidate;
};

/// Throws std::invalid_argument if the two result sets do not cover the same
/// benchmark ids, or a benchmark appears twice.
Report make_report(const std::string& candidate_name, const std::vector<BenchmarkResult>& candidate,
                   const std::string& baseline_name, const std::vector<BenchmarkResult>& baseline);

/// Aligned table, average times rounded to 0.1 s.
std::string render_text(const Report& r);
std::string render_csv(const Report& r);

}  // namespace mg
