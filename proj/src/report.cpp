#include "mg/report.hpp"

#include <algorithm>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

namespace mg {

namespace {

std::string printf_string(const char* fmt, ...) __attribute__((format(printf, 1, 2)));

std::string printf_string(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  va_list copy;
  va_copy(copy, args);
  const int n = std::vsnprintf(nullptr, 0, fmt, copy);
  va_end(copy);
  std::string out(static_cast<std::size_t>(n) + 1, '\0');
  std::vsnprintf(out.data(), out.size(), fmt, args);
  va_end(args);
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

using ResultMap = std::map<std::string, const BenchmarkResult*>;

ResultMap index_results(const std::vector<BenchmarkResult>& results, const std::string& name) {
  ResultMap m;
  for (const auto& r : results) {
    if (!m.emplace(r.benchmark_id, &r).second) {
      throw std::invalid_argument("benchmark " + r.benchmark_id + " appears twice in results for " + name);
    }
  }
  return m;
}

ReportRow make_row(const std::string& category, const std::vector<BenchmarkResult>& results, const ResultMap& other,
                   bool all_categories) {
  ReportRow row;
  row.category = category;
  double time = 0.0;
  double cost = 0.0;
  for (const auto& r : results) {
    if (!all_categories && r.category != category) continue;
    ++row.total;
    if (!r.solved) continue;
    ++row.solved;
    time += r.runtime_seconds;
    cost += static_cast<double>(r.cost);
    if (!other.at(r.benchmark_id)->solved) ++row.unique_vs_baseline;
  }
  if (row.solved > 0) {
    row.avg_time_seconds = time / static_cast<double>(row.solved);
    row.avg_cost = cost / static_cast<double>(row.solved);
  }
  return row;
}

ReportColumn make_column(const std::string& name, const std::vector<BenchmarkResult>& results,
                         const std::vector<std::string>& categories, const ResultMap& other) {
  ReportColumn col{name, {}};
  for (const auto& c : categories) col.rows.push_back(make_row(c, results, other, false));
  col.rows.push_back(make_row("total", results, other, true));
  return col;
}

}  // namespace

Report make_report(const std::string& candidate_name, const std::vector<BenchmarkResult>& candidate,
                   const std::string& baseline_name, const std::vector<BenchmarkResult>& baseline) {
  const ResultMap cand = index_results(candidate, candidate_name);
  const ResultMap base = index_results(baseline, baseline_name);
  if (cand.size() != base.size()) throw std::invalid_argument("result sets cover different benchmarks");
  for (const auto& [id, r] : cand) {
    auto it = base.find(id);
    if (it == base.end()) throw std::invalid_argument("benchmark " + id + " missing from " + baseline_name);
    if (it->second->category != r->category) throw std::invalid_argument("benchmark " + id + " has two categories");
  }
  std::set<std::string> cats;
  for (const auto& r : candidate) cats.insert(r.category);
  Report rep;
  rep.categories.assign(cats.begin(), cats.end());
  rep.baseline = make_column(baseline_name, baseline, rep.categories, cand);
  rep.candidate = make_column(candidate_name, candidate, rep.categories, base);
  return rep;
}

std::string render_text(const Report& r) {
  const int name_w = static_cast<int>(
      std::max<std::size_t>(11, std::max(r.baseline.metagrammar.size(), r.candidate.metagrammar.size())));
  std::size_t widest = 8;
  for (const auto& c : r.categories) widest = std::max(widest, c.size());
  const int cat_w = static_cast<int>(widest);
  std::string out = printf_string("%-*s  %-*s  %6s  %6s  %6s  %9s  %12s\n", name_w, "metagrammar", cat_w, "category",
                                  "total", "solved", "unique", "avg_time", "avg_cost");
  for (const ReportColumn* col : {&r.baseline, &r.candidate}) {
    for (const auto& row : col->rows) {
      out += printf_string("%-*s  %-*s  %6zu  %6zu  %6zu  %8.1fs  %12.1f\n", name_w, col->metagrammar.c_str(), cat_w,
                           row.category.c_str(), row.total, row.solved, row.unique_vs_baseline, row.avg_time_seconds,
                           row.avg_cost);
    }
  }
  return out;
}

std::string render_csv(const Report& r) {
  std::string out = "metagrammar,category,total,solved,unique,avg_time_seconds,avg_cost\n";
  for (const ReportColumn* col : {&r.baseline, &r.candidate}) {
    for (const auto& row : col->rows) {
      out += printf_string("%s,%s,%zu,%zu,%zu,%.3f,%.1f\n", csv_field(col->metagrammar).c_str(),
                           csv_field(row.category).c_str(), row.total,
                           row.solved, row.unique_vs_baseline, row.avg_time_seconds, row.avg_cost);
    }
  }
  return out;
}

}  // namespace mg
