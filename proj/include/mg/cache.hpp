#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mg/solver.hpp"

namespace mg {

enum class CostMode { WallClock, DeterministicCost };

std::string to_string(CostMode m);
CostMode cost_mode_from_string(const std::string& s);

/// One solver run. Immutable once written to the cache.
struct RunRecord {
  std::string benchmark_id;
  std::string metagrammar_id;
  std::string metagrammar_digest;
  std::string solver_id;
  double timeout = 0.0;
  CostMode cost_mode = CostMode::WallClock;
  SolveStatus status = SolveStatus::Error;
  double runtime_seconds = 0.0;
  std::uint64_t cost = 0;
  std::optional<std::string> solution_text;
  std::string message;
  std::string timestamp;

  /// (benchmark, metagrammar digest, solver, timeout, cost mode).
  std::string key() const;

  std::string to_json_line() const;
  static RunRecord from_json_line(const std::string& line);
};

std::string cache_key(const std::string& benchmark_id, const std::string& metagrammar_digest,
                      const std::string& solver_id, double timeout, CostMode mode);

/// Current UTC time in ISO-8601 form.
std::string utc_timestamp();

/// Append-only JSON-lines store of run records. Appends take an exclusive
/// advisory lock on the file so concurrent processes do not interleave lines.
/// The first record for a key wins.
class ResultsCache {
 public:
  /// In-memory cache, nothing persisted.
  ResultsCache() = default;
  /// Loads `file` if it exists; new records are appended to it.
  explicit ResultsCache(std::filesystem::path file);

  std::optional<RunRecord> find(const std::string& key) const;
  void append(const RunRecord& r);

  std::vector<RunRecord> records() const;
  std::size_t size() const;

 private:

  std::optional<std::filesystem::path> file_;
  mutable std::mutex mutex_;
  std::vector<RunRecord> records_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace mg
