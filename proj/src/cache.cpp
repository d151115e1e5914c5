#include "mg/cache.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace mg {
namespace {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

class FileLock {
 public:
  explicit FileLock(const std::filesystem::path& p) {
    fd_ = ::open(p.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw std::runtime_error("cannot open cache file " + p.string());
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw std::runtime_error("cannot lock cache file " + p.string());
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

  void write_all(const std::string& s) const {
    std::size_t done = 0;
    while (done < s.size()) {
      const ssize_t n = ::write(fd_, s.data() + done, s.size() - done);
      if (n < 0) throw std::runtime_error("cache write failed");
      done += static_cast<std::size_t>(n);
    }
  }

 private:
  int fd_ = -1;
};

}  // namespace

std::string to_string(CostMode m) { return m == CostMode::WallClock ? "wall_clock" : "deterministic_cost"; }

CostMode cost_mode_from_string(const std::string& s) {
  if (s == "wall_clock" || s == "wall") return CostMode::WallClock;
  if (s == "deterministic_cost" || s == "deterministic" || s == "cost") return CostMode::DeterministicCost;
  throw std::invalid_argument("unknown cost mode '" + s + "'");
}

std::string cache_key(const std::string& benchmark_id, const std::string& metagrammar_digest,
                      const std::string& solver_id, double timeout, CostMode mode) {
  return benchmark_id + "|" + metagrammar_digest + "|" + solver_id + "|" + format_double(timeout) + "|" +
         to_string(mode);
}

std::string RunRecord::key() const {
  return cache_key(benchmark_id, metagrammar_digest, solver_id, timeout, cost_mode);
}

std::string RunRecord::to_json_line() const {
  nlohmann::ordered_json j;
  j["benchmark_id"] = benchmark_id;
  j["metagrammar_id"] = metagrammar_id;
  j["metagrammar_digest"] = metagrammar_digest;
  j["solver_id"] = solver_id;
  j["timeout"] = timeout;
  j["cost_mode"] = to_string(cost_mode);
  j["status"] = to_string(status);
  j["runtime_seconds"] = runtime_seconds;
  j["cost"] = cost;
  j["solution"] = solution_text ? nlohmann::ordered_json(*solution_text) : nlohmann::ordered_json(nullptr);
  if (!message.empty()) j["message"] = message;
  j["timestamp"] = timestamp;
  return j.dump();
}

RunRecord RunRecord::from_json_line(const std::string& line) {
  const auto j = nlohmann::json::parse(line);
  RunRecord r;
  r.benchmark_id = j.at("benchmark_id").get<std::string>();
  r.metagrammar_id = j.at("metagrammar_id").get<std::string>();
  r.metagrammar_digest = j.at("metagrammar_digest").get<std::string>();
  r.solver_id = j.at("solver_id").get<std::string>();
  r.timeout = j.at("timeout").get<double>();
  r.cost_mode = cost_mode_from_string(j.at("cost_mode").get<std::string>());
  r.status = status_from_string(j.at("status").get<std::string>());
  r.runtime_seconds = j.at("runtime_seconds").get<double>();
  r.cost = j.at("cost").get<std::uint64_t>();
  if (j.contains("solution") && !j["solution"].is_null()) r.solution_text = j["solution"].get<std::string>();
  r.message = j.value("message", "");
  r.timestamp = j.value("timestamp", "");
  return r;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  ::gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ResultsCache::ResultsCache(std::filesystem::path file) : file_(std::move(file)) {
  std::ifstream in(*file_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      RunRecord r = RunRecord::from_json_line(line);
      if (index_.emplace(r.key(), records_.size()).second) records_.push_back(std::move(r));
    } catch (const std::exception&) {
      // torn trailing line from an interrupted writer
    }
  }
}

std::optional<RunRecord> ResultsCache::find(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return records_[it->second];
}

void ResultsCache::append(const RunRecord& r) {
  std::lock_guard lock(mutex_);
  if (!index_.emplace(r.key(), records_.size()).second) return;
  records_.push_back(r);
  if (file_) {
    FileLock lock_file(*file_);
    lock_file.write_all(r.to_json_line() + "\n");
  }
}

std::vector<RunRecord> ResultsCache::records() const {
  std::lock_guard lock(mutex_);
  return records_;
}

std::size_t ResultsCache::size() const {
  std::lock_guard lock(mutex_);
  return records_.size();
}

}  // namespace mg
