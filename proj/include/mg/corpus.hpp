#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mg/evaluator.hpp"

namespace mg {

enum class ParseStatus { Ok, Unsupported, Error };

std::string to_string(ParseStatus s);

struct BenchmarkMeta {
  std::string id;    // content hash of the file
  std::string path;  // relative to the corpus root, '/'-separated
  std::string category;
  ParseStatus parse_status = ParseStatus::Ok;
  std::string message;
};

/// Relative path -> category. Lines are `path,category`; a leading
/// `path,category` header line and blank lines are skipped.
using Manifest = std::map<std::string, std::string>;

Manifest load_manifest(const std::filesystem::path& file);

/// Parses every `.sl` file below `root`, sorted by relative path. Files not
/// in the manifest get category "uncategorized".
std::vector<BenchmarkMeta> scan_corpus(const std::filesystem::path& root, const Manifest& manifest = {});

struct Split {
  std::vector<BenchmarkMeta> training;
  std::vector<BenchmarkMeta> holdout;
  std::vector<std::string> warnings;
};

/// Takes `per_category` parseable benchmarks from each category uniformly at
/// random without replacement; the rest of the parseable ones form the holdout.
/// Categories with fewer benchmarks contribute all of them, with a warning.
Split stratified_sample(const std::vector<BenchmarkMeta>& metas, std::size_t per_category, std::uint64_t seed);

/// Parses the listed benchmarks from `root`. Metas that are not parseable are skipped.
std::vector<Benchmark> load_benchmarks(const std::filesystem::path& root, const std::vector<BenchmarkMeta>& metas);

}  // namespace mg
