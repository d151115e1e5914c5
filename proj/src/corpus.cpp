#include "mg/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mg/errors.hpp"
#include "mg/hash.hpp"
#include "mg/parser.hpp"

namespace mg {

namespace fs = std::filesystem;

std::string to_string(ParseStatus s) {
  switch (s) {
    case ParseStatus::Ok: return "ok";
    case ParseStatus::Unsupported: return "unsupported";
    case ParseStatus::Error: return "error";
  }
  return "error";
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string normalize_rel(std::string s) {
  std::replace(s.begin(), s.end(), '\\', '/');
  while (s.starts_with("./")) s.erase(0, 2);
  return s;
}

}  // namespace

Manifest load_manifest(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read manifest " + file.string());
  Manifest m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.starts_with("#")) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error(file.string() + ":" + std::to_string(lineno) + ": expected 'path,category'");
    }
    std::string path = normalize_rel(trim(line.substr(0, comma)));
    std::string category = trim(line.substr(comma + 1));
    if (lineno == 1 && path == "path" && category == "category") continue;
    if (path.empty() || category.empty()) {
      throw std::runtime_error(file.string() + ":" + std::to_string(lineno) + ": empty path or category");
    }
    m[path] = category;
  }
  return m;
}

std::vector<BenchmarkMeta> scan_corpus(const fs::path& root, const Manifest& manifest) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw std::runtime_error("not a directory: " + root.string());
  std::vector<fs::path> files;
  fs::recursive_directory_iterator it(root, ec);
  if (ec) throw std::runtime_error("cannot read directory " + root.string() + ": " + ec.message());
  for (const auto& entry : it) {
    if (entry.is_regular_file() && entry.path().extension() == ".sl") files.push_back(entry.path());
  }
  std::vector<BenchmarkMeta> metas;
  for (const auto& f : files) {
    BenchmarkMeta meta;
    meta.path = normalize_rel(fs::relative(f, root).generic_string());
    auto cat = manifest.find(meta.path);
    meta.category = cat == manifest.end() ? "uncategorized" : cat->second;
    try {
      const std::string text = read_file(f);
      meta.id = normalized_content_hash(text);
      parse_problem(text);
    } catch (const UnsupportedError& e) {
      meta.parse_status = ParseStatus::Unsupported;
      meta.message = e.what();
    } catch (const std::exception& e) {
      meta.parse_status = ParseStatus::Error;
      meta.message = e.what();
    }
    metas.push_back(std::move(meta));
  }
  std::sort(metas.begin(), metas.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
  return metas;
}

Split stratified_sample(const std::vector<BenchmarkMeta>& metas, std::size_t per_category, std::uint64_t seed) {
  if (per_category == 0) throw std::invalid_argument("per-category count must be positive");
  std::map<std::string, std::vector<const BenchmarkMeta*>> by_category;
  for (const auto& m : metas) {
    if (m.parse_status == ParseStatus::Ok) by_category[m.category].push_back(&m);
  }
  Split split;
  std::mt19937_64 rng(seed);
  for (auto& [category, members] : by_category) {
    if (members.size() < per_category) {
      split.warnings.push_back("category " + category + " has only " + std::to_string(members.size()) +
                               " parseable benchmarks; using all of them");
    }
    const std::size_t take = std::min(per_category, members.size());
    // Partial Fisher-Yates: the first `take` slots become the sample.
    for (std::size_t i = 0; i < take; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, members.size() - 1);
      std::swap(members[i], members[pick(rng)]);
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      (i < take ? split.training : split.holdout).push_back(*members[i]);
    }
  }
  const auto by_path = [](const auto& a, const auto& b) { return a.path < b.path; };
  std::sort(split.training.begin(), split.training.end(), by_path);
  std::sort(split.holdout.begin(), split.holdout.end(), by_path);
  return split;
}

std::vector<Benchmark> load_benchmarks(const fs::path& root, const std::vector<BenchmarkMeta>& metas) {
  std::vector<Benchmark> out;
  for (const auto& m : metas) {
    if (m.parse_status != ParseStatus::Ok) continue;
    out.push_back({m.id, m.category, parse_problem(read_file(root / m.path))});
  }
  return out;
}

}  // namespace mg
