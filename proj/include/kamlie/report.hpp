#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kamlie/config.hpp"

namespace kamlie {

inline constexpr const char* kCodeVersion = "kamlie 1.0.0";

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t x);

/// Hash of the canonical config text and the code version.
std::string manifest_hash(const RunConfig& c);

/// <output_dir>/<hash>, created on demand.
std::filesystem::path run_directory(const RunConfig& c, bool create);

/// Writes manifest.txt: hash, code version, canonical config.
void write_manifest(const std::filesystem::path& dir, const RunConfig& c);

/// Shortest decimal that reads back to the same double.
std::string fmt(double x);

/// Comma separated table with a header row; every row starts with the run hash.
class CsvWriter {
 public:
  CsvWriter(std::string hash, std::vector<std::string> columns);
  CsvWriter& row(const std::vector<std::string>& cells);
  std::string text() const { return text_; }
  void save(const std::filesystem::path& path) const;

 private:
  std::string hash_;
  std::size_t width_;
  std::string text_;
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  int column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace kamlie
