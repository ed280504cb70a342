#include "kamlie/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kamlie {

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::string manifest_hash(const RunConfig& c) { return hex64(fnv1a(std::string(kCodeVersion) + "\n" + canonical_text(c))); }

std::filesystem::path run_directory(const RunConfig& c, bool create) {
  const std::filesystem::path dir = std::filesystem::path(c.output_dir) / manifest_hash(c);
  if (create) std::filesystem::create_directories(dir);
  return dir;
}

void write_manifest(const std::filesystem::path& dir, const RunConfig& c) {
  std::ofstream os(dir / "manifest.txt", std::ios::binary);
  os << "hash = " << manifest_hash(c) << "\n"
     << "code_version = " << kCodeVersion << "\n"
     << canonical_text(c);
  if (!os) throw std::runtime_error("cannot write manifest in " + dir.string());
}

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::string hash, std::vector<std::string> columns)
    : hash_(std::move(hash)), width_(columns.size()) {
  text_ = "run";
  for (const auto& c : columns) text_ += "," + c;
  text_ += "\n";
}

CsvWriter& CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::logic_error("CsvWriter: row width");
  text_ += hash_;
  for (std::string c : cells) {
    for (char& ch : c)
      if (ch == ',' || ch == '\n') ch = ';';
    text_ += "," + c;
  }
  text_ += "\n";
  return *this;
}

void CsvWriter::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  os << text_;
  if (!os) throw std::runtime_error("cannot write " + path.string());
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  throw std::runtime_error("csv: no column `" + name + "`");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  if (std::getline(in, line)) t.columns = split(line);
  while (std::getline(in, line))
    if (!line.empty()) t.rows.push_back(split(line));
  return t;
}

}  // namespace kamlie
