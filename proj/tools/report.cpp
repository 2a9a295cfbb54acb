// report.cpp

#include "report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace snspdcli {

namespace fs = std::filesystem;

std::string format_sig6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t fnv1a64_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a64(ss.str());
}

void atomic_write_text(const fs::path& path, const std::string& content) {
  fs::path dir = path.parent_path();
  if (!dir.empty()) fs::create_directories(dir);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

std::string hex16(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string utc_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

} // namespace

Report::Report(std::string command, std::string title)
    : command_(std::move(command)), title_(std::move(title)) {}

void Report::manifest(const std::string& key, const std::string& value) {
  manifest_.emplace_back(key, value);
}

void Report::manifest(const std::string& key, double value) {
  manifest_.emplace_back(key, format_sig6(value));
}

void Report::manifest_input(const std::string& name, const fs::path& path) {
  manifest_.emplace_back("input." + name, path.string());
}

void Report::manifest_output(const std::string& name, const fs::path& path) {
  manifest_.emplace_back("output." + name,
                         path.filename().string() + " fnv1a:" + hex16(fnv1a64_file(path)));
}

void Report::row(const std::string& quantity, double value, const std::string& unit) {
  rows_.push_back(quantity + "," + format_sig6(value) + ",," + unit);
}

void Report::row(const std::string& quantity, double value, double unc,
                 const std::string& unit) {
  rows_.push_back(quantity + "," + format_sig6(value) + "," + format_sig6(unc) + "," + unit);
}

void Report::row_text(const std::string& quantity, const std::string& value,
                      const std::string& unit) {
  rows_.push_back(quantity + "," + value + ",," + unit);
}

void Report::write(const fs::path& path) const {
  std::string payload = "quantity,value,uncertainty,unit\n";
  for (const auto& r : rows_) payload += r + "\n";

  std::ostringstream os;
  os << "# " << title_ << "\n";
  os << "# manifest.command = " << command_ << "\n";
  os << "# manifest.version = 0.1.0\n";
  os << "# manifest.created = " << utc_now() << "\n";
  for (const auto& [k, v] : manifest_) os << "# manifest." << k << " = " << v << "\n";
  os << "# manifest.payload.fnv1a = " << hex16(fnv1a64(payload)) << "\n";
  os << payload;
  atomic_write_text(path, os.str());
}

} // namespace snspdcli
