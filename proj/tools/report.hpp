// report.hpp - machine-readable report files with an embedded run manifest
//
// A report is a CSV table of quantity,value,uncertainty,unit rows with
// a '#'-prefixed metadata block recording the command, its inputs, the
// full configuration snapshot, the toolkit version, and checksums of
// the payload and of every data file the run emitted. Values are
// printed at 6 significant digits; data files carry full precision.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace snspdcli {

std::string format_sig6(double v);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);
std::uint64_t fnv1a64(const std::string& data);

// temp file + rename
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

class Report {
public:
  Report(std::string command, std::string title);

  void manifest(const std::string& key, const std::string& value);
  void manifest(const std::string& key, double value);
  void manifest_input(const std::string& name, const std::filesystem::path& path);
  // records the side file's name and checksum in the manifest
  void manifest_output(const std::string& name, const std::filesystem::path& path);

  void row(const std::string& quantity, double value, const std::string& unit);
  void row(const std::string& quantity, double value, double unc, const std::string& unit);
  void row_text(const std::string& quantity, const std::string& value,
                const std::string& unit);

  void write(const std::filesystem::path& path) const;

private:
  std::string command_;
  std::string title_;
  std::vector<std::pair<std::string, std::string>> manifest_;
  std::vector<std::string> rows_;
};

} // namespace snspdcli
