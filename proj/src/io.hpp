// io.hpp - file ingestion and emission
//
// Formats are plain text, inspectable and diff-friendly:
//   timestamps / series  one value per line, '#' header lines
//   histograms, sweeps   CSV tables with a '#'-prefixed metadata block
//   calibration, model   flat "key = value" records
// Numeric payloads are written at full round-trip precision. All
// writes go through a temp file and rename, so readers never observe a
// partial file.
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "simulator.hpp"
#include "types.hpp"

namespace snspd {

// One value (ps) per line; '#' lines and blank lines are skipped.
// Malformed lines raise ParseError carrying the 1-based line number.
std::vector<double> read_timestamps(const std::filesystem::path& path);
void write_timestamps(const std::filesystem::path& path, std::span<const double> delays,
                      const std::vector<std::string>& header_comments = {});

CalibrationChain read_calibration(const std::filesystem::path& path);
void write_calibration(const std::filesystem::path& path, const CalibrationChain& cal);

DetectorModel read_model(const std::filesystem::path& path);
ModelParams read_model_params(const std::filesystem::path& path);
void write_model(const std::filesystem::path& path, const ModelParams& params);

TimingHistogram read_histogram_csv(const std::filesystem::path& path);
void write_histogram_csv(const std::filesystem::path& path, const TimingHistogram& hist,
                         const std::vector<std::string>& header_comments = {});

BiasSweep read_sweep_csv(const std::filesystem::path& path);
void write_sweep_csv(const std::filesystem::path& path, const BiasSweep& sweep,
                     const std::vector<std::string>& header_comments = {});

PulseWaveform read_waveform_csv(const std::filesystem::path& path);
void write_waveform_csv(const std::filesystem::path& path, const PulseWaveform& waveform,
                        const std::vector<std::string>& header_comments = {});

// Atomically replaces `path` with `content` (temp file + rename).
void atomic_write(const std::filesystem::path& path, const std::string& content);

// Full-precision (round-trip) and fixed-significant-digit formatting.
std::string format_full(double v);
std::string format_sig(double v, int significant_digits = 6);

// FNV-1a 64-bit, used for report payload checksums.
std::uint64_t fnv1a64(std::string_view data);

} // namespace snspd
