// io.cpp - parsers and writers for the toolkit's file formats

#include "io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace snspd {

namespace fs = std::filesystem;

namespace {

std::string strip(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool is_comment_or_blank(const std::string& line) {
  std::string t = strip(line);
  return t.empty() || t[0] == '#';
}

double parse_number(const std::string& token, const fs::path& path, std::size_t line_no) {
  std::string t = strip(token);
  if (t.empty())
    fail(ErrorCode::parse_error,
         path.string() + ":" + std::to_string(line_no) + ": empty numeric field");
  double v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    fail(ErrorCode::parse_error,
         path.string() + ":" + std::to_string(line_no) + ": not a number: '" + t + "'");
  return v;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open " + path.string());
  return in;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// key = value records shared by calibration and model files
std::map<std::string, std::string> read_keyvalue(const fs::path& path,
                                                 std::map<std::string, std::size_t>* lines = nullptr) {
  std::ifstream in = open_input(path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::parse_error,
           path.string() + ":" + std::to_string(line_no) + ": expected 'key = value'");
    std::string key = strip(line.substr(0, eq));
    std::string val = strip(line.substr(eq + 1));
    if (key.empty())
      fail(ErrorCode::parse_error,
           path.string() + ":" + std::to_string(line_no) + ": empty key");
    kv[key] = val;
    if (lines) (*lines)[key] = line_no;
  }
  return kv;
}

struct KeyValueReader {
  const fs::path& path;
  std::map<std::string, std::string> kv;
  std::map<std::string, std::size_t> lines;

  explicit KeyValueReader(const fs::path& p) : path(p) { kv = read_keyvalue(p, &lines); }

  bool has(const std::string& key) const { return kv.count(key) > 0; }

  double required(const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end())
      fail(ErrorCode::missing_field, path.string() + ": missing field '" + key + "'");
    return parse_number(it->second, path, lines[key]);
  }

  double optional_or(const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    return parse_number(it->second, path, lines[key]);
  }
};

} // namespace

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_sig(double v, int significant_digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, v);
  return buf;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void atomic_write(const fs::path& path, const std::string& content) {
  fs::path dir = path.parent_path();
  if (!dir.empty()) fs::create_directories(dir);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) fail(ErrorCode::io_error, "cannot write " + tmp.string());
    out << content;
    if (!out) fail(ErrorCode::io_error, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::io_error, "rename failed for " + path.string() + ": " + ec.message());
}

std::vector<double> read_timestamps(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    out.push_back(parse_number(line, path, line_no));
  }
  if (out.empty()) fail(ErrorCode::empty_input, path.string() + ": no data lines");
  return out;
}

void write_timestamps(const fs::path& path, std::span<const double> delays,
                      const std::vector<std::string>& header_comments) {
  std::ostringstream os;
  for (const auto& c : header_comments) os << "# " << c << "\n";
  for (double d : delays) os << format_full(d) << "\n";
  atomic_write(path, os.str());
}

CalibrationChain read_calibration(const fs::path& path) {
  KeyValueReader r(path);
  CalibrationChain cal;
  cal.p_m = r.required("p_m_w");
  cal.r_switch = r.required("r_switch");
  cal.r_att[0] = r.required("r_att_1");
  cal.r_att[1] = r.required("r_att_2");
  cal.r_att[2] = r.required("r_att_3");
  cal.wavelength = r.required("wavelength_nm");
  // calibration-certificate factors carry negligible uncertainty and
  // default to their ideal values when omitted
  cal.cf = r.optional_or("cf", 1.0);
  cal.nlf_high = r.optional_or("nlf_high", 1.0);
  cal.nlf_low = r.optional_or("nlf_low", 1.0);
  cal.r_pc = r.optional_or("r_pc", 0.0);
  cal.rel_unc_p_m = r.optional_or("rel_unc_p_m", 0.0);
  cal.rel_unc_r_switch = r.optional_or("rel_unc_r_switch", 0.0);
  cal.rel_unc_r_att = r.optional_or("rel_unc_r_att", 0.0);
  cal.rel_unc_pcr_dcr = r.optional_or("rel_unc_pcr_dcr", 0.0);
  return validate(cal);
}

void write_calibration(const fs::path& path, const CalibrationChain& cal) {
  std::ostringstream os;
  os << "# calibration chain\n";
  os << "p_m_w = " << format_full(cal.p_m) << "\n";
  os << "r_switch = " << format_full(cal.r_switch) << "\n";
  for (int i = 0; i < 3; ++i)
    os << "r_att_" << (i + 1) << " = " << format_full(cal.r_att[i]) << "\n";
  os << "cf = " << format_full(cal.cf) << "\n";
  os << "nlf_high = " << format_full(cal.nlf_high) << "\n";
  os << "nlf_low = " << format_full(cal.nlf_low) << "\n";
  os << "r_pc = " << format_full(cal.r_pc) << "\n";
  os << "wavelength_nm = " << format_full(cal.wavelength) << "\n";
  os << "rel_unc_p_m = " << format_full(cal.rel_unc_p_m) << "\n";
  os << "rel_unc_r_switch = " << format_full(cal.rel_unc_r_switch) << "\n";
  os << "rel_unc_r_att = " << format_full(cal.rel_unc_r_att) << "\n";
  os << "rel_unc_pcr_dcr = " << format_full(cal.rel_unc_pcr_dcr) << "\n";
  atomic_write(path, os.str());
}

ModelParams read_model_params(const fs::path& path) {
  KeyValueReader r(path);
  ModelParams p;
  p.i_sat = r.optional_or("i_sat_ua", p.i_sat);
  p.sde_max = r.optional_or("sde_max", p.sde_max);
  p.sigmoid_steepness = r.optional_or("sigmoid_steepness", p.sigmoid_steepness);
  p.sigma_setup = r.optional_or("sigma_setup_ps", p.sigma_setup);
  p.sigma_noise = r.optional_or("sigma_noise_ps", p.sigma_noise);
  p.dcr = r.optional_or("dcr_cps", p.dcr);
  p.intrinsic_sigma_plateau = r.optional_or("intrinsic_sigma_plateau_ps", p.intrinsic_sigma_plateau);
  p.intrinsic_sigma_floor = r.optional_or("intrinsic_sigma_floor_ps", p.intrinsic_sigma_floor);
  p.inflexion = r.optional_or("inflexion_normalized", p.inflexion);
  p.flatten = r.optional_or("flatten_normalized", p.flatten);
  p.tail_tau_max = r.optional_or("tail_tau_max_ps", p.tail_tau_max);
  return p;
}

DetectorModel read_model(const fs::path& path) {
  return build_model(read_model_params(path));
}

void write_model(const fs::path& path, const ModelParams& p) {
  std::ostringstream os;
  os << "# detector model\n";
  os << "i_sat_ua = " << format_full(p.i_sat) << "\n";
  os << "sde_max = " << format_full(p.sde_max) << "\n";
  os << "sigmoid_steepness = " << format_full(p.sigmoid_steepness) << "\n";
  os << "sigma_setup_ps = " << format_full(p.sigma_setup) << "\n";
  os << "sigma_noise_ps = " << format_full(p.sigma_noise) << "\n";
  os << "dcr_cps = " << format_full(p.dcr) << "\n";
  os << "intrinsic_sigma_plateau_ps = " << format_full(p.intrinsic_sigma_plateau) << "\n";
  os << "intrinsic_sigma_floor_ps = " << format_full(p.intrinsic_sigma_floor) << "\n";
  os << "inflexion_normalized = " << format_full(p.inflexion) << "\n";
  os << "flatten_normalized = " << format_full(p.flatten) << "\n";
  os << "tail_tau_max_ps = " << format_full(p.tail_tau_max) << "\n";
  atomic_write(path, os.str());
}

TimingHistogram read_histogram_csv(const fs::path& path) {
  std::ifstream in = open_input(path);
  TimingHistogram h;
  bool have_bw = false, have_origin = false, header_seen = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = strip(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      std::size_t eq = t.find('=');
      if (eq != std::string::npos) {
        std::string key = strip(t.substr(1, eq - 1));
        std::string val = strip(t.substr(eq + 1));
        if (key == "bin_width_ps") {
          h.bin_width = parse_number(val, path, line_no);
          have_bw = true;
        } else if (key == "origin_ps") {
          h.origin = parse_number(val, path, line_no);
          have_origin = true;
        }
      }
      continue;
    }
    if (!header_seen) { // column header line
      header_seen = true;
      continue;
    }
    auto fields = split_csv(t);
    if (fields.size() != 2)
      fail(ErrorCode::parse_error,
           path.string() + ":" + std::to_string(line_no) + ": expected 'bin_center,count'");
    double c = parse_number(fields[1], path, line_no);
    if (c < 0 || c != std::floor(c))
      fail(ErrorCode::parse_error, path.string() + ":" + std::to_string(line_no) +
                                       ": count must be a non-negative integer");
    h.counts.push_back(static_cast<std::uint64_t>(c));
    h.total_events += static_cast<std::uint64_t>(c);
  }
  if (!have_bw) fail(ErrorCode::missing_field, path.string() + ": missing field 'bin_width_ps'");
  if (!have_origin) fail(ErrorCode::missing_field, path.string() + ": missing field 'origin_ps'");
  if (h.counts.empty()) fail(ErrorCode::empty_input, path.string() + ": no bins");
  return validate(h);
}

void write_histogram_csv(const fs::path& path, const TimingHistogram& hist,
                         const std::vector<std::string>& header_comments) {
  validate(hist);
  std::ostringstream os;
  for (const auto& c : header_comments) os << "# " << c << "\n";
  os << "# bin_width_ps = " << format_full(hist.bin_width) << "\n";
  os << "# origin_ps = " << format_full(hist.origin) << "\n";
  os << "# total_events = " << hist.total_events << "\n";
  os << "bin_center_ps,count\n";
  for (std::size_t i = 0; i < hist.size(); ++i)
    os << format_full(hist.bin_center(i)) << "," << hist.counts[i] << "\n";
  atomic_write(path, os.str());
}

BiasSweep read_sweep_csv(const fs::path& path) {
  std::ifstream in = open_input(path);
  BiasSweep sweep;
  bool header_seen = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    auto fields = split_csv(strip(line));
    if (fields.size() != 6)
      fail(ErrorCode::parse_error,
           path.string() + ":" + std::to_string(line_no) +
               ": expected 'bias_ua,sde,sde_unc,dcr_cps,jitter_fwhm_ps,jitter_m20db_ps'");
    BiasSweepRecord r;
    r.bias = parse_number(fields[0], path, line_no);
    r.sde = parse_number(fields[1], path, line_no);
    r.sde_unc = parse_number(fields[2], path, line_no);
    r.dcr = parse_number(fields[3], path, line_no);
    if (!strip(fields[4]).empty()) r.jitter_fwhm = parse_number(fields[4], path, line_no);
    if (!strip(fields[5]).empty()) r.jitter_m20db = parse_number(fields[5], path, line_no);
    sweep.records.push_back(r);
  }
  if (sweep.empty()) fail(ErrorCode::empty_input, path.string() + ": no sweep records");
  return validate(sweep);
}

void write_sweep_csv(const fs::path& path, const BiasSweep& sweep,
                     const std::vector<std::string>& header_comments) {
  validate(sweep);
  std::ostringstream os;
  for (const auto& c : header_comments) os << "# " << c << "\n";
  os << "bias_ua,sde,sde_unc,dcr_cps,jitter_fwhm_ps,jitter_m20db_ps\n";
  for (const auto& r : sweep.records) {
    os << format_full(r.bias) << "," << format_full(r.sde) << "," << format_full(r.sde_unc)
       << "," << format_full(r.dcr) << ",";
    if (r.jitter_fwhm) os << format_full(*r.jitter_fwhm);
    os << ",";
    if (r.jitter_m20db) os << format_full(*r.jitter_m20db);
    os << "\n";
  }
  atomic_write(path, os.str());
}

PulseWaveform read_waveform_csv(const fs::path& path) {
  std::ifstream in = open_input(path);
  PulseWaveform w;
  bool have_dt = false, header_seen = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = strip(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      std::size_t eq = t.find('=');
      if (eq != std::string::npos && strip(t.substr(1, eq - 1)) == "sample_interval_ps") {
        w.sample_interval = parse_number(t.substr(eq + 1), path, line_no);
        have_dt = true;
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    w.samples.push_back(parse_number(t, path, line_no));
  }
  if (!have_dt)
    fail(ErrorCode::missing_field, path.string() + ": missing field 'sample_interval_ps'");
  if (w.samples.empty()) fail(ErrorCode::empty_input, path.string() + ": no samples");
  return validate(w);
}

void write_waveform_csv(const fs::path& path, const PulseWaveform& waveform,
                        const std::vector<std::string>& header_comments) {
  validate(waveform);
  std::ostringstream os;
  for (const auto& c : header_comments) os << "# " << c << "\n";
  os << "# sample_interval_ps = " << format_full(waveform.sample_interval) << "\n";
  os << "voltage_mv\n";
  for (double v : waveform.samples) os << format_full(v) << "\n";
  atomic_write(path, os.str());
}

} // namespace snspd
