#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nch/field.hpp"

namespace nch {

struct DiagnosticsRecord {
  std::size_t step = 0;
  double time = 0.0;
  double energy = 0.0;
  double mass = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
  /// H^-1 norm of u; NaN when u is not zero-mean.
  double hm1 = 0.0;
};

struct RunLog {
  std::vector<DiagnosticsRecord> records;
  /// Resolved configuration text sufficient to replay the run.
  std::string config_echo;
  std::optional<std::uint64_t> seed;
};

struct ConvergenceRow {
  double tau = 0.0;
  double error_hm1 = 0.0;
  std::optional<double> rate;
};

struct PowerLawFit {
  double m_e = 0.0;
  double b_e = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  /// RMS residual of the fitted line in (ln t, ln E).
  double residual = 0.0;
  std::size_t points = 0;
};

// CSV outputs: one header line, one row per item, floats with 17
// significant digits, '\n' line endings.

inline constexpr const char* runlog_header = "step,time,energy,mass,l2,linf,hm1";
inline constexpr const char* rate_table_header = "tau,error_hm1,rate";
inline constexpr const char* fit_header = "m_e,b_e,t_min,t_max,residual,points";

std::string runlog_csv(const RunLog& log);
void write_runlog_csv(const RunLog& log, const std::filesystem::path& path);
RunLog read_runlog_csv(const std::filesystem::path& path);
RunLog parse_runlog_csv(const std::string& text);

std::string rate_table_csv(const std::vector<ConvergenceRow>& rows);
void write_rate_table_csv(const std::vector<ConvergenceRow>& rows, const std::filesystem::path& path);

std::string fit_csv(const PowerLawFit& fit);
void write_fit_csv(const PowerLawFit& fit, const std::filesystem::path& path);

/// Binary field snapshot, little endian:
///   "NCHS" | u32 version | u32 dim | u32 n[dim] | f64 half_width[dim] |
///   f64 time | f64 values[prod n] (row-major)
inline constexpr std::uint32_t snapshot_version = 1;
std::size_t snapshot_header_bytes(int dim);

struct Snapshot {
  Field field;
  double time = 0.0;
};

std::vector<unsigned char> encode_snapshot(const Field& field, double time);
Snapshot decode_snapshot(const std::vector<unsigned char>& bytes);
void write_snapshot(const Field& field, double time, const std::filesystem::path& path);
Snapshot read_snapshot(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace nch
