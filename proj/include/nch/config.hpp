#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nch/etd.hpp"
#include "nch/model.hpp"

namespace nch {

enum class InitKind { sine1d, sine2d, sine3d, random_uniform, constant, file };

struct InitSpec {
  InitKind kind = InitKind::sine2d;
  /// Half-range of random_uniform data.
  double amplitude = 0.1;
  /// Value of constant data.
  double value = 0.0;
  std::uint64_t seed = 42;
  /// Snapshot path for kind = file.
  std::string path;

  bool operator==(const InitSpec&) const = default;
};

/// Fully resolved configuration of one run or one tau-ladder study.
struct RunConfig {
  Scheme scheme = Scheme::etd2;
  int dim = 2;
  /// Axes at or beyond dim hold 1 point and half-width 1.
  std::array<std::size_t, 3> n{64, 64, 1};
  std::array<double, 3> half_width{1.0, 1.0, 1.0};
  double epsilon = 0.1;
  double delta = 0.1;
  /// Stabilizer; defaults to 2 (etd1) or 3 (etd2) when not given.
  double kappa = 3.0;
  double tau = 0.01;
  double t_end = 1.0;
  InitSpec init;
  std::size_t log_every = 1;
  /// 0 disables snapshots.
  std::size_t snapshot_every = 0;
  std::string out_dir = "out";
  bool strict_gamma0 = true;
  bool dealias = false;
  KernelKind kernel = KernelKind::gaussian;
  std::string kernel_file;
  int image_cutoff = -1;
  /// Number of error rows in a convergence study (runs at tau 2^-k, k = 0..levels).
  int ladder_levels = 5;
  /// Error reference of a convergence study: 0 pairs each run with the
  /// half-step run; a positive value compares every run with one solution
  /// at this step.
  double reference_tau = 0.0;
  /// Stop a run once ||u^{n+1} - u^n||_inf / tau < steady_tol.
  bool steady_stop = false;
  double steady_tol = 1e-8;

  Grid grid() const;
  ModelParams model_params() const;
  /// Number of steps to reach t_end with step tau (ValidationError if t_end
  /// is not an integer multiple of tau).
  std::size_t step_count(double step) const;

  bool operator==(const RunConfig&) const = default;
};

inline double default_kappa(Scheme s) { return s == Scheme::etd1 ? 2.0 : 3.0; }

/// Flat `key = value` document with an optional `[init]` table.
///
/// Values are numbers, booleans, quoted or bare strings, or `[a, b, c]`
/// arrays. `#` starts a comment. Keys inside `[init]` are addressed as
/// `init.<key>`.
class ConfigDocument {
 public:
  struct Entry {
    std::string raw;
    std::size_t line = 0;  // 0 for overrides
  };

  static ConfigDocument parse(const std::string& text);

  /// Sets or replaces a value; `assignment` is `key=value`.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& raw);

  const std::map<std::string, Entry>& entries() const noexcept { return entries_; }
  bool contains(const std::string& key) const { return entries_.count(key) != 0; }

 private:
  std::map<std::string, Entry> entries_;
};

/// Resolves defaults and validates. Validation errors name the field.
RunConfig resolve_config(const ConfigDocument& doc);
RunConfig parse_config(const std::string& text);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

std::string_view init_kind_name(InitKind kind);

}  // namespace nch
