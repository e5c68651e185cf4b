#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nch/config.hpp"
#include "nch/io.hpp"

namespace nch {

/// Per-node uniform draws on [-amplitude, amplitude] from std::mt19937_64
/// seeded with `seed`; each 64-bit output is mapped to [0, 1) through its top
/// 53 bits, so the sequence is identical on every conforming platform.
Field random_uniform_field(const Grid& grid, double amplitude, std::uint64_t seed);

Field initial_condition(const InitSpec& spec, const Grid& grid);

/// Builds the problem a configuration describes (loads tabulated kernels).
Problem make_problem(const RunConfig& config);

/// H^-1 norm of the difference of two solutions on the same grid.
double richardson_error(const Field& coarse, const Field& fine);

/// rate_k = log2(e_{k-1} / e_k); the first row has no rate.
std::vector<ConvergenceRow> rate_table(const std::vector<double>& taus, const std::vector<double>& errors);

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  /// Set when a run blew up; rows holds what completed before it.
  std::optional<std::string> aborted;
};

/// Runs config.tau * 2^-k, k = 0..ladder_levels to config.t_end on worker
/// threads. Row k holds e(tau_k) = ||U(tau_k) - U(tau_k / 2)||_{-1,N}, or
/// ||U(tau_k) - U(reference_tau)||_{-1,N} when reference_tau > 0. Rows stop
/// at the first run that blew up.
ConvergenceStudy convergence_study(const RunConfig& config);

/// Final state of one run to config.t_end with step `tau` (no diagnostics).
Field solve_to_end(const Problem& problem, const RunConfig& config, double tau);

struct RunOptions {
  /// Called for each record as it is appended.
  std::function<void(const DiagnosticsRecord&)> on_record;
  /// Write snapshots into config.out_dir.
  bool write_snapshots = true;
};

DiagnosticsRecord diagnose(const Field& u, const Problem& problem, std::size_t step, double time);

/// Steps to t_end, logging every log_every steps (and at the first and last
/// step) and writing snapshots every snapshot_every steps. With steady_stop
/// the run ends early once ||u^{n+1} - u^n||_inf / tau < steady_tol. On
/// blow-up the last good state is flushed to snapshot_last_good.nchs before
/// the BlowupError propagates.
RunLog run_simulation(const RunConfig& config, const RunOptions& options = {});

/// Least-squares fit of ln E = ln b_e + m_e ln t over records with
/// t_min <= t <= t_max and t > 0.
PowerLawFit fit_power_law(const RunLog& log, double t_min, double t_max);

/// Default window [0.1 T, T], T = last record time.
PowerLawFit fit_power_law(const RunLog& log);

}  // namespace nch
