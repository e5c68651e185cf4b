// Command-line driver: convergence studies, simulation runs, power-law fits
// and the built-in self-check.
//
// Exit codes: 0 success, 1 invalid input, 2 runtime failure, 3 I/O failure.
// Failures print exactly one line "error: <category>: <message>" on stderr.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "nch/config.hpp"
#include "nch/error.hpp"
#include "nch/experiments.hpp"
#include "nch/io.hpp"
#include "nch/kernels.hpp"
#include "nch/selftest.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "Configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--set", o.overrides, "Override a configuration key (key=value), repeatable");
  cmd->add_option("--out-dir", o.out_dir, "Output directory (overrides out_dir)");
  cmd->add_option("--seed", o.seed, "Seed for random initial data (overrides init.seed)");
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

nch::RunConfig load_config(const CommonOptions& o) {
  nch::ConfigDocument doc =
      o.config_path.empty() ? nch::ConfigDocument{} : nch::ConfigDocument::parse(nch::read_text_file(o.config_path));
  for (const auto& s : o.overrides) doc.set(s);
  if (!o.out_dir.empty()) doc.set("out_dir", quoted(o.out_dir));
  if (o.seed) doc.set("init.seed", std::to_string(*o.seed));
  return nch::resolve_config(doc);
}

fs::path prepare_out_dir(const nch::RunConfig& c) {
  const fs::path dir(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw nch::IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

int run_converge(const CommonOptions& o) {
  const nch::RunConfig config = load_config(o);
  const fs::path dir = prepare_out_dir(config);
  nch::write_text_file(dir / "rates.config.toml", nch::serialize_config(config));
  const nch::ConvergenceStudy study = nch::convergence_study(config);
  nch::write_rate_table_csv(study.rows, dir / "rates.csv");
  std::cout << nch::rate_table_csv(study.rows);
  if (study.aborted) throw nch::BlowupError(0, *study.aborted);
  return 0;
}

int run_run(const CommonOptions& o) {
  const nch::RunConfig config = load_config(o);
  const fs::path dir = prepare_out_dir(config);
  nch::write_text_file(dir / "runlog.config.toml", nch::serialize_config(config));
  nch::RunLog partial;
  nch::RunOptions options;
  options.on_record = [&](const nch::DiagnosticsRecord& r) { partial.records.push_back(r); };
  try {
    const nch::RunLog log = nch::run_simulation(config, options);
    nch::write_runlog_csv(log, dir / "runlog.csv");
    const auto& last = log.records.back();
    std::printf("steps=%zu time=%s energy=%s mass=%s\n", last.step, nch::format_double(last.time).c_str(),
                nch::format_double(last.energy).c_str(), nch::format_double(last.mass).c_str());
  } catch (const nch::BlowupError&) {
    nch::write_runlog_csv(partial, dir / "runlog.csv");
    throw;
  }
  return 0;
}

struct FitOptions {
  std::string log_path;
  std::optional<double> t_min;
  std::optional<double> t_max;
  std::string out_path;
};

int run_fit(const FitOptions& o) {
  const nch::RunLog log = nch::read_runlog_csv(o.log_path);
  nch::PowerLawFit fit;
  if (o.t_min || o.t_max) {
    if (log.records.empty()) throw nch::InsufficientDataError("power-law fit on an empty log");
    const double t_end = log.records.back().time;
    fit = nch::fit_power_law(log, o.t_min.value_or(0.1 * t_end), o.t_max.value_or(t_end));
  } else {
    fit = nch::fit_power_law(log);
  }
  if (!o.out_path.empty()) nch::write_fit_csv(fit, o.out_path);
  std::cout << nch::fit_csv(fit);
  return 0;
}

int run_selftest() {
  int failed = 0;
  std::printf("kernels: %s\n", std::string(nch::kernels::name(nch::kernels::active().isa)).c_str());
  for (const auto& r : nch::run_selftest()) {
    std::printf("%s %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    if (!r.passed) ++failed;
  }
  if (failed > 0) throw nch::Error("selftest", nch::ExitCode::runtime, std::to_string(failed) + " check(s) failed");
  return 0;
}

int fail(const std::string& category, const std::string& message, nch::ExitCode code) {
  std::string line = message;
  for (auto& ch : line) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  std::cerr << "error: " << category << ": " << line << '\n';
  return static_cast<int>(code);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponential time differencing solver for the nonlocal Cahn-Hilliard equation"};
  app.require_subcommand(1);

  CommonOptions converge_opts;
  auto* converge = app.add_subcommand("converge", "Temporal convergence study; writes rates.csv");
  add_common(converge, converge_opts);

  CommonOptions run_opts;
  auto* run = app.add_subcommand("run", "Single run with diagnostics; writes runlog.csv and snapshots");
  add_common(run, run_opts);

  FitOptions fit_opts;
  auto* fit = app.add_subcommand("fit", "Power-law fit E = b_e t^m_e of a run log");
  fit->add_option("--log", fit_opts.log_path, "runlog.csv to fit")->required();
  fit->add_option("--t-min", fit_opts.t_min, "Window start (default 0.1 T)");
  fit->add_option("--t-max", fit_opts.t_max, "Window end (default T)");
  fit->add_option("--out", fit_opts.out_path, "Write the fit as CSV");

  auto* selftest = app.add_subcommand("selftest", "Fast built-in oracle checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), nch::ExitCode::validation);
  }

  try {
    if (*converge) return run_converge(converge_opts);
    if (*run) return run_run(run_opts);
    if (*fit) return run_fit(fit_opts);
    if (*selftest) return run_selftest();
  } catch (const nch::Error& e) {
    return fail(e.category(), e.what(), e.exit_code());
  } catch (const fs::filesystem_error& e) {
    return fail("io", e.what(), nch::ExitCode::io);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), nch::ExitCode::runtime);
  }
  return 0;
}
