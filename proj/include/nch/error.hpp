#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nch {

/// Process exit codes used by the command-line driver.
enum class ExitCode : int { ok = 0, validation = 1, runtime = 2, io = 3 };

/// Base of every error raised by the library. `category()` is a short
/// machine-parsable tag printed by the CLI on failure.
class Error : public std::runtime_error {
 public:
  Error(std::string category, ExitCode code, const std::string& what)
      : std::runtime_error(what), category_(std::move(category)), code_(code) {}

  const std::string& category() const noexcept { return category_; }
  ExitCode exit_code() const noexcept { return code_; }

 private:
  std::string category_;
  ExitCode code_;
};

#define NCH_DEFINE_ERROR(Name, tag, code)                                   \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(tag, code, what) {}      \
  };

NCH_DEFINE_ERROR(ValidationError, "validation", ExitCode::validation)
NCH_DEFINE_ERROR(DomainError, "domain", ExitCode::validation)
NCH_DEFINE_ERROR(ShapeError, "shape", ExitCode::validation)
NCH_DEFINE_ERROR(GammaZeroError, "gamma0", ExitCode::validation)
NCH_DEFINE_ERROR(InsufficientDataError, "insufficient_data", ExitCode::validation)
NCH_DEFINE_ERROR(NonpositiveEnergyError, "nonpositive_energy", ExitCode::validation)
NCH_DEFINE_ERROR(SymmetryError, "symmetry", ExitCode::runtime)
NCH_DEFINE_ERROR(MeanError, "mean", ExitCode::runtime)
NCH_DEFINE_ERROR(MissingHistoryError, "missing_history", ExitCode::runtime)
NCH_DEFINE_ERROR(KernelCutoffError, "kernel_cutoff", ExitCode::validation)
NCH_DEFINE_ERROR(IoError, "io", ExitCode::io)
NCH_DEFINE_ERROR(BadMagic, "bad_magic", ExitCode::io)
NCH_DEFINE_ERROR(VersionMismatch, "version_mismatch", ExitCode::io)
NCH_DEFINE_ERROR(TruncatedPayload, "truncated_payload", ExitCode::io)

#undef NCH_DEFINE_ERROR

/// Non-finite values appeared while stepping. `step()` is the index of the
/// step that produced them.
class BlowupError : public Error {
 public:
  BlowupError(std::size_t step, const std::string& what)
      : Error("blowup", ExitCode::runtime, what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Malformed configuration text; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("parse", ExitCode::validation,
              "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace nch
