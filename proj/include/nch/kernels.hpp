#pragma once

// Data-parallel inner loops of the time stepper.
//
// Every kernel has a scalar reference implementation and, where the CPU
// supports it, an AVX2 variant chosen at runtime. Variants perform the same
// IEEE operations in the same order and never fuse multiply-adds, so their
// results are bit-identical to the scalar reference.
//
// Complex spectra are passed as interleaved (re, im) doubles; per-mode real
// multipliers are stored "expanded", i.e. duplicated once per component, so
// all kernels are plain elementwise loops over `n` doubles.

#include <cstddef>
#include <string_view>

namespace nch::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  /// out = (u^3 - u) - kappa*u; returns false if any output is not finite.
  bool (*cubic_fkappa)(const double* u, double* out, std::size_t n, double kappa);
  /// out = a*x + b*y
  void (*axpby)(const double* a, const double* x, const double* b, const double* y, double* out,
                std::size_t n);
  /// out = (a*x + b*y) - c*z
  void (*axpbypcz)(const double* a, const double* x, const double* b, const double* y,
                   const double* c, const double* z, double* out, std::size_t n);
  /// out = a*x
  void (*scale)(const double* a, const double* x, double* out, std::size_t n);
};

const KernelTable& scalar_table();
/// nullptr when the AVX2 variants were not compiled in.
const KernelTable* avx2_table();

/// Best variant supported by this CPU and build.
Isa detected_isa();
bool isa_available(Isa isa);

/// Currently selected table. Defaults to detected_isa(), overridable through
/// the NCH_ISA environment variable ("scalar" or "avx2") or select().
const KernelTable& active();
/// Throws ValidationError if the variant is unavailable.
void select(Isa isa);

std::string_view name(Isa isa);

}  // namespace nch::kernels
