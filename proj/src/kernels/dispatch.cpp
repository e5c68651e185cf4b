#include <cstdlib>
#include <string>

#include "nch/error.hpp"
#include "nch/kernels.hpp"

namespace nch::kernels {

#ifndef NCH_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif

namespace {

bool cpu_has_avx2() {
#if defined(NCH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &scalar_table();
    case Isa::avx2:
      return cpu_has_avx2() ? avx2_table() : nullptr;
  }
  return nullptr;
}

const KernelTable* initial_table() {
  if (const char* env = std::getenv("NCH_ISA")) {
    const std::string want(env);
    if (want == "scalar") return &scalar_table();
    if (want == "avx2" && table_for(Isa::avx2) != nullptr) return table_for(Isa::avx2);
  }
  return table_for(detected_isa());
}

const KernelTable*& current() {
  static const KernelTable* table = initial_table();
  return table;
}

}  // namespace

Isa detected_isa() { return table_for(Isa::avx2) != nullptr ? Isa::avx2 : Isa::scalar; }

bool isa_available(Isa isa) { return table_for(isa) != nullptr; }

const KernelTable& active() { return *current(); }

void select(Isa isa) {
  const KernelTable* t = table_for(isa);
  if (t == nullptr) throw ValidationError("kernel variant '" + std::string(name(isa)) + "' unavailable");
  current() = t;
}

std::string_view name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace nch::kernels
