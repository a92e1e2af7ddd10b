#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace fracpce::kernels {

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool available(Isa isa) {
  if (isa == Isa::scalar) return true;
#if defined(FRACPCE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool has = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return has;
#else
  return false;
#endif
}

const KernelTable& table(Isa isa) {
  static const KernelTable scalar = detail::scalar_table();
  if (isa == Isa::scalar) return scalar;
#ifdef FRACPCE_HAVE_AVX2
  if (available(Isa::avx2)) {
    static const KernelTable avx2 = detail::avx2_table();
    return avx2;
  }
#endif
  throw std::runtime_error("kernel variant not available on this CPU: " + std::string(to_string(isa)));
}

Isa active_isa() {
  static const Isa isa = [] {
    const char* env = std::getenv("FRACPCE_SIMD");
    if (env && std::string(env) == "scalar") return Isa::scalar;
    return available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  }();
  return isa;
}

const KernelTable& active() {
  static const KernelTable& t = table(active_isa());
  return t;
}

}  // namespace fracpce::kernels
