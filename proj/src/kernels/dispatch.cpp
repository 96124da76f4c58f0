#include <cstdlib>
#include <string_view>

#include "fcagenda/kernels.hpp"

namespace fcagenda::kernels {

#if defined(FCAGENDA_HAVE_AVX2)
const KernelTable& avx2_table_unchecked();
#endif

const KernelTable* avx2_table() {
#if defined(FCAGENDA_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
  }();
  return supported ? &avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable* const chosen = [] {
    const char* forced = std::getenv("FCAGENDA_KERNELS");
    if (forced != nullptr && std::string_view(forced) == "scalar") return &scalar_table();
    if (const KernelTable* t = avx2_table()) return t;
    return &scalar_table();
  }();
  return *chosen;
}

}  // namespace fcagenda::kernels
