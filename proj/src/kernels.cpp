#include "setnovo/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace setnovo::kernels {
namespace {

const KernelTable* g_active = nullptr;

const KernelTable& pick_initial() {
  const char* req = std::getenv("SETNOVO_KERNELS");
  if (req) {
    if (std::strcmp(req, "scalar") == 0) return scalar_table();
    if (std::strcmp(req, "avx2") == 0 && avx2_supported()) return avx2_table();
    return scalar_table();
  }
  return avx2_supported() ? avx2_table() : scalar_table();
}

}  // namespace

const KernelTable& active_table() {
  if (!g_active) g_active = &pick_initial();
  return *g_active;
}

void set_active_table(const KernelTable& table) { g_active = &table; }

}  // namespace setnovo::kernels
