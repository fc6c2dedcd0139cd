// Runtime kernel registry and selection.
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "camid/kernels.hpp"

namespace camid::kernels {

const KernelOps* scalar_kernels();
#ifdef CAMID_HAVE_AVX2_KERNELS
const KernelOps* avx2_kernels();
#endif
#ifdef CAMID_HAVE_NEON_KERNELS
const KernelOps* neon_kernels();
#endif

namespace {

std::vector<const KernelOps*> build_available() {
  std::vector<const KernelOps*> v;
  v.push_back(scalar_kernels());
#ifdef CAMID_HAVE_AVX2_KERNELS
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    v.push_back(avx2_kernels());
#endif
#ifdef CAMID_HAVE_NEON_KERNELS
  v.push_back(neon_kernels());  // baseline on aarch64
#endif
  return v;
}

const KernelOps* lookup(const char* name) {
  for (const KernelOps* ops : available())
    if (std::strcmp(ops->name, name) == 0) return ops;
  return nullptr;
}

const KernelOps*& active_slot() {
  static const KernelOps* slot = [] {
    if (const char* env = std::getenv("CAMID_KERNEL")) {
      if (const KernelOps* ops = lookup(env)) return ops;
      throw std::invalid_argument(std::string("CAMID_KERNEL names an unavailable kernel: ") + env);
    }
    return available().back();
  }();
  return slot;
}

}  // namespace

const std::vector<const KernelOps*>& available() {
  static const std::vector<const KernelOps*> v = build_available();
  return v;
}

const KernelOps& active() { return *active_slot(); }

const KernelOps* find(const char* name) { return lookup(name); }

void set_active(const char* name) {
  const KernelOps* ops = lookup(name);
  if (!ops)
    throw std::invalid_argument(std::string("kernel not available: ") + name);
  active_slot() = ops;
}

}  // namespace camid::kernels
