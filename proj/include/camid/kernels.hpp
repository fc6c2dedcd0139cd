// Inner-loop kernels with scalar reference and SIMD implementations.
//
// Three data-parallel primitives back everything hot in this project:
//
//   apply_rule            one synchronous toroidal stencil step
//   weighted_l1_batch     J(theta) for a batch of weight vectors against a
//                         precomputed neighborhood table (k-major layout)
//   weighted_l1_subgradient  J(theta) plus its subgradient
//
// Contract:
//   - apply_rule results are bit-identical across kernels: each cell is
//     accumulated in offset order with unfused multiply-add, then clamped.
//   - weighted_l1_* per-row predictions also run in offset order, but the
//     row-reduction order is kernel-specific. Every kernel is individually
//     deterministic; totals agree across kernels to ~1e-12 relative.
//
// Selection happens once at startup: the best kernel the CPU supports, or
// the one named by the CAMID_KERNEL environment variable ("scalar", "avx2",
// "neon").
#pragma once

#include <vector>

namespace camid::kernels {

struct KernelOps {
  const char* name;

  // dst[r,c] = clamp01(sum_j theta[j] * src[(r+dy_j) mod h, (c+dx_j) mod w])
  void (*apply_rule)(const double* src, double* dst, int height, int width,
                     const int* off_dy, const int* off_dx, const double* theta,
                     int k);

  // neighbors is k-major: neighbors[j*nrows + r]. For each of `count` weight
  // vectors (rows of `thetas`, length k):
  //   out[c] = sum_r weights[r] * |targets[r] - dot(thetas_c, neighbors[:,r])|
  void (*weighted_l1_batch)(const double* neighbors, const double* targets,
                            const double* weights, long nrows,
                            const double* thetas, int count, int k,
                            double* out);

  // grad[j] = sum_r weights[r] * sign(pred_r - targets[r]) * neighbors[j,r]
  // with sign(0) = 0; returns the objective value.
  double (*weighted_l1_subgradient)(const double* neighbors,
                                    const double* targets,
                                    const double* weights, long nrows,
                                    const double* theta, int k, double* grad);
};

// Kernels usable on this host, scalar first, fastest last.
const std::vector<const KernelOps*>& available();

// The kernel used by the library. Defaults to available().back().
const KernelOps& active();

// Lookup by name among available kernels; nullptr if absent on this host.
const KernelOps* find(const char* name);

// Override the active kernel; throws std::invalid_argument if unavailable.
void set_active(const char* name);

}  // namespace camid::kernels
