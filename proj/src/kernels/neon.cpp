// NEON kernels (aarch64), 2 doubles per vector. Mirrors the AVX2 variants:
// apply_rule keeps the unfused per-cell accumulation for bit-exactness with
// the scalar reference; the L1 kernels use FMA and candidate blocking.
#include <cstring>
#include <vector>

#include <arm_neon.h>

#include "camid/kernels.hpp"

namespace camid::kernels {

namespace {

inline int wrap(int v, int n) { return ((v % n) + n) % n; }

inline double hsum(float64x2_t v) {
  return vgetq_lane_f64(v, 0) + vgetq_lane_f64(v, 1);
}

void apply_rule_neon(const double* src, double* dst, int height, int width,
                     const int* off_dy, const int* off_dx, const double* theta,
                     int k) {
  std::vector<double> shifted(width);
  std::vector<double> acc(width);
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t one = vdupq_n_f64(1.0);

  for (int r = 0; r < height; ++r) {
    std::memset(acc.data(), 0, sizeof(double) * width);
    for (int j = 0; j < k; ++j) {
      const int sr = wrap(r + off_dy[j], height);
      const int sc = wrap(off_dx[j], width);
      const double* row = src + static_cast<long>(sr) * width;
      std::memcpy(shifted.data(), row + sc, sizeof(double) * (width - sc));
      std::memcpy(shifted.data() + (width - sc), row, sizeof(double) * sc);

      const float64x2_t t = vdupq_n_f64(theta[j]);
      int c = 0;
      for (; c + 2 <= width; c += 2) {
        const float64x2_t v = vld1q_f64(shifted.data() + c);
        const float64x2_t a = vld1q_f64(acc.data() + c);
        vst1q_f64(acc.data() + c, vaddq_f64(a, vmulq_f64(t, v)));
      }
      for (; c < width; ++c) acc[c] += theta[j] * shifted[c];
    }
    double* out = dst + static_cast<long>(r) * width;
    int c = 0;
    for (; c + 2 <= width; c += 2) {
      float64x2_t a = vld1q_f64(acc.data() + c);
      a = vminq_f64(vmaxq_f64(a, zero), one);
      vst1q_f64(out + c, a);
    }
    for (; c < width; ++c) {
      double a = acc[c];
      if (a < 0.0) a = 0.0;
      if (a > 1.0) a = 1.0;
      out[c] = a;
    }
  }
}

constexpr int kCandidateBlock = 8;

void weighted_l1_batch_neon(const double* neighbors, const double* targets,
                            const double* weights, long nrows,
                            const double* thetas, int count, int k,
                            double* out) {
  for (int c0 = 0; c0 < count; c0 += kCandidateBlock) {
    const int nc = count - c0 < kCandidateBlock ? count - c0 : kCandidateBlock;
    float64x2_t tot[kCandidateBlock];
    for (int c = 0; c < nc; ++c) tot[c] = vdupq_n_f64(0.0);

    long r = 0;
    for (; r + 2 <= nrows; r += 2) {
      float64x2_t acc[kCandidateBlock];
      for (int c = 0; c < nc; ++c) acc[c] = vdupq_n_f64(0.0);
      for (int j = 0; j < k; ++j) {
        const float64x2_t v =
            vld1q_f64(neighbors + static_cast<long>(j) * nrows + r);
        for (int c = 0; c < nc; ++c) {
          const float64x2_t t =
              vdupq_n_f64(thetas[static_cast<long>(c0 + c) * k + j]);
          acc[c] = vfmaq_f64(acc[c], t, v);
        }
      }
      const float64x2_t y = vld1q_f64(targets + r);
      const float64x2_t w = vld1q_f64(weights + r);
      for (int c = 0; c < nc; ++c) {
        const float64x2_t err = vabsq_f64(vsubq_f64(y, acc[c]));
        tot[c] = vfmaq_f64(tot[c], err, w);
      }
    }

    for (int c = 0; c < nc; ++c) {
      const double* theta = thetas + static_cast<long>(c0 + c) * k;
      double total = hsum(tot[c]);
      for (long rr = r; rr < nrows; ++rr) {
        double pred = 0.0;
        for (int j = 0; j < k; ++j)
          pred += theta[j] * neighbors[static_cast<long>(j) * nrows + rr];
        const double res = targets[rr] - pred;
        total += weights[rr] * (res < 0.0 ? -res : res);
      }
      out[c0 + c] = total;
    }
  }
}

double weighted_l1_subgradient_neon(const double* neighbors,
                                    const double* targets,
                                    const double* weights, long nrows,
                                    const double* theta, int k, double* grad) {
  std::vector<float64x2_t> gacc(k, vdupq_n_f64(0.0));
  float64x2_t tot = vdupq_n_f64(0.0);
  const float64x2_t zero = vdupq_n_f64(0.0);

  long r = 0;
  for (; r + 2 <= nrows; r += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (int j = 0; j < k; ++j) {
      const float64x2_t v =
          vld1q_f64(neighbors + static_cast<long>(j) * nrows + r);
      acc = vfmaq_f64(acc, vdupq_n_f64(theta[j]), v);
    }
    const float64x2_t y = vld1q_f64(targets + r);
    const float64x2_t w = vld1q_f64(weights + r);
    const float64x2_t res = vsubq_f64(acc, y);
    tot = vfmaq_f64(tot, vabsq_f64(res), w);
    const uint64x2_t pos = vcgtq_f64(res, zero);
    const uint64x2_t neg = vcltq_f64(res, zero);
    const float64x2_t ws =
        vbslq_f64(pos, w, vbslq_f64(neg, vnegq_f64(w), zero));
    for (int j = 0; j < k; ++j) {
      const float64x2_t v =
          vld1q_f64(neighbors + static_cast<long>(j) * nrows + r);
      gacc[j] = vfmaq_f64(gacc[j], v, ws);
    }
  }

  for (int j = 0; j < k; ++j) grad[j] = hsum(gacc[j]);
  double total = hsum(tot);
  for (; r < nrows; ++r) {
    double pred = 0.0;
    for (int j = 0; j < k; ++j)
      pred += theta[j] * neighbors[static_cast<long>(j) * nrows + r];
    const double res = pred - targets[r];
    total += weights[r] * (res < 0.0 ? -res : res);
    if (res != 0.0) {
      const double ws = res > 0.0 ? weights[r] : -weights[r];
      for (int j = 0; j < k; ++j)
        grad[j] += ws * neighbors[static_cast<long>(j) * nrows + r];
    }
  }
  return total;
}

constexpr KernelOps kNeonOps = {
    "neon",
    apply_rule_neon,
    weighted_l1_batch_neon,
    weighted_l1_subgradient_neon,
};

}  // namespace

const KernelOps* neon_kernels() { return &kNeonOps; }

}  // namespace camid::kernels
