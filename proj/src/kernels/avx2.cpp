// AVX2 kernels, 4 doubles per lane group. Compiled with -mavx2 -mfma and
// selected at runtime only after a CPUID check, so the rest of the binary
// stays runnable on plain x86-64.
//
// apply_rule vectorizes across cells of one output row: each lane accumulates
// its own cell in offset order with unfused mul+add, which keeps results
// bit-identical to the scalar reference. The L1 kernels process candidate
// blocks so the neighborhood table is streamed once per 8 weight vectors;
// those use FMA (per-kernel determinism, cross-kernel tolerance).
#include <cstring>
#include <vector>

#include <immintrin.h>

#include "camid/kernels.hpp"

namespace camid::kernels {

namespace {

inline int wrap(int v, int n) { return ((v % n) + n) % n; }

// lanes 0..3 summed in a fixed order: (l0+l2) + (l1+l3)
inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
}

void apply_rule_avx2(const double* src, double* dst, int height, int width,
                     const int* off_dy, const int* off_dx, const double* theta,
                     int k) {
  std::vector<double> shifted(width);
  std::vector<double> acc(width);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);

  for (int r = 0; r < height; ++r) {
    std::memset(acc.data(), 0, sizeof(double) * width);
    for (int j = 0; j < k; ++j) {
      const int sr = wrap(r + off_dy[j], height);
      const int sc = wrap(off_dx[j], width);
      const double* row = src + static_cast<long>(sr) * width;
      // shifted[i] = row[(i + sc) mod width], copied as two segments
      std::memcpy(shifted.data(), row + sc, sizeof(double) * (width - sc));
      std::memcpy(shifted.data() + (width - sc), row, sizeof(double) * sc);

      const __m256d t = _mm256_set1_pd(theta[j]);
      int c = 0;
      for (; c + 4 <= width; c += 4) {
        const __m256d v = _mm256_loadu_pd(shifted.data() + c);
        const __m256d a = _mm256_loadu_pd(acc.data() + c);
        _mm256_storeu_pd(acc.data() + c, _mm256_add_pd(a, _mm256_mul_pd(t, v)));
      }
      for (; c < width; ++c) acc[c] += theta[j] * shifted[c];
    }
    double* out = dst + static_cast<long>(r) * width;
    int c = 0;
    for (; c + 4 <= width; c += 4) {
      __m256d a = _mm256_loadu_pd(acc.data() + c);
      a = _mm256_min_pd(_mm256_max_pd(a, zero), one);
      _mm256_storeu_pd(out + c, a);
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

void weighted_l1_batch_avx2(const double* neighbors, const double* targets,
                            const double* weights, long nrows,
                            const double* thetas, int count, int k,
                            double* out) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  for (int c0 = 0; c0 < count; c0 += kCandidateBlock) {
    const int nc = count - c0 < kCandidateBlock ? count - c0 : kCandidateBlock;
    __m256d tot[kCandidateBlock];
    for (int c = 0; c < nc; ++c) tot[c] = _mm256_setzero_pd();

    long r = 0;
    for (; r + 4 <= nrows; r += 4) {
      __m256d acc[kCandidateBlock];
      for (int c = 0; c < nc; ++c) acc[c] = _mm256_setzero_pd();
      for (int j = 0; j < k; ++j) {
        const __m256d v =
            _mm256_loadu_pd(neighbors + static_cast<long>(j) * nrows + r);
        for (int c = 0; c < nc; ++c) {
          const __m256d t =
              _mm256_set1_pd(thetas[static_cast<long>(c0 + c) * k + j]);
          acc[c] = _mm256_fmadd_pd(t, v, acc[c]);
        }
      }
      const __m256d y = _mm256_loadu_pd(targets + r);
      const __m256d w = _mm256_loadu_pd(weights + r);
      for (int c = 0; c < nc; ++c) {
        const __m256d err =
            _mm256_andnot_pd(sign_mask, _mm256_sub_pd(y, acc[c]));
        tot[c] = _mm256_fmadd_pd(err, w, tot[c]);
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

double weighted_l1_subgradient_avx2(const double* neighbors,
                                    const double* targets,
                                    const double* weights, long nrows,
                                    const double* theta, int k, double* grad) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d zero = _mm256_setzero_pd();
  std::vector<__m256d> gacc(k, _mm256_setzero_pd());
  __m256d tot = _mm256_setzero_pd();

  long r = 0;
  for (; r + 4 <= nrows; r += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (int j = 0; j < k; ++j) {
      const __m256d v =
          _mm256_loadu_pd(neighbors + static_cast<long>(j) * nrows + r);
      acc = _mm256_fmadd_pd(_mm256_set1_pd(theta[j]), v, acc);
    }
    const __m256d y = _mm256_loadu_pd(targets + r);
    const __m256d w = _mm256_loadu_pd(weights + r);
    const __m256d res = _mm256_sub_pd(acc, y);
    tot = _mm256_fmadd_pd(_mm256_andnot_pd(sign_mask, res), w, tot);
    // sign(res) * w, with sign(0) = 0
    const __m256d pos = _mm256_cmp_pd(res, zero, _CMP_GT_OQ);
    const __m256d neg = _mm256_cmp_pd(res, zero, _CMP_LT_OQ);
    const __m256d ws = _mm256_or_pd(_mm256_and_pd(pos, w),
                                    _mm256_and_pd(neg, _mm256_sub_pd(zero, w)));
    for (int j = 0; j < k; ++j) {
      const __m256d v =
          _mm256_loadu_pd(neighbors + static_cast<long>(j) * nrows + r);
      gacc[j] = _mm256_fmadd_pd(v, ws, gacc[j]);
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

constexpr KernelOps kAvx2Ops = {
    "avx2",
    apply_rule_avx2,
    weighted_l1_batch_avx2,
    weighted_l1_subgradient_avx2,
};

}  // namespace

const KernelOps* avx2_kernels() { return &kAvx2Ops; }

}  // namespace camid::kernels
