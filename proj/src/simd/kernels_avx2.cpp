// Compiled with -mavx2 (and without FMA) only for x86-64 builds.
#include <immintrin.h>

#include <cstdint>

#include "bcx/simd.hpp"

namespace bcx::simd::avx2 {

namespace {

inline __m256d step_lookup(__m256d r2, StepTableView t) {
  __m256d v = _mm256_set1_pd(t.values[0]);
  for (int k = 0; k < t.thresholds; ++k) {
    const __m256d ge = _mm256_cmp_pd(r2, _mm256_set1_pd(t.thresholds_sq[k]), _CMP_GE_OQ);
    v = _mm256_blendv_pd(v, _mm256_set1_pd(t.values[k + 1]), ge);
  }
  return v;
}

inline double step_lookup_scalar(double r2, StepTableView t) {
  double v = t.values[0];
  for (int k = 0; k < t.thresholds; ++k)
    if (r2 >= t.thresholds_sq[k]) v = t.values[k + 1];
  return v;
}

}  // namespace

double radial_sum(const double* x, int dimension, PointsView points, StepTableView table) {
  __m256d partial = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= points.count; i += 4) {
    __m256d r2 = _mm256_setzero_pd();
    for (int c = 0; c < dimension; ++c) {
      const __m256d y = _mm256_loadu_pd(points.data + c * points.stride + i);
      const __m256d d = _mm256_sub_pd(_mm256_set1_pd(x[c]), y);
      r2 = _mm256_add_pd(r2, _mm256_mul_pd(d, d));
    }
    partial = _mm256_add_pd(partial, step_lookup(r2, table));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, partial);
  for (; i < points.count; ++i) {
    double r2 = 0.0;
    for (int c = 0; c < dimension; ++c) {
      const double d = x[c] - points.data[c * points.stride + i];
      r2 = r2 + d * d;
    }
    lanes[i & 3] = lanes[i & 3] + step_lookup_scalar(r2, table);
  }
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

void ursell_batch(int k, int dimension, const double* coords, std::size_t stride,
                  std::size_t count, StepTableView boltzmann, double* out, double* scratch) {
  const std::size_t groups = count / 4;
  if (k <= 1) {
    for (std::size_t s = 0; s < count; ++s) out[s] = 1.0;
    return;
  }
  const std::uint32_t full = (std::uint32_t{1} << k) - 1;
  auto* weight = reinterpret_cast<__m256d*>(scratch);
  auto* phi = weight + (std::size_t{1} << k);
  __m256d bonds[32 * 32];
  const __m256d one = _mm256_set1_pd(1.0);
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t s0 = g * 4;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < i; ++j) {
        __m256d r2 = _mm256_setzero_pd();
        for (int c = 0; c < dimension; ++c) {
          const __m256d xi = _mm256_loadu_pd(coords + (i * dimension + c) * stride + s0);
          const __m256d xj = _mm256_loadu_pd(coords + (j * dimension + c) * stride + s0);
          const __m256d d = _mm256_sub_pd(xi, xj);
          r2 = _mm256_add_pd(r2, _mm256_mul_pd(d, d));
        }
        bonds[i * k + j] = step_lookup(r2, boltzmann);
      }
    }
    for (std::uint32_t s = 1; s <= full; ++s) {
      const std::uint32_t low = s & (~s + 1);
      const std::uint32_t rest = s ^ low;
      if (rest == 0) {
        _mm256_storeu_pd(reinterpret_cast<double*>(weight + s), one);
        _mm256_storeu_pd(reinterpret_cast<double*>(phi + s), one);
        continue;
      }
      const int top = 31 - __builtin_clz(s);
      const std::uint32_t below = s ^ (std::uint32_t{1} << top);
      __m256d w = _mm256_loadu_pd(reinterpret_cast<const double*>(weight + below));
      for (std::uint32_t m = below; m != 0; m &= m - 1) {
        const int j = __builtin_ctz(m);
        w = _mm256_mul_pd(w, bonds[top * k + j]);
      }
      _mm256_storeu_pd(reinterpret_cast<double*>(weight + s), w);
      __m256d acc = w;
      for (std::uint32_t sub = (rest - 1) & rest;; sub = (sub - 1) & rest) {
        const __m256d p = _mm256_loadu_pd(reinterpret_cast<const double*>(phi + (sub | low)));
        const __m256d q = _mm256_loadu_pd(reinterpret_cast<const double*>(weight + (rest ^ sub)));
        acc = _mm256_sub_pd(acc, _mm256_mul_pd(p, q));
        if (sub == 0) break;
      }
      _mm256_storeu_pd(reinterpret_cast<double*>(phi + s), acc);
    }
    _mm256_storeu_pd(out + s0, _mm256_loadu_pd(reinterpret_cast<const double*>(phi + full)));
  }
  const std::size_t done = groups * 4;
  if (done < count) {
    scalar::ursell_batch(k, dimension, coords + done, stride, count - done, boltzmann, out + done,
                         scratch);
  }
}

}  // namespace bcx::simd::avx2
