#include <cstdint>

#include "bcx/simd.hpp"

namespace bcx::simd {

namespace {

inline double step_lookup(double r2, StepTableView t) {
  double v = t.values[0];
  for (int k = 0; k < t.thresholds; ++k)
    if (r2 >= t.thresholds_sq[k]) v = t.values[k + 1];
  return v;
}

}  // namespace

std::size_t ursell_scratch_size(int k) { return std::size_t{8} << k; }

double ursell_from_boltzmann(int k, const double* bonds, double* scratch) {
  if (k <= 1) return 1.0;
  const std::uint32_t full = (std::uint32_t{1} << k) - 1;
  double* weight = scratch;                        // W(S): product of bonds inside S
  double* phi = scratch + (std::size_t{1} << k);   // connected part of W(S)
  for (std::uint32_t s = 1; s <= full; ++s) {
    const std::uint32_t low = s & (~s + 1);
    const std::uint32_t rest = s ^ low;
    if (rest == 0) {
      weight[s] = 1.0;
      phi[s] = 1.0;
      continue;
    }
    const int top = 31 - __builtin_clz(s);
    const std::uint32_t below = s ^ (std::uint32_t{1} << top);
    double w = weight[below];
    for (std::uint32_t m = below; m != 0; m &= m - 1) {
      const int j = __builtin_ctz(m);
      w = w * bonds[top * k + j];
    }
    weight[s] = w;
    double acc = w;
    for (std::uint32_t sub = (rest - 1) & rest;; sub = (sub - 1) & rest) {
      acc = acc - phi[sub | low] * weight[rest ^ sub];
      if (sub == 0) break;
    }
    phi[s] = acc;
  }
  return phi[full];
}

namespace scalar {

double radial_sum(const double* x, int dimension, PointsView points, StepTableView table) {
  double partial[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < points.count; ++i) {
    double r2 = 0.0;
    for (int c = 0; c < dimension; ++c) {
      const double d = x[c] - points.data[c * points.stride + i];
      r2 = r2 + d * d;
    }
    partial[i & 3] = partial[i & 3] + step_lookup(r2, table);
  }
  return (partial[0] + partial[1]) + (partial[2] + partial[3]);
}

void ursell_batch(int k, int dimension, const double* coords, std::size_t stride,
                  std::size_t count, StepTableView boltzmann, double* out, double* scratch) {
  double bonds[32 * 32];
  for (std::size_t s = 0; s < count; ++s) {
    for (int i = 0; i < k; ++i) {
      bonds[i * k + i] = 1.0;
      for (int j = 0; j < i; ++j) {
        double r2 = 0.0;
        for (int c = 0; c < dimension; ++c) {
          const double d = coords[(i * dimension + c) * stride + s] -
                           coords[(j * dimension + c) * stride + s];
          r2 = r2 + d * d;
        }
        const double b = step_lookup(r2, boltzmann);
        bonds[i * k + j] = b;
        bonds[j * k + i] = b;
      }
    }
    out[s] = ursell_from_boltzmann(k, bonds, scratch);
  }
}

}  // namespace scalar

}  // namespace bcx::simd
