#pragma once

// Data-parallel kernels behind the Ursell and boundary-weight evaluators.
//
// Every kernel has a scalar reference implementation and an AVX2 variant
// selected at runtime. Both variants perform the same IEEE operations in the
// same order per lane (no FMA contraction), so their results are bitwise
// identical and estimates do not depend on the host's vector width.

#include <cstddef>
#include <span>
#include <string_view>

#include "bcx/potential.hpp"

namespace bcx::simd {

/// Non-owning view of a RadialStepTable.
struct StepTableView {
  const double* thresholds_sq = nullptr;
  const double* values = nullptr;
  int thresholds = 0;

  static StepTableView of(const RadialStepTable& t) {
    return {t.thresholds_sq.data(), t.values.data(), static_cast<int>(t.thresholds_sq.size())};
  }
};

/// Points stored axis-major: coordinate c of point i lives at data[c * stride + i].
struct PointsView {
  const double* data = nullptr;
  std::size_t stride = 0;
  std::size_t count = 0;
};

/// Sum over stored points y of table(|x - y|^2). Reduction order is fixed:
/// point i accumulates into partial sum (i mod 4); the partials combine as
/// (s0 + s1) + (s2 + s3).
using RadialSumFn = double (*)(const double* x, int dimension, PointsView points,
                               StepTableView table);

/// Ursell function of `count` configurations of k points each. Coordinate c of
/// point i of configuration s lives at coords[(i * dimension + c) * stride + s].
/// Bonds are table(|x_i - x_j|^2) Boltzmann factors. `scratch` must hold
/// scratch_size(k) doubles.
using UrsellBatchFn = void (*)(int k, int dimension, const double* coords, std::size_t stride,
                               std::size_t count, StepTableView boltzmann, double* out,
                               double* scratch);

enum class Level { kScalar, kAvx2 };

struct Kernels {
  Level level;
  RadialSumFn radial_sum;
  UrsellBatchFn ursell_batch;
};

std::size_t ursell_scratch_size(int k);

/// Kernels for the best level supported by this CPU, unless the environment
/// variable BCX_SIMD=scalar forces the reference path.
const Kernels& active();
/// Kernels for a specific level; throws if the CPU or build lacks it.
const Kernels& kernels(Level level);
bool supported(Level level);
std::string_view name(Level level);

/// Reference subset recursion on a dense k x k Boltzmann-factor matrix
/// (bonds[i * k + j] = e^{-beta v(x_i - x_j)}). `scratch` needs 2^{k+1} doubles.
double ursell_from_boltzmann(int k, const double* bonds, double* scratch);

namespace scalar {
double radial_sum(const double* x, int dimension, PointsView points, StepTableView table);
void ursell_batch(int k, int dimension, const double* coords, std::size_t stride,
                  std::size_t count, StepTableView boltzmann, double* out, double* scratch);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double radial_sum(const double* x, int dimension, PointsView points, StepTableView table);
void ursell_batch(int k, int dimension, const double* coords, std::size_t stride,
                  std::size_t count, StepTableView boltzmann, double* out, double* scratch);
}  // namespace avx2
#endif

}  // namespace bcx::simd
