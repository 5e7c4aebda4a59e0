#pragma once

// Cross-checks that do not go through the Ursell machinery: partition-function
// coefficients from the Boltzmann factor of the whole configuration, the
// formal logarithm, and the exact hard-rod gas.

#include <vector>

#include "bcx/mayer.hpp"

namespace bcx {

/// Coefficients of a truncated power series with a standard error each.
struct FormalSeries {
  std::vector<double> coefficients;
  std::vector<double> errors;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
};

/// Z_0 .. Z_N of the grand partition function; Z_0 = 1 exactly.
using TruncatedXi = FormalSeries;

inline constexpr int kXiMaxOrderMonteCarlo = 6;
inline constexpr int kXiMaxOrderGrid = 4;

/// Z_n = (1/n!) integral over the box^n of e^{-beta sum v} prod f(x_i).
/// Monte Carlo draws x_i uniformly in the box; the grid sampler (d = 1) sums
/// over the kBox midpoint grid of the estimators.
TruncatedXi xi_coefficients(const System& system, int max_order, const Sampler& sampler);

/// log of a series with constant term 1; errors propagated to first order.
FormalSeries series_log(const FormalSeries& xi);
/// exp of a series with constant term 0 (errors ignored).
FormalSeries series_exp(const FormalSeries& s);

/// Coefficients 1..N of beta p(lambda) for hard rods of length a in infinite
/// volume, from the fixed point beta p = lambda e^{-a beta p} solved in formal
/// power series. Entry 0 is 0.
std::vector<double> tonks_pressure_coefficients(int max_order, double a);

/// Hard rods in [-L, L]: Z_n = (2L - (n-1) a)^n / n! while positive.
std::vector<double> hard_rod_partition_exact(double half_side, double a, int max_order);

struct ConsistencyRow {
  int order = 0;
  double log_coefficient = 0.0;  ///< coefficient of lambda^n in log Xi
  double log_error = 0.0;
  double mayer = 0.0;            ///< |box| times the volume-averaged Mayer coefficient
  double mayer_error = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct ConsistencyReport {
  bool pass = true;
  bool deterministic = false;
  std::vector<ConsistencyRow> rows;
};

/// Compares log Xi with |box| cbar_{n-1} for n = 1..N. Deterministic runs use a
/// relative tolerance of 1e-8; Monte Carlo runs 3 combined standard errors,
/// the logarithm's error doubled.
ConsistencyReport consistency_check(const System& system, int max_order, const Sampler& sampler);

}  // namespace bcx
