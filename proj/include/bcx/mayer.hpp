#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "bcx/boundary.hpp"
#include "bcx/geometry.hpp"
#include "bcx/potential.hpp"

namespace bcx {

/// One physical setting: potential, box, boundary condition and beta.
struct System {
  PairPotential potential;
  Box box;
  BoundaryConfig boundary;
  double beta = 1.0;

  System(PairPotential potential, Box box, BoundaryConfig boundary, double beta);
  System with_free_boundary() const;
};

struct MonteCarloSampler {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t chunk_size = 1 << 14;  ///< part of the determinism contract
  unsigned workers = 0;                ///< 0: one per hardware thread
};

/// Tensor midpoint grid, d = 1 only.
///
/// kPoint centres the grid on the anchor x0 with spacing H = R / (q + 1/2), so
/// node separations are never a multiple of R and the f-bond discontinuity at
/// R is never sampled. Volume averages then take x0 on a midpoint grid of
/// `anchor_points` nodes over the box.
///
/// kBox puts every particle, x0 included, on one midpoint grid over the box.
/// That grid is the one the partition-function oracle uses, so the Mayer
/// coefficients and the logarithm of the discrete partition function agree to
/// rounding.
enum class GridAnchor { kPoint, kBox };

struct GridSampler {
  int points = 199;
  GridAnchor anchor = GridAnchor::kPoint;
  int anchor_points = 200;
};

/// Nodes of the kBox grid: -L + (j + 1/2) H, with H chosen so that R / H is
/// a half-integer whenever some admissible node count allows it.
struct MidpointGrid {
  std::vector<double> nodes;
  double spacing = 0.0;
};
MidpointGrid box_grid(const Box& box, double range, int max_points);

inline constexpr int kGridMaxPoints = 200;
inline constexpr int kGridMaxOrder = 3;

using Sampler = std::variant<MonteCarloSampler, GridSampler>;

enum class Method { kMonteCarlo, kGrid };

struct MayerEstimate {
  int order = 0;
  std::vector<double> anchor;  ///< empty for averaged coefficients
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  Method method = Method::kMonteCarlo;
  double sum = 0.0;     ///< raw compensated sample sum (MC)
  double sum_sq = 0.0;  ///< raw sum of squares (MC)
};

/// c_n(x0): (1/(n+1)!) times the integral of Phi^T(x0, ..., xn) prod f(x_i)
/// over x_i in the box within distance nR of x0.
MayerEstimate estimate_c_n(const System& system, std::span<const double> x0, int n,
                           const Sampler& sampler);

/// (1/|box|) integral of f(x0) c_n(x0): the coefficient of lambda^{n+1} in beta p.
MayerEstimate estimate_c_n_volume_avg(const System& system, int n, const Sampler& sampler);

/// Average of c_n(x0) over the bulk cube {d_x > shell_width}.
MayerEstimate estimate_c_n_bulk_avg(const System& system, double shell_width, int n,
                                    const MonteCarloSampler& sampler);

/// Real power series sum_k a_k lambda^k with a standard error per coefficient.
struct PowerSeries {
  std::vector<double> coefficients;
  std::vector<double> errors;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  std::complex<double> operator()(std::complex<double> lambda) const;
  /// sum_k err_k |lambda|^k.
  double error_at(double abs_lambda) const;
};

/// Orders 0..N of Pi(x0) = sum_n c_n(x0) lambda^n.
PowerSeries pi_series(const System& system, std::span<const double> x0, int order,
                      const Sampler& sampler);

struct PQSplit {
  PowerSeries p;       ///< free-boundary coefficients, orders 0..n_cut
  PowerSeries q;       ///< boundary coefficients, orders n_cut+1..tail (lower ones zero)
  int n_cut = 0;
  double q_bound = 0.0;     ///< e^{beta C + 1} / n_cut^{3/2}, valid on the boundary disc
  bool anchor_in_bulk = false;
};

PQSplit split_P_Q(const System& system, std::span<const double> x0, int n_cut, int tail_order,
                  double shell_width, const Sampler& sampler);

struct IdentityReport {
  bool pass = true;
  int order = 0;
  std::vector<double> anchor;
  MayerEstimate with_boundary;
  MayerEstimate free;
};

/// Runs estimate_c_n with the system's boundary and with none, same seed, and
/// compares the raw sample sums bit for bit.
IdentityReport check_inside_identity(const System& system, std::span<const double> x0, int n,
                                     const MonteCarloSampler& sampler);

/// e^{beta kappa rho n} (n+1)^{n-1} / (n+1)! e^{beta C (n+1)} C_v^n.
double cogen_bound(int n, double rho_omega, const PairPotential& p, double beta);
double c0n_bound(int n, const PairPotential& p, double beta);

struct ThetaValue {
  double value = 0.0;       ///< partial sum over the evaluated terms
  double tail_bound = 0.0;  ///< upper bound on the omitted terms
  int terms = 0;
  bool diverges = false;
};

struct ThetaBrackets {
  double lower = 0.0;          ///< e^{bC} [1 + sum (e z)^n / (n+1)^{5/2}]
  double upper = 0.0;          ///< e^{bC+1} [1 + (2 pi)^{-1/2} sum (e z)^n / (n+1)^{5/2}]
  double printed_lower = 0.0;  ///< e^{bC+1} [1 + e^{-1} sum (e z)^n / (n+1)^{5/2}]
  double theta = 0.0;          ///< partial sum with the same number of terms
};

/// Theta(beta, r) = e^{beta C} sum_n (n+1)^{n-1}/(n+1)! (e^{beta C} r C_v)^n.
class MajorantSeries {
 public:
  MajorantSeries(const PairPotential& p, double beta, int max_terms = 10'000);

  double r_star() const;
  ThetaValue theta(double r) const;
  ThetaBrackets brackets(double r) const;

  double beta() const { return beta_; }
  double stability_constant() const { return c_; }
  double c_v() const { return c_v_; }

 private:
  double beta_;
  double c_;
  double c_v_;
  int max_terms_;
};

/// (8/7) [|bulk| / (|box| n_cut^{3/2}) + |shell| / |box|].
double g_lambda(const Regions& regions, int n_cut);

struct PressureDecomposition {
  PowerSeries eta;  ///< lambda^0 .. lambda^{n_cut+1}; the constant term is 0
  int n_cut = 0;
  Regions regions;
  double g_lambda = 0.0;
  double radius_free = 0.0;
  double radius_boundary = 0.0;
  double stability_constant = 0.0;
  double beta = 0.0;
  double kappa_rho = 0.0;

  std::complex<double> eta_at(std::complex<double> lambda) const { return eta(lambda); }
  /// |lambda| e^{beta kappa rho} e^{beta C + 1} g.
  double xi_bound(double abs_lambda) const;
};

/// Everything except eta: regions, n_cut, g, radii. Cheap at any L.
PressureDecomposition decomposition_bounds(const System& system, const ShellSpec& shell);
/// decomposition_bounds plus the eta coefficients, estimated over the bulk cube.
PressureDecomposition decompose_pressure(const System& system, const ShellSpec& shell,
                                         const MonteCarloSampler& sampler);

/// sum_{n=0}^{N} cbar_n lambda^{n+1} for the free boundary: the beta p series
/// through order lambda^{N+1}.
PowerSeries pressure_free_partial(const System& system, int order, const Sampler& sampler);

}  // namespace bcx
