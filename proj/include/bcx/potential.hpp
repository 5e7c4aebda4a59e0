#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace bcx {

/// Energy sentinel inside a hard core. exp(-beta * kHardCore) is exactly 0.
inline constexpr double kHardCore = std::numeric_limits<double>::infinity();

inline bool is_hard_core(double energy) { return energy == kHardCore; }

/// Constant value of a radial profile on [r_lo, r_hi).
struct RadialPiece {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double value = 0.0;

  friend bool operator==(const RadialPiece&, const RadialPiece&) = default;
};

/// A radial step function in squared distance: value(r2) = values[k] where k
/// counts the thresholds with r2 >= threshold. Thresholds ascend; values has
/// one more entry than thresholds. This is the form the SIMD kernels consume.
struct RadialStepTable {
  std::vector<double> thresholds_sq;
  std::vector<double> values;

  double operator()(double r2) const {
    double v = values[0];
    for (std::size_t k = 0; k < thresholds_sq.size(); ++k)
      if (r2 >= thresholds_sq[k]) v = values[k + 1];
    return v;
  }
};

/// Finite-range, stable, radial pair potential.
///
/// The profile is either piecewise constant (the canonical form; every derived
/// integral is then an exact finite sum) or an arbitrary smooth callable on
/// [a, R). Inside the hard core r < a the energy is kHardCore; for r >= R it is
/// exactly zero. The declared stability constant must be a valid constant for
/// the profile; it stands in for the optimal one in every bound.
class PairPotential {
 public:
  static PairPotential piecewise(int dimension, double range, double hard_core,
                                 std::vector<RadialPiece> pieces, double stability_constant,
                                 std::string name = "custom");
  static PairPotential smooth(int dimension, double range, double hard_core,
                              std::function<double(double)> profile, double stability_constant,
                              std::string name = "smooth");

  /// Hard rods (d = 1) / disks / spheres of diameter `diameter`; R = diameter.
  static PairPotential hard_sphere(int dimension, double diameter);
  /// Hard core `hard_core`, constant well `-depth` on [hard_core, range).
  /// d = 1 declares depth * (ceil(range / hard_core) - 1): at most that many
  /// neighbours fit in the well on each side. d >= 2 uses the packing bound
  /// ((2R + a) / a)^d - 1 on the neighbour count.
  static PairPotential square_well(int dimension, double hard_core, double depth, double range);
  /// Identically zero potential with a nominal range.
  static PairPotential zero(int dimension, double range);

  int dimension() const { return dimension_; }
  double range() const { return range_; }
  double hard_core() const { return hard_core_; }
  double stability_constant() const { return stability_constant_; }
  const std::string& name() const { return name_; }
  bool is_piecewise() const { return !smooth_profile_; }
  std::span<const RadialPiece> pieces() const { return pieces_; }

  /// v(r); kHardCore iff r < a, 0 for r >= R.
  double operator()(double r) const;

  /// v as a step table in r^2 (piecewise profiles only).
  RadialStepTable energy_table() const;
  /// e^{-beta v} as a step table in r^2 (piecewise profiles only).
  RadialStepTable boltzmann_table(double beta) const;

 private:
  PairPotential() = default;

  int dimension_ = 1;
  double range_ = 0.0;
  double hard_core_ = 0.0;
  double stability_constant_ = 0.0;
  std::vector<RadialPiece> pieces_;
  std::function<double(double)> smooth_profile_;
  std::string name_;
};

struct ThermoParams {
  double beta = 1.0;
  double lambda = 0.0;
};

double evaluate(const PairPotential& p, double r);
double negative_part(const PairPotential& p, double r);

/// Volume of the d-dimensional ball of radius R.
double ball_volume(int dimension, double radius);

/// 4 C V_d(R): bounds the attractive boundary energy per unit boundary density.
double kappa(const PairPotential& p);

/// C_v(beta) = integral over R^d of (1 - e^{-beta |v(x)|}).
double c_v_integral(const PairPotential& p, double beta, double tolerance = 1e-8);

/// 1 / (e^{beta C + 1} C_v(beta)).
double radius_free(const PairPotential& p, double beta);
/// radius_free * e^{-beta kappa rho}.
double radius_boundary(const PairPotential& p, double beta, double rho_omega);

struct StabilityProbe {
  double value = 0.0;            ///< best -(1/n) sum_{i<j} v found; a lower bound on B_v
  bool exceeds_declared = false; ///< value > declared constant: the declaration is invalid
};

/// Random search for configurations with large -(1/n) sum v; the result is
/// a certified lower bound on the optimal stability constant.
StabilityProbe stability_lower_bound(const PairPotential& p, int n, std::uint64_t trials,
                                     std::uint64_t seed);

}  // namespace bcx
