#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bcx/geometry.hpp"
#include "bcx/potential.hpp"
#include "bcx/simd.hpp"

namespace bcx {

enum class BoundaryKind { kFree, kExplicit, kGrid, kPoisson };

struct BoundarySpec;
class BoundaryConfig;
BoundaryConfig generate(const BoundarySpec& spec, const Box& box, const CubeGrid& grid,
                        const PairPotential& potential);

/// How a boundary configuration is produced.
struct BoundarySpec {
  BoundaryKind kind = BoundaryKind::kFree;
  std::vector<double> points;  ///< explicit: points back to back
  double spacing = 0.0;        ///< grid: lattice spacing s, lattice (k + 1/2) s
  double intensity = 0.0;      ///< poisson: intensity per unit volume
  std::uint64_t seed = 0;      ///< poisson

  friend bool operator==(const BoundarySpec&, const BoundarySpec&) = default;
};

/// Fixed exterior particles. Only the R-collar {y outside the box, dist(y, box) < R}
/// is stored: farther points never interact with the inside. Duplicates are
/// allowed. The density certificate is max over cells of count / |cell|.
class BoundaryConfig {
 public:
  static BoundaryConfig free(int dimension);
  /// Keeps the collar points of `points` and certifies them on `grid`.
  static BoundaryConfig from_points(const Box& box, double range, const CubeGrid& grid,
                                    std::span<const double> points, BoundarySpec spec = {});

  int dimension() const { return dimension_; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  std::span<const double> point(std::size_t i) const;
  /// All points back to back.
  std::span<const double> points() const { return points_; }
  double rho_omega() const { return rho_omega_; }
  /// Target density the generator guarantees, when it has one (grid shells).
  std::optional<double> declared_density() const { return declared_density_; }
  const BoundarySpec& spec() const { return spec_; }
  simd::PointsView axis_major() const;

 private:
  friend BoundaryConfig generate(const BoundarySpec&, const Box&, const CubeGrid&,
                                 const PairPotential&);

  int dimension_ = 1;
  std::size_t count_ = 0;
  std::vector<double> points_;
  std::vector<double> axis_major_;
  std::size_t stride_ = 0;
  double rho_omega_ = 0.0;
  std::optional<double> declared_density_;
  BoundarySpec spec_;
};

/// Euclidean distance from y to the closed box (0 inside).
double distance_to_box(const Box& box, std::span<const double> y);

/// Boundary energy and weight for one (configuration, potential, box, beta),
/// with the step tables built once.
class BoundaryField {
 public:
  BoundaryField(const BoundaryConfig& config, const PairPotential& potential, const Box& box,
                double beta);

  /// w(x) = sum over stored y of v(x - y); exactly 0 when d_x >= R;
  /// kHardCore on a hard-core overlap.
  double energy(std::span<const double> x) const;
  /// e^{-beta w(x)}; exactly 1 when d_x >= R, 0 on overlap.
  double weight(std::span<const double> x) const;

 private:
  const BoundaryConfig* config_;
  const PairPotential* potential_;
  Box box_;
  double beta_;
  RadialStepTable energy_table_;
};

double w_omega(const BoundaryConfig& config, const PairPotential& potential, const Box& box,
               std::span<const double> x);
double f_omega(const BoundaryConfig& config, const PairPotential& potential, const Box& box,
               double beta, std::span<const double> x);

/// Exact max over cells of #(points in cell) / |cell|.
double certify_density(const BoundaryConfig& config, const CubeGrid& grid);

struct PaReport {
  bool pass = true;
  std::size_t samples = 0;
  std::size_t near_boundary = 0;  ///< samples with d_x < R
  std::size_t violations = 0;
  double bound = 0.0;             ///< -kappa rho
  double min_energy = 0.0;        ///< smallest finite w among near-boundary samples
};

/// w = 0 exactly when d_x >= R and w >= -kappa rho otherwise, for every sample.
PaReport check_prop_pa(const BoundaryConfig& config, const PairPotential& potential,
                       const Box& box, std::span<const double> samples);

/// Deterministic given the spec (including its seed); emits collar points only
/// and certifies them on `grid`.
BoundaryConfig generate(const BoundarySpec& spec, const Box& box, const CubeGrid& grid,
                        const PairPotential& potential);

}  // namespace bcx
