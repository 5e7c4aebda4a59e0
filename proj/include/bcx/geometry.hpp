#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bcx {

/// The cube [-L, L]^d.
struct Box {
  int dimension = 1;
  double half_side = 1.0;

  double side() const { return 2.0 * half_side; }
  double volume() const;
  /// Closed-cube membership.
  bool contains(std::span<const double> x) const;
};

Box make_box(int dimension, double half_side);

/// dist(x, boundary of the box) = L - max_i |x_i| for x inside.
double dist_to_boundary(const Box& box, std::span<const double> x);

/// Origin-anchored partition of R^d into half-open cubes [k delta, (k+1) delta)^d.
class CubeGrid {
 public:
  CubeGrid(int dimension, double cell_size);

  /// Grid aligned with `box`: L / delta is an integer, so both the box and its
  /// complement are unions of whole cells. Without an explicit cell size the
  /// largest delta <= R (2^{1/d} - 1) / sqrt(d) with that property is used,
  /// which guarantees the cell-count condition analytically.
  static CubeGrid aligned(const Box& box, double range, std::optional<double> cell_size = {});

  int dimension() const { return dimension_; }
  double cell_size() const { return cell_size_; }
  double cell_volume() const;

  std::vector<std::int64_t> cell_of(std::span<const double> x) const;

 private:
  int dimension_;
  double cell_size_;
};

/// Default cell size R (2^{1/d} - 1) / sqrt(d), before alignment.
double default_cell_size(int dimension, double range);

struct TusfReport {
  bool pass = true;
  double worst_ratio = 0.0;  ///< max over samples of delta^d * count / (2 V_d(R))
  std::int64_t worst_count = 0;
};

/// Counts, for every sample point, the cells within distance R and checks
/// delta^d * count <= 2 V_d(R). `samples` holds points back to back.
TusfReport check_tusf(const CubeGrid& grid, double range, std::span<const double> samples);

/// Number of cells at distance <= R from x.
std::int64_t cells_within(const CubeGrid& grid, double range, std::span<const double> x);

/// Shell width h(L) = L^exponent, exponent in (0, 1).
struct ShellSpec {
  double exponent = 0.5;

  double width(double half_side) const;
};

struct Regions {
  double shell_width = 0.0;      ///< h(L)
  double bulk_half_side = 0.0;   ///< L - h(L)
  double box_volume = 0.0;       ///< |Lambda|
  double bulk_volume = 0.0;      ///< |Lambda_h|
  double shell_volume = 0.0;     ///< |Lambda*_h|
};

/// Bulk region {x : d_x > h(L)} and its complement in the box.
Regions regions(const Box& box, double shell_width);
Regions regions(const Box& box, const ShellSpec& shell);

/// floor(h / R - 1); throws when h <= R (box too small).
int n_cut(double shell_width, double range);

}  // namespace bcx
