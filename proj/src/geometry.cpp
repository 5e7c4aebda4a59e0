#include "bcx/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "bcx/error.hpp"
#include "bcx/potential.hpp"

namespace bcx {

double Box::volume() const { return std::pow(side(), dimension); }

bool Box::contains(std::span<const double> x) const {
  for (double c : x)
    if (!(std::abs(c) <= half_side)) return false;
  return true;
}

Box make_box(int dimension, double half_side) {
  require(dimension >= 1, "box: dimension must be >= 1");
  require(std::isfinite(half_side) && half_side > 0.0, "box: half side must be > 0");
  return Box{dimension, half_side};
}

double dist_to_boundary(const Box& box, std::span<const double> x) {
  require(static_cast<int>(x.size()) == box.dimension, "dist_to_boundary: dimension mismatch");
  require(box.contains(x), "dist_to_boundary: point outside the box");
  double m = 0.0;
  for (double c : x) m = std::max(m, std::abs(c));
  return box.half_side - m;
}

CubeGrid::CubeGrid(int dimension, double cell_size) : dimension_(dimension), cell_size_(cell_size) {
  require(dimension >= 1, "grid: dimension must be >= 1");
  require(std::isfinite(cell_size) && cell_size > 0.0, "grid: cell size must be > 0");
}

double default_cell_size(int dimension, double range) {
  return range * (std::pow(2.0, 1.0 / dimension) - 1.0) / std::sqrt(static_cast<double>(dimension));
}

CubeGrid CubeGrid::aligned(const Box& box, double range, std::optional<double> cell_size) {
  if (cell_size) {
    const double cells = box.half_side / *cell_size;
    require(*cell_size > 0.0 && std::abs(cells - std::round(cells)) <= 1e-9 * std::max(1.0, cells),
            "grid: L must be an integer multiple of the cell size");
    return CubeGrid(box.dimension, *cell_size);
  }
  const double target = default_cell_size(box.dimension, range);
  const double cells = std::ceil(box.half_side / target - 1e-12);
  return CubeGrid(box.dimension, box.half_side / cells);
}

double CubeGrid::cell_volume() const { return std::pow(cell_size_, dimension_); }

std::vector<std::int64_t> CubeGrid::cell_of(std::span<const double> x) const {
  require(static_cast<int>(x.size()) == dimension_, "cell_of: dimension mismatch");
  std::vector<std::int64_t> k(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    k[i] = static_cast<std::int64_t>(std::floor(x[i] / cell_size_));
  return k;
}

std::int64_t cells_within(const CubeGrid& grid, double range, std::span<const double> x) {
  const int d = grid.dimension();
  const double delta = grid.cell_size();
  std::vector<std::int64_t> lo(d), hi(d), k(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = static_cast<std::int64_t>(std::floor((x[i] - range) / delta)) - 1;
    hi[i] = static_cast<std::int64_t>(std::floor((x[i] + range) / delta)) + 1;
    k[i] = lo[i];
  }
  const double r2 = range * range;
  std::int64_t count = 0;
  while (true) {
    double dist2 = 0.0;
    for (int i = 0; i < d; ++i) {
      const double left = static_cast<double>(k[i]) * delta;
      const double right = static_cast<double>(k[i] + 1) * delta;
      const double gap = std::max({0.0, left - x[i], x[i] - right});
      dist2 += gap * gap;
    }
    if (dist2 <= r2) ++count;
    int axis = 0;
    while (axis < d && k[axis] == hi[axis]) k[axis] = lo[axis], ++axis;
    if (axis == d) break;
    ++k[axis];
  }
  return count;
}

TusfReport check_tusf(const CubeGrid& grid, double range, std::span<const double> samples) {
  const int d = grid.dimension();
  require(samples.size() % d == 0, "check_tusf: sample buffer is not a whole number of points");
  const double limit = 2.0 * ball_volume(d, range);
  TusfReport report;
  for (std::size_t s = 0; s < samples.size(); s += d) {
    const auto count = cells_within(grid, range, samples.subspan(s, d));
    const double ratio = grid.cell_volume() * static_cast<double>(count) / limit;
    if (ratio > report.worst_ratio) {
      report.worst_ratio = ratio;
      report.worst_count = count;
    }
  }
  report.pass = report.worst_ratio <= 1.0;
  return report;
}

double ShellSpec::width(double half_side) const {
  require(exponent > 0.0 && exponent < 1.0, "shell: exponent must lie in (0, 1)");
  return std::pow(half_side, exponent);
}

Regions regions(const Box& box, double shell_width) {
  require(shell_width >= 0.0 && shell_width < box.half_side,
          "regions: shell width must satisfy 0 <= h < L");
  Regions r;
  r.shell_width = shell_width;
  r.bulk_half_side = box.half_side - shell_width;
  r.box_volume = box.volume();
  r.bulk_volume = std::pow(2.0 * r.bulk_half_side, box.dimension);
  r.shell_volume = r.box_volume - r.bulk_volume;
  return r;
}

Regions regions(const Box& box, const ShellSpec& shell) {
  return regions(box, shell.width(box.half_side));
}

int n_cut(double shell_width, double range) {
  require(range > 0.0, "n_cut: range must be > 0");
  require(shell_width > range, "n_cut: h(L) <= R, box too small");
  return static_cast<int>(std::floor(shell_width / range - 1.0));
}

}  // namespace bcx
