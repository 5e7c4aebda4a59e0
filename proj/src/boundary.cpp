#include "bcx/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "bcx/error.hpp"
#include "bcx/rng.hpp"

namespace bcx {

double distance_to_box(const Box& box, std::span<const double> y) {
  double d2 = 0.0;
  for (double c : y) {
    const double excess = std::abs(c) - box.half_side;
    if (excess > 0.0) d2 += excess * excess;
  }
  return std::sqrt(d2);
}

BoundaryConfig BoundaryConfig::free(int dimension) {
  require(dimension >= 1, "boundary: dimension must be >= 1");
  BoundaryConfig c;
  c.dimension_ = dimension;
  return c;
}

BoundaryConfig BoundaryConfig::from_points(const Box& box, double range, const CubeGrid& grid,
                                           std::span<const double> points, BoundarySpec spec) {
  const int d = box.dimension;
  require(grid.dimension() == d, "boundary: grid dimension mismatch");
  require(points.size() % d == 0, "boundary: point buffer is not a whole number of points");
  BoundaryConfig c;
  c.dimension_ = d;
  c.spec_ = std::move(spec);
  for (std::size_t i = 0; i < points.size(); i += d) {
    auto y = points.subspan(i, d);
    if (box.contains(y) || distance_to_box(box, y) >= range) continue;
    c.points_.insert(c.points_.end(), y.begin(), y.end());
  }
  c.count_ = c.points_.size() / d;
  c.stride_ = c.count_;
  c.axis_major_.resize(c.count_ * d);
  for (std::size_t i = 0; i < c.count_; ++i)
    for (int k = 0; k < d; ++k) c.axis_major_[k * c.stride_ + i] = c.points_[i * d + k];
  c.rho_omega_ = certify_density(c, grid);
  return c;
}

std::span<const double> BoundaryConfig::point(std::size_t i) const {
  return std::span<const double>(points_).subspan(i * dimension_, dimension_);
}

simd::PointsView BoundaryConfig::axis_major() const {
  return {axis_major_.data(), stride_, count_};
}

BoundaryField::BoundaryField(const BoundaryConfig& config, const PairPotential& potential,
                             const Box& box, double beta)
    : config_(&config), potential_(&potential), box_(box), beta_(beta) {
  require(config.dimension() == box.dimension && potential.dimension() == box.dimension,
          "boundary field: dimension mismatch");
  if (potential.is_piecewise()) energy_table_ = potential.energy_table();
}

double BoundaryField::energy(std::span<const double> x) const {
  if (dist_to_boundary(box_, x) >= potential_->range() || config_->empty()) return 0.0;
  if (potential_->is_piecewise()) {
    return simd::active().radial_sum(x.data(), box_.dimension, config_->axis_major(),
                                     simd::StepTableView::of(energy_table_));
  }
  double w = 0.0;
  for (std::size_t i = 0; i < config_->size(); ++i) {
    auto y = config_->point(i);
    double r2 = 0.0;
    for (int c = 0; c < box_.dimension; ++c) r2 += (x[c] - y[c]) * (x[c] - y[c]);
    w += (*potential_)(std::sqrt(r2));
  }
  return w;
}

double BoundaryField::weight(std::span<const double> x) const {
  const double w = energy(x);
  if (w == 0.0) return 1.0;
  return std::exp(-beta_ * w);
}

double w_omega(const BoundaryConfig& config, const PairPotential& potential, const Box& box,
               std::span<const double> x) {
  return BoundaryField(config, potential, box, 1.0).energy(x);
}

double f_omega(const BoundaryConfig& config, const PairPotential& potential, const Box& box,
               double beta, std::span<const double> x) {
  require(beta > 0.0, "f_omega: beta must be > 0");
  return BoundaryField(config, potential, box, beta).weight(x);
}

double certify_density(const BoundaryConfig& config, const CubeGrid& grid) {
  require(grid.dimension() == config.dimension(), "certify_density: dimension mismatch");
  std::map<std::vector<std::int64_t>, std::size_t> counts;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < config.size(); ++i)
    worst = std::max(worst, ++counts[grid.cell_of(config.point(i))]);
  return static_cast<double>(worst) / grid.cell_volume();
}

PaReport check_prop_pa(const BoundaryConfig& config, const PairPotential& potential,
                       const Box& box, std::span<const double> samples) {
  const int d = box.dimension;
  require(samples.size() % d == 0, "check_prop_pa: sample buffer is not a whole number of points");
  BoundaryField field(config, potential, box, 1.0);
  PaReport r;
  r.bound = -kappa(potential) * config.rho_omega();
  for (std::size_t s = 0; s < samples.size(); s += d) {
    auto x = samples.subspan(s, d);
    const double w = field.energy(x);
    ++r.samples;
    if (dist_to_boundary(box, x) >= potential.range()) {
      if (w != 0.0) ++r.violations;
      continue;
    }
    ++r.near_boundary;
    if (is_hard_core(w)) continue;
    r.min_energy = std::min(r.min_energy, w);
    if (w < r.bound) ++r.violations;
  }
  r.pass = r.violations == 0;
  return r;
}

namespace {

// Lattice (k + 1/2) s restricted to the collar. Along the last axis, only the
// two outer strips are visited when the other coordinates are inside the box.
std::vector<double> grid_shell(const Box& box, double range, double spacing) {
  const int d = box.dimension;
  const double outer = box.half_side + range;
  const auto k_lo = static_cast<std::int64_t>(std::floor(-outer / spacing - 0.5));
  const auto k_hi = static_cast<std::int64_t>(std::ceil(outer / spacing - 0.5));
  std::vector<double> axis;
  for (auto k = k_lo; k <= k_hi; ++k) {
    const double v = (static_cast<double>(k) + 0.5) * spacing;
    if (std::abs(v) < outer) axis.push_back(v);
  }
  std::vector<double> out;
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> y(d);
  while (true) {
    bool inside_prefix = true;
    for (int c = 0; c + 1 < d; ++c) {
      y[c] = axis[idx[c]];
      inside_prefix = inside_prefix && std::abs(y[c]) <= box.half_side;
    }
    for (double v : axis) {
      if (inside_prefix && std::abs(v) <= box.half_side) continue;
      y[d - 1] = v;
      if (!box.contains(y) && distance_to_box(box, y) < range) out.insert(out.end(), y.begin(), y.end());
    }
    int c = 0;
    while (c + 1 < d && idx[c] + 1 == axis.size()) idx[c] = 0, ++c;
    if (c + 1 >= d) break;
    ++idx[c];
  }
  return out;
}

std::vector<double> poisson_shell(const Box& box, double range, double intensity,
                                  std::uint64_t seed) {
  const int d = box.dimension;
  const double outer = box.half_side + range;
  const double shell_volume = std::pow(2.0 * outer, d) - box.volume();
  Stream rng(derive_seed(seed, {stream_tag::kBoundary}));
  std::poisson_distribution<std::uint64_t> count_dist(intensity * shell_volume);
  const std::uint64_t count = intensity > 0.0 ? count_dist(rng.engine()) : 0;
  std::vector<double> out;
  std::vector<double> y(d);
  for (std::uint64_t i = 0; i < count; ++i) {
    do {
      for (double& c : y) c = rng.uniform(-outer, outer);
    } while (box.contains(y));
    // Thinning to the Euclidean collar keeps the process Poisson there.
    if (distance_to_box(box, y) < range) out.insert(out.end(), y.begin(), y.end());
  }
  return out;
}

}  // namespace

BoundaryConfig generate(const BoundarySpec& spec, const Box& box, const CubeGrid& grid,
                        const PairPotential& potential) {
  require(potential.dimension() == box.dimension, "generate: dimension mismatch");
  const double range = potential.range();
  switch (spec.kind) {
    case BoundaryKind::kFree: {
      auto c = BoundaryConfig::free(box.dimension);
      return c;
    }
    case BoundaryKind::kExplicit:
      return BoundaryConfig::from_points(box, range, grid, spec.points, spec);
    case BoundaryKind::kGrid: {
      require(spec.spacing > 0.0, "generate: grid spacing must be > 0");
      auto c = BoundaryConfig::from_points(box, range, grid, grid_shell(box, range, spec.spacing),
                                           spec);
      const double per_axis = std::ceil(grid.cell_size() / spec.spacing - 1e-12);
      c.declared_density_ = std::pow(per_axis / grid.cell_size(), box.dimension);
      return c;
    }
    case BoundaryKind::kPoisson:
      require(spec.intensity >= 0.0, "generate: Poisson intensity must be >= 0");
      return BoundaryConfig::from_points(
          box, range, grid, poisson_shell(box, range, spec.intensity, spec.seed), spec);
  }
  throw InvalidArgument("generate: unknown boundary kind");
}

}  // namespace bcx
