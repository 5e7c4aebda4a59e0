#include "bcx/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bcx/error.hpp"
#include "bcx/rng.hpp"

namespace bcx {

namespace {

void validate_common(int dimension, double range, double hard_core, double stability_constant) {
  require(dimension >= 1, "potential: dimension must be >= 1");
  require(std::isfinite(range) && range > 0.0, "potential: range must be > 0");
  require(std::isfinite(hard_core) && hard_core >= 0.0 && hard_core <= range,
          "potential: hard core radius must lie in [0, R]");
  require(std::isfinite(stability_constant) && stability_constant >= 0.0,
          "potential: stability constant must be >= 0");
}

double surface_factor(int d) { return d * ball_volume(d, 1.0); }

// Adaptive Simpson on [lo, hi].
template <class F>
double simpson_step(const F& f, double lo, double hi, double f_lo, double f_mid, double f_hi,
                    double whole, double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double lm = 0.5 * (lo + mid);
  const double rm = 0.5 * (mid + hi);
  const double f_lm = f(lm);
  const double f_rm = f(rm);
  const double left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lm + f_mid);
  const double right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_rm + f_hi);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, lo, mid, f_lo, f_lm, f_mid, left, 0.5 * tol, depth - 1) +
         simpson_step(f, mid, hi, f_mid, f_rm, f_hi, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double lo, double hi, double tol) {
  if (hi <= lo) return 0.0;
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  const double f_mid = f(0.5 * (lo + hi));
  const double whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
  return simpson_step(f, lo, hi, f_lo, f_mid, f_hi, whole, tol, 48);
}

}  // namespace

PairPotential PairPotential::piecewise(int dimension, double range, double hard_core,
                                       std::vector<RadialPiece> pieces,
                                       double stability_constant, std::string name) {
  validate_common(dimension, range, hard_core, stability_constant);
  std::sort(pieces.begin(), pieces.end(),
            [](const RadialPiece& a, const RadialPiece& b) { return a.r_lo < b.r_lo; });
  // A leading [0, a) piece at +inf restates the hard core.
  if (!pieces.empty() && is_hard_core(pieces.front().value) && pieces.front().r_lo == 0.0 &&
      pieces.front().r_hi == hard_core) {
    pieces.erase(pieces.begin());
  }
  double cursor = hard_core;
  for (const auto& piece : pieces) {
    require(std::isfinite(piece.value),
            "potential: divergent piece outside the hard core is not supported");
    require(piece.r_lo < piece.r_hi, "potential: piece must satisfy r_lo < r_hi");
    require(piece.r_lo >= cursor, "potential: pieces overlap or start inside the hard core");
    require(piece.r_hi <= range, "potential: piece extends beyond the range R");
    require(piece.value >= -2.0 * stability_constant,
            "potential: piece value below -2C contradicts the declared stability constant");
    cursor = piece.r_hi;
  }
  PairPotential p;
  p.dimension_ = dimension;
  p.range_ = range;
  p.hard_core_ = hard_core;
  p.stability_constant_ = stability_constant;
  p.pieces_ = std::move(pieces);
  p.name_ = std::move(name);
  return p;
}

PairPotential PairPotential::smooth(int dimension, double range, double hard_core,
                                    std::function<double(double)> profile,
                                    double stability_constant, std::string name) {
  validate_common(dimension, range, hard_core, stability_constant);
  require(static_cast<bool>(profile), "potential: empty smooth profile");
  PairPotential p;
  p.dimension_ = dimension;
  p.range_ = range;
  p.hard_core_ = hard_core;
  p.stability_constant_ = stability_constant;
  p.smooth_profile_ = std::move(profile);
  p.name_ = std::move(name);
  return p;
}

PairPotential PairPotential::hard_sphere(int dimension, double diameter) {
  require(diameter > 0.0, "hard sphere: diameter must be > 0");
  return piecewise(dimension, diameter, diameter, {}, 0.0,
                   dimension == 1 ? "hard_rod" : "hard_sphere");
}

PairPotential PairPotential::square_well(int dimension, double hard_core, double depth,
                                         double range) {
  require(hard_core > 0.0 && hard_core < range, "square well: need 0 < a < R");
  require(depth >= 0.0, "square well: depth must be >= 0");
  double neighbours = 0.0;
  if (dimension == 1) {
    neighbours = 2.0 * (std::ceil(range / hard_core) - 1.0);
  } else {
    neighbours = std::pow((2.0 * range + hard_core) / hard_core, dimension) - 1.0;
  }
  const double declared = depth * neighbours / 2.0;
  return piecewise(dimension, range, hard_core, {{hard_core, range, -depth}}, declared,
                   "square_well");
}

PairPotential PairPotential::zero(int dimension, double range) {
  return piecewise(dimension, range, 0.0, {}, 0.0, "zero");
}

double PairPotential::operator()(double r) const {
  require(r >= 0.0, "potential: negative distance");
  if (r < hard_core_) return kHardCore;
  if (r >= range_) return 0.0;
  if (smooth_profile_) return smooth_profile_(r);
  for (const auto& piece : pieces_)
    if (r >= piece.r_lo && r < piece.r_hi) return piece.value;
  return 0.0;
}

RadialStepTable PairPotential::energy_table() const {
  require(is_piecewise(), "step tables need a piecewise-constant profile");
  RadialStepTable t;
  double cursor = 0.0;
  if (hard_core_ > 0.0) {
    t.values.push_back(kHardCore);
    cursor = hard_core_;
  } else {
    t.values.push_back(0.0);
  }
  auto open_interval = [&](double start, double value) {
    if (t.values.size() == 1 && start == 0.0) {
      t.values[0] = value;
      return;
    }
    t.thresholds_sq.push_back(start * start);
    t.values.push_back(value);
  };
  for (const auto& piece : pieces_) {
    if (piece.r_lo > cursor) open_interval(cursor, 0.0);
    open_interval(piece.r_lo, piece.value);
    cursor = piece.r_hi;
  }
  if (cursor < range_) open_interval(cursor, 0.0);
  open_interval(range_, 0.0);
  return t;
}

RadialStepTable PairPotential::boltzmann_table(double beta) const {
  require(beta > 0.0, "beta must be > 0");
  RadialStepTable t = energy_table();
  for (double& v : t.values) v = std::exp(-beta * v);
  return t;
}

double evaluate(const PairPotential& p, double r) { return p(r); }

double negative_part(const PairPotential& p, double r) { return std::max(0.0, -p(r)); }

double ball_volume(int dimension, double radius) {
  require(dimension >= 1, "ball_volume: dimension must be >= 1");
  require(radius >= 0.0, "ball_volume: radius must be >= 0");
  switch (dimension) {
    case 1: return 2.0 * radius;
    case 2: return std::numbers::pi * radius * radius;
    case 3: return 4.0 / 3.0 * std::numbers::pi * radius * radius * radius;
    default: break;
  }
  const double d = dimension;
  return std::pow(std::numbers::pi, d / 2.0) * std::pow(radius, d) / std::tgamma(d / 2.0 + 1.0);
}

double kappa(const PairPotential& p) {
  return 4.0 * p.stability_constant() * ball_volume(p.dimension(), p.range());
}

double c_v_integral(const PairPotential& p, double beta, double tolerance) {
  require(beta > 0.0, "c_v_integral: beta must be > 0");
  const int d = p.dimension();
  const double core = ball_volume(d, p.hard_core());
  if (p.is_piecewise()) {
    double total = core;
    for (const auto& piece : p.pieces()) {
      const double shell = ball_volume(d, piece.r_hi) - ball_volume(d, piece.r_lo);
      total += -std::expm1(-beta * std::abs(piece.value)) * shell;
    }
    return total;
  }
  const double surface = surface_factor(d);
  auto integrand = [&](double r) {
    const double v = p(r);
    if (!std::isfinite(v))
      throw InvalidArgument("c_v_integral: profile diverges outside the hard core");
    return -std::expm1(-beta * std::abs(v)) * surface * std::pow(r, d - 1);
  };
  return core + adaptive_simpson(integrand, p.hard_core(), p.range(), tolerance);
}

double radius_free(const PairPotential& p, double beta) {
  return 1.0 / (std::exp(beta * p.stability_constant() + 1.0) * c_v_integral(p, beta));
}

double radius_boundary(const PairPotential& p, double beta, double rho_omega) {
  require(rho_omega >= 0.0, "radius_boundary: rho_omega must be >= 0");
  return radius_free(p, beta) / std::exp(beta * kappa(p) * rho_omega);
}

StabilityProbe stability_lower_bound(const PairPotential& p, int n, std::uint64_t trials,
                                     std::uint64_t seed) {
  require(n >= 2, "stability_lower_bound: n must be >= 2");
  const int d = p.dimension();
  const double side = p.range() * std::pow(static_cast<double>(n), 1.0 / d);
  Stream rng(derive_seed(seed, {stream_tag::kStability, static_cast<std::uint64_t>(n)}));
  std::vector<double> x(static_cast<std::size_t>(n) * d);
  double best = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (double& c : x) c = rng.uniform(0.0, side);
    double energy = 0.0;
    for (int i = 0; i < n && std::isfinite(energy); ++i) {
      for (int j = i + 1; j < n; ++j) {
        double r2 = 0.0;
        for (int c = 0; c < d; ++c) {
          const double dx = x[i * d + c] - x[j * d + c];
          r2 += dx * dx;
        }
        energy += p(std::sqrt(r2));
        if (!std::isfinite(energy)) break;
      }
    }
    if (!std::isfinite(energy)) continue;
    best = std::max(best, -energy / n);
  }
  return {best, best > p.stability_constant() * (1.0 + 1e-12)};
}

}  // namespace bcx
