#include "bcx/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "bcx/error.hpp"
#include "bcx/rng.hpp"
#include "bcx/summation.hpp"

namespace bcx {

namespace {

double pair_distance(const double* x, const double* y, int d) {
  double r2 = 0.0;
  for (int c = 0; c < d; ++c) r2 += (x[c] - y[c]) * (x[c] - y[c]);
  return std::sqrt(r2);
}

// e^{-beta (sum_{i<j} v + sum_i w(x_i))}, assembled directly from the pair
// potential and the stored boundary points.
double boltzmann_weight(const System& s, const double* pts, int n) {
  const int d = s.box.dimension;
  double energy = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) energy += s.potential(pair_distance(pts + i * d, pts + j * d, d));
    for (std::size_t b = 0; b < s.boundary.size(); ++b)
      energy += s.potential(pair_distance(pts + i * d, s.boundary.point(b).data(), d));
    if (energy == kHardCore) return 0.0;
  }
  return std::exp(-s.beta * energy);
}

double xi_monte_carlo(const System& s, int n, const MonteCarloSampler& mc, double& error) {
  const int d = s.box.dimension;
  const double L = s.box.half_side;
  const std::uint64_t chunks = (mc.samples + mc.chunk_size - 1) / mc.chunk_size;
  CompensatedSum sum;
  double sum_sq = 0.0;
  std::vector<double> pts(static_cast<std::size_t>(n) * d);
  for (std::uint64_t chunk = 0; chunk < chunks; ++chunk) {
    Stream rng(derive_seed(mc.seed, {stream_tag::kPartitionFunction,
                                     static_cast<std::uint64_t>(n), chunk}));
    const std::uint64_t count = std::min(mc.chunk_size, mc.samples - chunk * mc.chunk_size);
    for (std::uint64_t i = 0; i < count; ++i) {
      for (double& c : pts) c = rng.uniform(-L, L);
      const double w = boltzmann_weight(s, pts.data(), n);
      sum.add(w);
      sum_sq += w * w;
    }
  }
  const double N = static_cast<double>(mc.samples);
  const double mean = sum.value() / N;
  const double var = std::max(0.0, sum_sq / N - mean * mean) * N / (N - 1.0);
  const double scale = std::pow(s.box.volume(), n) / std::tgamma(n + 1.0);
  error = scale * std::sqrt(var / N);
  return scale * mean;
}

// Sum over ordered node tuples, taken as nondecreasing tuples weighted by
// n! / prod(multiplicity!).
double xi_grid(const System& s, int n, const GridSampler& g) {
  if (s.box.dimension != 1)
    throw CapabilityExceeded("grid partition function is available in d = 1 only");
  const MidpointGrid grid = box_grid(s.box, s.potential.range(), g.points);
  const std::size_t m = grid.nodes.size();
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> pts(n);
  CompensatedSum sum;
  while (true) {
    double multiplicity = 1.0;
    int run = 1;
    for (int j = 0; j < n; ++j) {
      pts[j] = grid.nodes[idx[j]];
      if (j > 0 && idx[j] == idx[j - 1]) {
        ++run;
        multiplicity /= run;
      } else {
        run = 1;
      }
    }
    const double w = boltzmann_weight(s, pts.data(), n);
    if (w != 0.0) sum.add(multiplicity * w);
    int j = n - 1;
    while (j >= 0 && idx[j] + 1 == m) --j;
    if (j < 0) break;
    ++idx[j];
    for (int t = j + 1; t < n; ++t) idx[t] = idx[j];
  }
  return std::pow(grid.spacing, n) * sum.value();
}

}  // namespace

TruncatedXi xi_coefficients(const System& system, int max_order, const Sampler& sampler) {
  require(max_order >= 0, "xi_coefficients: order must be >= 0");
  const bool grid = std::holds_alternative<GridSampler>(sampler);
  const int cap = grid ? kXiMaxOrderGrid : kXiMaxOrderMonteCarlo;
  if (max_order > cap)
    throw CapabilityExceeded("partition-function coefficients are capped at order " +
                             std::to_string(cap));
  TruncatedXi xi;
  xi.coefficients.assign(max_order + 1, 0.0);
  xi.errors.assign(max_order + 1, 0.0);
  xi.coefficients[0] = 1.0;
  for (int n = 1; n <= max_order; ++n) {
    if (n == 1 && system.boundary.empty()) {
      xi.coefficients[1] = system.box.volume();
      continue;
    }
    if (grid) {
      xi.coefficients[n] = xi_grid(system, n, std::get<GridSampler>(sampler));
    } else {
      const auto& mc = std::get<MonteCarloSampler>(sampler);
      require(mc.samples >= 2 && mc.chunk_size >= 1, "xi_coefficients: bad sampler");
      xi.coefficients[n] = xi_monte_carlo(system, n, mc, xi.errors[n]);
    }
  }
  return xi;
}

FormalSeries series_log(const FormalSeries& xi) {
  require(!xi.coefficients.empty() && xi.coefficients[0] == 1.0,
          "series_log: constant term must be exactly 1");
  const int N = xi.degree();
  const auto& z = xi.coefficients;
  std::vector<double> sigma = xi.errors;
  sigma.resize(N + 1, 0.0);
  FormalSeries out;
  out.coefficients.assign(N + 1, 0.0);
  out.errors.assign(N + 1, 0.0);
  auto& l = out.coefficients;
  // jac[n][m] = d l_n / d z_m
  std::vector<std::vector<double>> jac(N + 1, std::vector<double>(N + 1, 0.0));
  for (int n = 1; n <= N; ++n) {
    double acc = n * z[n];
    jac[n][n] = n;
    for (int k = 1; k < n; ++k) {
      acc -= k * l[k] * z[n - k];
      for (int m = 1; m <= N; ++m) jac[n][m] -= k * jac[k][m] * z[n - k];
      jac[n][n - k] -= k * l[k];
    }
    l[n] = acc / n;
    double var = 0.0;
    for (int m = 1; m <= N; ++m) {
      jac[n][m] /= n;
      var += jac[n][m] * jac[n][m] * sigma[m] * sigma[m];
    }
    out.errors[n] = std::sqrt(var);
  }
  return out;
}

FormalSeries series_exp(const FormalSeries& s) {
  require(!s.coefficients.empty() && s.coefficients[0] == 0.0,
          "series_exp: constant term must be 0");
  const int N = s.degree();
  FormalSeries out;
  out.coefficients.assign(N + 1, 0.0);
  out.errors.assign(N + 1, 0.0);
  out.coefficients[0] = 1.0;
  for (int n = 1; n <= N; ++n) {
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) acc += k * s.coefficients[k] * out.coefficients[n - k];
    out.coefficients[n] = acc / n;
  }
  return out;
}

std::vector<double> tonks_pressure_coefficients(int max_order, double a) {
  require(max_order >= 1, "tonks: order must be >= 1");
  require(a > 0.0, "tonks: rod length must be > 0");
  // Each pass of p <- lambda exp(-a p) fixes one more coefficient.
  FormalSeries p;
  p.coefficients.assign(max_order + 1, 0.0);
  for (int pass = 0; pass < max_order; ++pass) {
    FormalSeries arg;
    arg.coefficients.assign(max_order + 1, 0.0);
    for (int k = 1; k <= max_order; ++k) arg.coefficients[k] = -a * p.coefficients[k];
    const FormalSeries e = series_exp(arg);
    std::vector<double> next(max_order + 1, 0.0);
    for (int k = 1; k <= max_order; ++k) next[k] = e.coefficients[k - 1];
    p.coefficients = next;
  }
  return p.coefficients;
}

std::vector<double> hard_rod_partition_exact(double half_side, double a, int max_order) {
  require(half_side > 0.0 && a > 0.0 && max_order >= 0, "hard rods: invalid arguments");
  std::vector<double> z(max_order + 1, 0.0);
  z[0] = 1.0;
  for (int n = 1; n <= max_order; ++n) {
    const double free_length = 2.0 * half_side - (n - 1) * a;
    z[n] = free_length > 0.0 ? std::pow(free_length, n) / std::tgamma(n + 1.0) : 0.0;
  }
  return z;
}

ConsistencyReport consistency_check(const System& system, int max_order, const Sampler& sampler) {
  require(max_order >= 1, "consistency_check: order must be >= 1");
  ConsistencyReport report;
  report.deterministic = std::holds_alternative<GridSampler>(sampler);
  const FormalSeries log_xi = series_log(xi_coefficients(system, max_order, sampler));
  const double volume = system.box.volume();
  for (int n = 1; n <= max_order; ++n) {
    const MayerEstimate c = estimate_c_n_volume_avg(system, n - 1, sampler);
    ConsistencyRow row;
    row.order = n;
    row.log_coefficient = log_xi.coefficients[n];
    row.log_error = log_xi.errors[n];
    row.mayer = volume * c.value;
    row.mayer_error = volume * c.std_error;
    const double deviation = std::abs(row.log_coefficient - row.mayer);
    if (report.deterministic) {
      row.tolerance = 1e-8 * std::max(std::abs(row.log_coefficient), std::abs(row.mayer));
    } else {
      row.tolerance = 3.0 * std::hypot(2.0 * row.log_error, row.mayer_error);
    }
    row.pass = deviation <= row.tolerance;
    report.pass = report.pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace bcx
