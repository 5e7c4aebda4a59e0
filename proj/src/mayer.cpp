#include "bcx/mayer.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "bcx/error.hpp"
#include "bcx/rng.hpp"
#include "bcx/simd.hpp"
#include "bcx/summation.hpp"
#include "bcx/ursell.hpp"

namespace bcx {

System::System(PairPotential potential_, Box box_, BoundaryConfig boundary_, double beta_)
    : potential(std::move(potential_)),
      box(box_),
      boundary(std::move(boundary_)),
      beta(beta_) {
  require(beta > 0.0, "system: beta must be > 0");
  require(potential.dimension() == box.dimension && boundary.dimension() == box.dimension,
          "system: dimension mismatch between potential, box and boundary");
}

System System::with_free_boundary() const {
  return System(potential, box, BoundaryConfig::free(box.dimension), beta);
}

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

void check_order(int n) {
  require(n >= 0, "order must be >= 0");
  if (n + 1 > kSubsetRecursionCap)
    throw CapabilityExceeded("order " + std::to_string(n) + " needs " + std::to_string(n + 1) +
                             " points; the Ursell evaluator is capped at " +
                             std::to_string(kSubsetRecursionCap));
}

// Phi^T for batches of (n+1)-point configurations. When the graph of pairs
// closer than R is disconnected, every connected graph has a vanishing bond
// and Phi^T is exactly 0; such configurations are never pushed. The same test
// rejects points farther than nR from x0, which is what restricts the
// integration domain to the ball.
class ClusterBatch {
 public:
  static constexpr std::size_t kCapacity = 64;

  ClusterBatch(const System& s, int k)
      : potential_(s.potential),
        beta_(s.beta),
        k_(k),
        d_(s.box.dimension),
        range_sq_(s.potential.range() * s.potential.range()),
        kernels_(simd::active()),
        coords_(kCapacity * k * d_),
        factors_(kCapacity),
        phi_(kCapacity),
        scratch_(simd::ursell_scratch_size(k)) {
    if (potential_.is_piecewise()) {
      table_ = potential_.boltzmann_table(beta_);
      view_ = simd::StepTableView::of(table_);
    }
  }
  ClusterBatch(const ClusterBatch&) = delete;
  ClusterBatch& operator=(const ClusterBatch&) = delete;

  bool connected(const double* pts) const {
    if (k_ == 1) return true;
    std::uint32_t adjacency[32] = {};
    for (int i = 0; i < k_; ++i)
      for (int j = i + 1; j < k_; ++j) {
        double r2 = 0.0;
        for (int c = 0; c < d_; ++c) {
          const double dx = pts[i * d_ + c] - pts[j * d_ + c];
          r2 = r2 + dx * dx;
        }
        if (r2 < range_sq_) {
          adjacency[i] |= 1u << j;
          adjacency[j] |= 1u << i;
        }
      }
    std::uint32_t seen = 1u, frontier = 1u;
    while (frontier) {
      std::uint32_t next = 0;
      for (std::uint32_t f = frontier; f; f &= f - 1) next |= adjacency[std::countr_zero(f)];
      frontier = next & ~seen;
      seen |= next;
    }
    return seen == (std::uint32_t{1} << k_) - 1;
  }

  void push(const double* pts, double factor, CompensatedSum& sum, double& sum_sq) {
    for (int i = 0; i < k_; ++i)
      for (int c = 0; c < d_; ++c) coords_[(i * d_ + c) * kCapacity + count_] = pts[i * d_ + c];
    factors_[count_++] = factor;
    if (count_ == kCapacity) flush(sum, sum_sq);
  }

  // Adds factor * Phi^T of the pending configurations in push order.
  void flush(CompensatedSum& sum, double& sum_sq) {
    if (count_ == 0) return;
    if (potential_.is_piecewise()) {
      kernels_.ursell_batch(k_, d_, coords_.data(), kCapacity, count_, view_, phi_.data(),
                            scratch_.data());
    } else {
      evaluate_smooth();
    }
    for (std::size_t s = 0; s < count_; ++s) {
      const double w = factors_[s] * phi_[s];
      sum.add(w);
      sum_sq += w * w;
    }
    count_ = 0;
  }

 private:
  void evaluate_smooth() {
    std::vector<double> bonds(static_cast<std::size_t>(k_) * k_, 1.0);
    for (std::size_t s = 0; s < count_; ++s) {
      for (int i = 0; i < k_; ++i)
        for (int j = 0; j < i; ++j) {
          double r2 = 0.0;
          for (int c = 0; c < d_; ++c) {
            const double dx = coords_[(i * d_ + c) * kCapacity + s] -
                              coords_[(j * d_ + c) * kCapacity + s];
            r2 = r2 + dx * dx;
          }
          const double v = potential_(std::sqrt(r2));
          bonds[i * k_ + j] = bonds[j * k_ + i] = (v == 0.0) ? 1.0 : std::exp(-beta_ * v);
        }
      phi_[s] = simd::ursell_from_boltzmann(k_, bonds.data(), scratch_.data());
    }
  }

  const PairPotential& potential_;
  double beta_;
  int k_;
  int d_;
  double range_sq_;
  const simd::Kernels& kernels_;
  RadialStepTable table_;
  simd::StepTableView view_;
  std::vector<double> coords_;
  std::vector<double> factors_;
  std::vector<double> phi_;
  std::vector<double> scratch_;
  std::size_t count_ = 0;
};

template <class F>
void parallel_chunks(std::uint64_t chunks, unsigned workers, F&& run_chunk) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));
  if (workers <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      try {
        for (std::uint64_t c = next++; c < chunks; c = next++) run_chunk(c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = chunks;
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct AnchorMode {
  std::vector<double> fixed;  // empty: x0 uniform in the cube of half side `half_side`
  double half_side = 0.0;
  bool weight_anchor = false;  // multiply by f(x0)
  std::uint64_t tag = 0;
};

MayerEstimate finish(int n, std::vector<double> anchor, const CompensatedSum& sum, double sum_sq,
                     std::uint64_t count) {
  MayerEstimate e;
  e.order = n;
  e.anchor = std::move(anchor);
  e.method = Method::kMonteCarlo;
  e.samples = count;
  e.sum = sum.value();
  e.sum_sq = sum_sq;
  const double N = static_cast<double>(count);
  e.value = e.sum / N;
  if (count > 1) {
    const double var = std::max(0.0, e.sum_sq / N - e.value * e.value) * N / (N - 1.0);
    e.std_error = std::sqrt(var / N);
  }
  return e;
}

MayerEstimate monte_carlo(const System& s, int n, const AnchorMode& mode,
                          const MonteCarloSampler& mc) {
  require(mc.samples >= 2, "Monte Carlo: need at least 2 samples");
  require(mc.chunk_size >= 1, "Monte Carlo: chunk size must be >= 1");
  const int d = s.box.dimension;
  const int k = n + 1;
  const double L = s.box.half_side;
  const double reach = n * s.potential.range();
  const double inv_fact = 1.0 / factorial(n + 1);
  const std::uint64_t chunks = (mc.samples + mc.chunk_size - 1) / mc.chunk_size;

  struct ChunkResult {
    CompensatedSum sum;
    double sum_sq = 0.0;
  };
  std::vector<ChunkResult> results(chunks);

  parallel_chunks(chunks, mc.workers, [&](std::uint64_t chunk) {
    Stream rng(derive_seed(mc.seed, {mode.tag, static_cast<std::uint64_t>(n), chunk}));
    ClusterBatch batch(s, k);
    BoundaryField field(s.boundary, s.potential, s.box, s.beta);
    std::vector<double> pts(static_cast<std::size_t>(k) * d);
    std::vector<double> lo(d), hi(d);
    const std::uint64_t begin = chunk * mc.chunk_size;
    const std::uint64_t count = std::min(mc.chunk_size, mc.samples - begin);
    ChunkResult& r = results[chunk];
    for (std::uint64_t i = 0; i < count; ++i) {
      if (mode.fixed.empty()) {
        for (int c = 0; c < d; ++c) pts[c] = rng.uniform(-mode.half_side, mode.half_side);
      } else {
        std::copy(mode.fixed.begin(), mode.fixed.end(), pts.begin());
      }
      double volume = 1.0;
      for (int c = 0; c < d; ++c) {
        lo[c] = std::max(-L, pts[c] - reach);
        hi[c] = std::min(L, pts[c] + reach);
        volume *= hi[c] - lo[c];
      }
      for (int j = 1; j < k; ++j)
        for (int c = 0; c < d; ++c) pts[j * d + c] = rng.uniform(lo[c], hi[c]);
      if (!batch.connected(pts.data())) continue;
      double w = std::pow(volume, n) * inv_fact;
      if (mode.weight_anchor) w *= field.weight(std::span<const double>(pts.data(), d));
      for (int j = 1; j < k; ++j) w *= field.weight(std::span<const double>(pts.data() + j * d, d));
      if (w == 0.0) continue;
      batch.push(pts.data(), w, r.sum, r.sum_sq);
    }
    batch.flush(r.sum, r.sum_sq);
  });

  CompensatedSum sum;
  double sum_sq = 0.0;
  for (const auto& r : results) {
    sum.add(r.sum);
    sum_sq += r.sum_sq;
  }
  return finish(n, mode.fixed, sum, sum_sq, mc.samples);
}

void check_grid(const System& s, int n, const GridSampler& g) {
  if (s.box.dimension != 1)
    throw CapabilityExceeded("deterministic grid quadrature is available in d = 1 only");
  if (n > kGridMaxOrder)
    throw CapabilityExceeded("deterministic grid quadrature is capped at order " +
                             std::to_string(kGridMaxOrder));
  if (g.points > kGridMaxPoints || g.anchor_points > kGridMaxPoints)
    throw CapabilityExceeded("deterministic grid is capped at " + std::to_string(kGridMaxPoints) +
                             " points per axis");
  require(g.points >= 3 && g.anchor_points >= 1, "grid: too few points");
}

// Nodes x0 + j H, |j| <= J, H = R / (q + 1/2) with n (q + 1/2) <= J, clipped to the box.
MidpointGrid point_grid(const System& s, double x0, int n, int points) {
  const int J = (points - 1) / 2;
  const int q = static_cast<int>(std::floor(static_cast<double>(J) / n - 0.5));
  require(q >= 0, "grid: too few points for this order");
  MidpointGrid g;
  g.spacing = s.potential.range() / (q + 0.5);
  for (int j = -J; j <= J; ++j) {
    const double x = x0 + j * g.spacing;
    if (std::abs(x) <= s.box.half_side) g.nodes.push_back(x);
  }
  return g;
}

// (H^n / (n+1)!) sum over node tuples of Phi^T(x0, ...) prod f(x_i).
double grid_c_n(const System& s, double x0, int n, const MidpointGrid& grid, ClusterBatch& batch,
                const BoundaryField& field, std::uint64_t& evaluated) {
  if (n == 0) return 1.0;
  const double reach = n * s.potential.range();
  std::vector<double> nodes, weights;
  for (double x : grid.nodes)
    if (std::abs(x - x0) < reach) {
      nodes.push_back(x);
      weights.push_back(field.weight(std::span<const double>(&x, 1)));
    }
  const double prefactor = std::pow(grid.spacing, n) / factorial(n + 1);
  CompensatedSum sum;
  double sum_sq = 0.0;
  if (nodes.empty()) return 0.0;
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> pts(n + 1);
  pts[0] = x0;
  while (true) {
    ++evaluated;
    double w = prefactor;
    for (int j = 0; j < n; ++j) {
      pts[j + 1] = nodes[idx[j]];
      w *= weights[idx[j]];
    }
    if (w != 0.0 && batch.connected(pts.data())) batch.push(pts.data(), w, sum, sum_sq);
    int j = n - 1;
    while (j >= 0 && idx[j] + 1 == nodes.size()) idx[j--] = 0;
    if (j < 0) break;
    ++idx[j];
  }
  batch.flush(sum, sum_sq);
  return sum.value();
}

MayerEstimate grid_anchored(const System& s, double x0, int n, const GridSampler& g) {
  check_grid(s, n, g);
  ClusterBatch batch(s, n + 1);
  BoundaryField field(s.boundary, s.potential, s.box, s.beta);
  MidpointGrid grid = (g.anchor == GridAnchor::kPoint) ? point_grid(s, x0, n, g.points)
                                                       : box_grid(s.box, s.potential.range(), g.points);
  MayerEstimate e;
  e.order = n;
  e.anchor = {x0};
  e.method = Method::kGrid;
  e.value = grid_c_n(s, x0, n, grid, batch, field, e.samples);
  e.sum = e.value;
  return e;
}

MayerEstimate grid_volume_avg(const System& s, int n, const GridSampler& g) {
  check_grid(s, n, g);
  ClusterBatch batch(s, n + 1);
  BoundaryField field(s.boundary, s.potential, s.box, s.beta);
  const double L = s.box.half_side;
  std::vector<double> anchors;
  MidpointGrid shared;
  if (g.anchor == GridAnchor::kBox) {
    shared = box_grid(s.box, s.potential.range(), g.points);
    anchors = shared.nodes;
  } else {
    const double h = 2.0 * L / g.anchor_points;
    for (int k = 0; k < g.anchor_points; ++k) anchors.push_back(-L + (k + 0.5) * h);
  }
  MayerEstimate e;
  e.order = n;
  e.method = Method::kGrid;
  CompensatedSum sum;
  for (double x0 : anchors) {
    const double f0 = field.weight(std::span<const double>(&x0, 1));
    if (f0 == 0.0) continue;
    const double c = (g.anchor == GridAnchor::kBox)
                         ? grid_c_n(s, x0, n, shared, batch, field, e.samples)
                         : grid_c_n(s, x0, n, point_grid(s, x0, std::max(n, 1), g.points), batch,
                                    field, e.samples);
    sum.add(f0 * c);
  }
  e.value = sum.value() / static_cast<double>(anchors.size());
  e.sum = e.value;
  return e;
}

}  // namespace

MidpointGrid box_grid(const Box& box, double range, int max_points) {
  require(max_points >= 1, "grid: need at least one point");
  const double side = box.side();
  int m = max_points;
  for (int q = static_cast<int>(std::floor(max_points * range / side - 0.5)); q >= 0; --q) {
    const double mq = side * (q + 0.5) / range;
    if (mq <= max_points + 1e-9 && std::abs(mq - std::round(mq)) <= 1e-9 * mq) {
      m = static_cast<int>(std::round(mq));
      break;
    }
  }
  MidpointGrid g;
  g.spacing = side / m;
  for (int j = 0; j < m; ++j) g.nodes.push_back(-box.half_side + (j + 0.5) * g.spacing);
  return g;
}

MayerEstimate estimate_c_n(const System& system, std::span<const double> x0, int n,
                           const Sampler& sampler) {
  check_order(n);
  require(static_cast<int>(x0.size()) == system.box.dimension, "estimate_c_n: anchor dimension");
  require(system.box.contains(x0), "estimate_c_n: anchor outside the box");
  std::vector<double> anchor(x0.begin(), x0.end());
  if (n == 0) {
    MayerEstimate e;
    e.anchor = anchor;
    e.value = e.sum = 1.0;
    e.method = std::holds_alternative<GridSampler>(sampler) ? Method::kGrid : Method::kMonteCarlo;
    return e;
  }
  if (const auto* g = std::get_if<GridSampler>(&sampler)) return grid_anchored(system, x0[0], n, *g);
  const auto& mc = std::get<MonteCarloSampler>(sampler);
  return monte_carlo(system, n, AnchorMode{anchor, 0.0, false, stream_tag::kAnchored}, mc);
}

MayerEstimate estimate_c_n_volume_avg(const System& system, int n, const Sampler& sampler) {
  check_order(n);
  if (n == 0 && system.boundary.empty()) {
    MayerEstimate e;
    e.value = e.sum = 1.0;
    e.method = std::holds_alternative<GridSampler>(sampler) ? Method::kGrid : Method::kMonteCarlo;
    return e;
  }
  if (const auto* g = std::get_if<GridSampler>(&sampler)) return grid_volume_avg(system, n, *g);
  const auto& mc = std::get<MonteCarloSampler>(sampler);
  return monte_carlo(system, n,
                     AnchorMode{{}, system.box.half_side, true, stream_tag::kVolumeAverage}, mc);
}

MayerEstimate estimate_c_n_bulk_avg(const System& system, double shell_width, int n,
                                    const MonteCarloSampler& sampler) {
  check_order(n);
  require(shell_width >= 0.0 && shell_width < system.box.half_side,
          "bulk average: need 0 <= h < L");
  if (n == 0) {
    MayerEstimate e;
    e.value = e.sum = 1.0;
    return e;
  }
  return monte_carlo(
      system, n,
      AnchorMode{{}, system.box.half_side - shell_width, false, stream_tag::kBulkAverage},
      sampler);
}

std::complex<double> PowerSeries::operator()(std::complex<double> lambda) const {
  std::complex<double> acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * lambda + *it;
  return acc;
}

double PowerSeries::error_at(double abs_lambda) const {
  double acc = 0.0;
  for (auto it = errors.rbegin(); it != errors.rend(); ++it) acc = acc * abs_lambda + *it;
  return acc;
}

PowerSeries pi_series(const System& system, std::span<const double> x0, int order,
                      const Sampler& sampler) {
  require(order >= 0, "pi_series: order must be >= 0");
  PowerSeries s;
  for (int n = 0; n <= order; ++n) {
    const auto e = estimate_c_n(system, x0, n, sampler);
    s.coefficients.push_back(e.value);
    s.errors.push_back(e.std_error);
  }
  return s;
}

PQSplit split_P_Q(const System& system, std::span<const double> x0, int n_cut, int tail_order,
                  double shell_width, const Sampler& sampler) {
  require(n_cut >= 1, "split_P_Q: n_cut must be >= 1");
  PQSplit out;
  out.n_cut = n_cut;
  out.anchor_in_bulk = dist_to_boundary(system.box, x0) > shell_width;
  out.p = pi_series(system.with_free_boundary(), x0, n_cut, sampler);
  const int top = std::max(tail_order, n_cut);
  out.q.coefficients.assign(top + 1, 0.0);
  out.q.errors.assign(top + 1, 0.0);
  for (int n = n_cut + 1; n <= tail_order; ++n) {
    const auto e = estimate_c_n(system, x0, n, sampler);
    out.q.coefficients[n] = e.value;
    out.q.errors[n] = e.std_error;
  }
  out.q_bound = std::exp(system.beta * system.potential.stability_constant() + 1.0) /
                std::pow(static_cast<double>(n_cut), 1.5);
  return out;
}

IdentityReport check_inside_identity(const System& system, std::span<const double> x0, int n,
                                     const MonteCarloSampler& sampler) {
  IdentityReport r;
  r.order = n;
  r.anchor.assign(x0.begin(), x0.end());
  r.with_boundary = estimate_c_n(system, x0, n, sampler);
  r.free = estimate_c_n(system.with_free_boundary(), x0, n, sampler);
  auto same = [](double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
  };
  r.pass = same(r.with_boundary.sum, r.free.sum) && same(r.with_boundary.sum_sq, r.free.sum_sq) &&
           same(r.with_boundary.value, r.free.value) &&
           same(r.with_boundary.std_error, r.free.std_error);
  return r;
}

double cogen_bound(int n, double rho_omega, const PairPotential& p, double beta) {
  require(n >= 0, "cogen_bound: n must be >= 0");
  require(rho_omega >= 0.0 && beta > 0.0, "cogen_bound: need rho >= 0 and beta > 0");
  const double c = p.stability_constant();
  if (n == 0) return std::exp(beta * c);
  const double cv = c_v_integral(p, beta);
  if (cv == 0.0) return 0.0;
  const double log_bound = beta * kappa(p) * rho_omega * n + (n - 1) * std::log(n + 1.0) -
                           std::lgamma(n + 2.0) + beta * c * (n + 1) + n * std::log(cv);
  return std::exp(log_bound);
}

double c0n_bound(int n, const PairPotential& p, double beta) { return cogen_bound(n, 0.0, p, beta); }

MajorantSeries::MajorantSeries(const PairPotential& p, double beta, int max_terms)
    : beta_(beta), c_(p.stability_constant()), c_v_(c_v_integral(p, beta)), max_terms_(max_terms) {
  require(max_terms >= 2, "majorant: need at least two terms");
}

double MajorantSeries::r_star() const { return 1.0 / (std::exp(beta_ * c_ + 1.0) * c_v_); }

ThetaValue MajorantSeries::theta(double r) const {
  require(r >= 0.0, "theta: r must be >= 0");
  ThetaValue t;
  const double prefactor = std::exp(beta_ * c_);
  if (r == 0.0) {
    t.value = prefactor;
    t.terms = 1;
    return t;
  }
  // x = e^{beta C + 1} r C_v; the series converges iff x <= 1.
  const double x = r / r_star();
  if (x > 1.0) {
    t.diverges = true;
    t.value = std::numeric_limits<double>::infinity();
    t.tail_bound = t.value;
    return t;
  }
  const double log_z = std::log(x) - 1.0;
  CompensatedSum sum;
  for (int n = 0; n < max_terms_; ++n)
    sum.add(std::exp((n - 1) * std::log(n + 1.0) - std::lgamma(n + 2.0) + n * log_z));
  t.terms = max_terms_;
  t.value = prefactor * sum.value();
  const double N = max_terms_;
  t.tail_bound = prefactor * std::numbers::e / std::sqrt(2.0 * std::numbers::pi) *
                 std::pow(x, N) * (2.0 / 3.0) * std::pow(N, -1.5);
  return t;
}

ThetaBrackets MajorantSeries::brackets(double r) const {
  require(r >= 0.0, "brackets: r must be >= 0");
  const double x = r / r_star();
  require(x <= 1.0, "brackets: r beyond r*");
  CompensatedSum s;
  for (int n = 1; n < max_terms_; ++n)
    s.add(r == 0.0 ? 0.0 : std::exp(n * std::log(x) - 2.5 * std::log(n + 1.0)));
  const double S = s.value();
  ThetaBrackets b;
  const double ebc = std::exp(beta_ * c_);
  b.lower = ebc * (1.0 + S);
  b.upper = ebc * std::numbers::e * (1.0 + S / std::sqrt(2.0 * std::numbers::pi));
  b.printed_lower = ebc * std::numbers::e * (1.0 + S / std::numbers::e);
  b.theta = theta(r).value;
  return b;
}

double g_lambda(const Regions& regions, int n_cut) {
  require(n_cut >= 1, "g_lambda: n_cut must be >= 1");
  return (8.0 / 7.0) * (regions.bulk_volume / (regions.box_volume * std::pow(n_cut, 1.5)) +
                        regions.shell_volume / regions.box_volume);
}

double PressureDecomposition::xi_bound(double abs_lambda) const {
  return abs_lambda * std::exp(beta * kappa_rho) * std::exp(beta * stability_constant + 1.0) *
         g_lambda;
}

PressureDecomposition decomposition_bounds(const System& system, const ShellSpec& shell) {
  PressureDecomposition out;
  out.regions = regions(system.box, shell);
  out.n_cut = n_cut(out.regions.shell_width, system.potential.range());
  require(out.n_cut >= 1, "decompose: box too small, n_cut < 1");
  out.g_lambda = g_lambda(out.regions, out.n_cut);
  out.radius_free = radius_free(system.potential, system.beta);
  out.radius_boundary =
      radius_boundary(system.potential, system.beta, system.boundary.rho_omega());
  out.stability_constant = system.potential.stability_constant();
  out.beta = system.beta;
  out.kappa_rho = kappa(system.potential) * system.boundary.rho_omega();
  return out;
}

PressureDecomposition decompose_pressure(const System& system, const ShellSpec& shell,
                                         const MonteCarloSampler& sampler) {
  PressureDecomposition out = decomposition_bounds(system, shell);
  check_order(out.n_cut);
  const System free = system.with_free_boundary();
  const double ratio = out.regions.bulk_volume / out.regions.box_volume;
  out.eta.coefficients.assign(out.n_cut + 2, 0.0);
  out.eta.errors.assign(out.n_cut + 2, 0.0);
  out.eta.coefficients[1] = ratio;
  for (int n = 1; n <= out.n_cut; ++n) {
    const auto e = estimate_c_n_bulk_avg(free, out.regions.shell_width, n, sampler);
    out.eta.coefficients[n + 1] = ratio * e.value;
    out.eta.errors[n + 1] = ratio * e.std_error;
  }
  return out;
}

PowerSeries pressure_free_partial(const System& system, int order, const Sampler& sampler) {
  require(order >= 0, "pressure_free_partial: order must be >= 0");
  const System free = system.with_free_boundary();
  PowerSeries s;
  s.coefficients.assign(order + 2, 0.0);
  s.errors.assign(order + 2, 0.0);
  for (int n = 0; n <= order; ++n) {
    const auto e = estimate_c_n_volume_avg(free, n, sampler);
    s.coefficients[n + 1] = e.value;
    s.errors[n + 1] = e.std_error;
  }
  return s;
}

}  // namespace bcx
