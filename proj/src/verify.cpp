#include "bcx/verify.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "bcx/error.hpp"
#include "bcx/oracle.hpp"
#include "bcx/rng.hpp"
#include "bcx/ursell.hpp"

namespace bcx {

namespace {

constexpr std::uint64_t kConnected[] = {1, 1, 4, 38, 728, 26704};

// Points uniform in [-R, R]^d: dense enough that most pairs interact.
Configuration random_cluster(Stream& rng, int k, int d, double range) {
  std::vector<double> coords(static_cast<std::size_t>(k) * d);
  for (double& c : coords) c = rng.uniform(-range, range);
  return Configuration(d, std::move(coords));
}

void graphs_suite(const RunConfig& cfg, std::vector<Check>& out) {
  {
    Check c{"graphs", "connected_counts"};
    for (int k = 1; k <= 6; ++k) {
      const auto got = count_connected_graphs(k);
      if (got != kConnected[k - 1]) {
        c.pass = false;
        c.detail = fmt::format("{} points: {} connected graphs, expected {}", k, got,
                               kConnected[k - 1]);
      }
    }
    if (c.pass) c.detail = "1 1 4 38 728 26704";
    out.push_back(c);
  }
  {
    Check c{"graphs", "cayley"};
    for (int k = 2; k <= 8; ++k) {
      const auto expected = static_cast<std::uint64_t>(std::llround(std::pow(k, k - 2)));
      if (count_trees(k) != expected) {
        c.pass = false;
        c.detail = fmt::format("{} points: {} trees, expected {}", k, count_trees(k), expected);
      }
    }
    if (c.pass) c.detail = "k^(k-2) for 2 <= k <= 8";
    out.push_back(c);
  }

  const PairPotential p = cfg.make_potential();
  const double beta = cfg.thermo.beta;
  const int d = p.dimension();
  Check dual{"graphs", "dual_method"};
  Check tree{"graphs", "tree_bound"};
  double worst_rel = 0.0;
  double worst_ratio = 0.0;
  for (int k = 3; k <= 6; ++k) {
    Stream rng(derive_seed(cfg.estimator.seed, {stream_tag::kVerify, 1, static_cast<std::uint64_t>(k)}));
    for (int trial = 0; trial < 200; ++trial) {
      const Configuration x = random_cluster(rng, k, d, p.range());
      const double rec = ursell_subset_recursion(x, p, beta);
      if (trial < 20) {
        const double sum = ursell_graph_sum(x, p, beta);
        const double scale = std::max({std::abs(sum), std::abs(rec), 1e-300});
        const double rel = std::abs(sum - rec) / scale;
        worst_rel = std::max(worst_rel, rel);
        if (rel > 1e-10) dual.pass = false;
      }
      const double bound = tree_bound(x, p, beta);
      if (bound > 0.0) worst_ratio = std::max(worst_ratio, std::abs(rec) / bound);
      if (std::abs(rec) > bound * (1.0 + 1e-12)) tree.pass = false;
    }
  }
  dual.detail = fmt::format("80 configurations, worst relative gap {:.3e}", worst_rel);
  tree.detail = fmt::format("800 configurations, max |Phi|/bound {:.6f}", worst_ratio);
  out.push_back(dual);
  out.push_back(tree);
}

std::vector<double> pa_samples(const Box& box, double range, std::uint64_t seed, int count) {
  const int d = box.dimension;
  const double L = box.half_side;
  Stream rng(derive_seed(seed, {stream_tag::kVerify, 2}));
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(count) * d);
  for (int i = 0; i < count; ++i) {
    std::vector<double> x(d);
    for (double& c : x) c = rng.uniform(-L, L);
    if (i % 2 == 1) {
      // Pin one coordinate into the collar so half the samples see omega.
      const int axis = static_cast<int>(rng.uniform() * d) % d;
      const double depth = rng.uniform(0.0, std::min(range, L));
      x[axis] = rng.uniform() < 0.5 ? -L + depth : L - depth;
      x[axis] = std::clamp(x[axis], -L, std::nextafter(L, 0.0));
    }
    xs.insert(xs.end(), x.begin(), x.end());
  }
  return xs;
}

void bounds_suite(const RunConfig& cfg, std::vector<Check>& out) {
  const System s = cfg.make_system();
  const PairPotential& p = s.potential;
  {
    Check c{"bounds", "prop_pa"};
    const auto xs = pa_samples(s.box, p.range(), cfg.estimator.seed, 10'000);
    const PaReport r = check_prop_pa(s.boundary, p, s.box, xs);
    c.pass = r.pass;
    c.detail = fmt::format("{} samples, {} near the boundary, {} violations, min w {:.6g} >= {:.6g}",
                           r.samples, r.near_boundary, r.violations, r.min_energy, r.bound);
    out.push_back(c);
  }
  {
    const Sampler sampler = cfg.make_sampler();
    const bool grid = std::holds_alternative<GridSampler>(sampler);
    const int top = std::min(cfg.estimator.order, grid ? kGridMaxOrder : 4);
    const auto x0 = cfg.anchor();
    const System free_system = s.with_free_boundary();
    for (int pass = 0; pass < 2; ++pass) {
      const bool with_omega = pass == 0;
      Check c{"bounds", with_omega ? "coefficient_bound_omega" : "coefficient_bound_free"};
      std::string detail;
      for (int n = 0; n <= top; ++n) {
        const MayerEstimate e = estimate_c_n(with_omega ? s : free_system, x0, n, sampler);
        const double bound = with_omega ? cogen_bound(n, s.boundary.rho_omega(), p, s.beta)
                                        : c0n_bound(n, p, s.beta);
        const bool ok = std::abs(e.value) - 3.0 * e.std_error <= bound;
        c.pass = c.pass && ok;
        detail += fmt::format("{}n={} |c|={:.6g} bound={:.6g}", n ? "; " : "", n,
                              std::abs(e.value), bound);
      }
      c.detail = detail;
      out.push_back(c);
    }
  }
  {
    Check c{"bounds", "majorant"};
    const MajorantSeries theta(p, s.beta);
    const double r_star = theta.r_star();
    for (int k = 1; k <= 20; ++k) {
      const ThetaBrackets b = theta.brackets(r_star * k / 21.0);
      if (!(b.lower <= b.theta && b.theta <= b.upper)) c.pass = false;
    }
    const ThetaValue at_star = theta.theta(r_star);
    const double limit = (8.0 / 7.0) * std::exp(s.beta * p.stability_constant() + 1.0);
    if (!(at_star.value + at_star.tail_bound < limit)) c.pass = false;
    c.detail = fmt::format("20 radii below r*={:.6g}; Theta(r*) <= {:.6g} < {:.6g}", r_star,
                           at_star.value + at_star.tail_bound, limit);
    out.push_back(c);
  }
  {
    Check c{"bounds", "g_decreasing"};
    double previous = std::numeric_limits<double>::infinity();
    std::string detail;
    for (double L : {25.0, 100.0, 400.0, 1600.0}) {
      const Box box = make_box(p.dimension(), L);
      const double h = cfg.make_shell().width(L);
      if (h <= p.range()) {
        c.skipped = true;
        c.detail = fmt::format("skipped: shell width {:.6g} <= R at L={}", h, L);
        break;
      }
      const double g = g_lambda(regions(box, h), n_cut(h, p.range()));
      if (!(g < previous)) c.pass = false;
      previous = g;
      detail += fmt::format("{}L={} g={:.6g}", detail.empty() ? "" : "; ", L, g);
    }
    if (!c.skipped) c.detail = detail;
    out.push_back(c);
  }
}

void identity_suite(const RunConfig& cfg, std::vector<Check>& out) {
  const System s = cfg.make_system();
  const double L = s.box.half_side;
  const double h = cfg.make_shell().width(L);
  Check c{"identity", "inside_identity"};
  if (h <= s.potential.range()) {
    c.skipped = true;
    c.detail = fmt::format("skipped: shell width {:.6g} <= R leaves no bulk cut", h);
    out.push_back(c);
    return;
  }
  const int cut = std::min(n_cut(h, s.potential.range()), cfg.estimator.order);
  const MonteCarloSampler mc = cfg.make_monte_carlo();
  const double inner = L - h;
  int checked = 0;
  for (int j = 0; j < 5; ++j) {
    std::vector<double> x0(s.box.dimension, 0.0);
    x0[0] = -inner + (j + 0.5) * 2.0 * inner / 5.0;
    for (int n = 0; n <= cut; ++n) {
      const IdentityReport r = check_inside_identity(s, x0, n, mc);
      ++checked;
      if (!r.pass) {
        c.pass = false;
        c.detail = fmt::format("x0[0]={:.6g} n={}: {:.17g} vs {:.17g}", x0[0], n,
                               r.with_boundary.value, r.free.value);
      }
    }
  }
  if (c.pass)
    c.detail = fmt::format("{} (x0, n) pairs bitwise equal, n <= {}, rho={:.6g}", checked, cut,
                           s.boundary.rho_omega());
  out.push_back(c);
}

void oracle_suite(const RunConfig& cfg, std::vector<Check>& out) {
  const System s = cfg.make_system();
  Sampler sampler = cfg.make_sampler();
  // Only the shared box grid makes the discrete identity exact.
  if (auto* g = std::get_if<GridSampler>(&sampler)) g->anchor = GridAnchor::kBox;
  {
    Check c{"oracle", "series_consistency"};
    const ConsistencyReport r = consistency_check(s, 3, sampler);
    c.pass = r.pass;
    for (const auto& row : r.rows)
      c.detail += fmt::format("{}n={} log={:.10g} mayer={:.10g} tol={:.3g}",
                              row.order > 1 ? "; " : "", row.order, row.log_coefficient,
                              row.mayer, row.tolerance);
    out.push_back(c);
  }
  {
    Check c{"oracle", "tonks_series"};
    const double expected[] = {0.0, 1.0, -1.0, 1.5, -8.0 / 3.0, 125.0 / 24.0};
    const auto t = tonks_pressure_coefficients(5, 1.0);
    for (int k = 1; k <= 5; ++k)
      if (std::abs(t[k] - expected[k]) > 1e-12 * std::abs(expected[k])) c.pass = false;
    c.detail = "1 -1 3/2 -8/3 125/24";
    out.push_back(c);
  }
}

}  // namespace

std::vector<Check> run_verify(const RunConfig& config, std::string_view suite) {
  const bool all = suite == "all";
  if (!all && std::find(std::begin(kVerifySuites), std::end(kVerifySuites), suite) ==
                  std::end(kVerifySuites))
    throw ConfigError(fmt::format("unknown verify suite '{}'", suite));
  std::vector<Check> out;
  if (all || suite == "graphs") graphs_suite(config, out);
  if (all || suite == "bounds") bounds_suite(config, out);
  if (all || suite == "identity") identity_suite(config, out);
  if (all || suite == "oracle") oracle_suite(config, out);
  return out;
}

}  // namespace bcx
