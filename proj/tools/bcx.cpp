// bcx: command-line front end for the boundary cluster expansion library.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <toml.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "bcx/config.hpp"
#include "bcx/error.hpp"
#include "bcx/mayer.hpp"
#include "bcx/rng.hpp"
#include "bcx/ursell.hpp"
#include "bcx/verify.hpp"

namespace {

using bcx::RunConfig;

enum Exit { kOk = 0, kVerificationFailed = 1, kConfigError = 2, kCapability = 3 };

using Cell = std::variant<std::monostate, double, std::int64_t, std::string, bool>;

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows = {};
};

std::string csv_cell(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double x) const { return fmt::format("{:.17g}", x); }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
  } visit;
  return std::visit(visit, c);
}

nlohmann::json json_cell(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return nullptr;
  if (const double* x = std::get_if<double>(&c)) {
    if (!std::isfinite(*x)) return fmt::format("{}", *x);
    return *x;
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* b = std::get_if<bool>(&c)) return *b;
  return std::get<std::string>(c);
}

nlohmann::json config_json(const RunConfig& cfg) {
  std::ostringstream os;
  os << toml::json_formatter{toml::parse(cfg.to_toml())};
  auto j = nlohmann::json::parse(os.str());
  j.erase("output");
  return j;
}

void emit(const Table& t, const RunConfig& cfg) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!cfg.output.path.empty()) {
    file.open(cfg.output.path, std::ios::binary);
    if (!file) throw bcx::ConfigError(fmt::format("cannot write '{}'", cfg.output.path));
    out = &file;
  }
  const std::string hash = cfg.hash();
  if (cfg.output.format == "json") {
    nlohmann::json doc;
    doc["command"] = t.command;
    doc["config_hash"] = hash;
    doc["config"] = config_json(cfg);
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : t.rows) {
      nlohmann::json r;
      r["config_hash"] = hash;
      for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = json_cell(row[i]);
      doc["rows"].push_back(r);
    }
    *out << doc.dump(2) << "\n";
  } else {
    *out << "config_hash";
    for (const auto& c : t.columns) *out << "," << c;
    *out << "\n";
    for (const auto& row : t.rows) {
      *out << hash;
      for (const auto& c : row) *out << "," << csv_cell(c);
      *out << "\n";
    }
  }
  out->flush();
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += fmt::format("{}{:.17g}", i ? ";" : "", xs[i]);
  return s;
}

// ---- subcommands -----------------------------------------------------------

Table cmd_radius(const RunConfig& cfg) {
  const bcx::System s = cfg.make_system();
  const auto& p = s.potential;
  Table t{"radius",
          {"d", "L", "R", "beta", "C_decl", "C_v", "kappa", "rho_omega", "boundary_points",
           "radius_free", "radius_boundary"}};
  const double rho = s.boundary.rho_omega();
  t.rows.push_back({std::int64_t{p.dimension()}, s.box.half_side, p.range(), s.beta,
                    p.stability_constant(), bcx::c_v_integral(p, s.beta), bcx::kappa(p), rho,
                    static_cast<std::int64_t>(s.boundary.size()), bcx::radius_free(p, s.beta),
                    bcx::radius_boundary(p, s.beta, rho)});
  return t;
}

Table cmd_cn(const RunConfig& cfg, int order, bool average) {
  const bcx::System s = cfg.make_system();
  const bcx::Sampler sampler = cfg.make_sampler();
  const auto& p = s.potential;
  const double rho = s.boundary.rho_omega();
  const auto x0 = cfg.anchor();
  Table t{"cn",
          {"L", "n", "x0", "kind", "method", "value", "std_error", "samples", "bound",
           "radius_free", "radius_boundary"}};
  if (std::holds_alternative<bcx::GridSampler>(sampler) && order > bcx::kGridMaxOrder)
    throw bcx::CapabilityExceeded(
        fmt::format("deterministic grid quadrature is capped at order {}", bcx::kGridMaxOrder));
  for (int n = 0; n <= order; ++n) {
    const bcx::MayerEstimate e = average ? bcx::estimate_c_n_volume_avg(s, n, sampler)
                                         : bcx::estimate_c_n(s, x0, n, sampler);
    // |f(x0)| <= e^{beta kappa rho} turns the pointwise bound into one for the average.
    double bound = s.boundary.empty() ? bcx::c0n_bound(n, p, s.beta)
                                      : bcx::cogen_bound(n, rho, p, s.beta);
    if (average && !s.boundary.empty()) bound *= std::exp(s.beta * bcx::kappa(p) * rho);
    t.rows.push_back({s.box.half_side, std::int64_t{n}, average ? std::string() : join(x0),
                      std::string(average ? "volume_average" : "anchored"),
                      std::string(e.method == bcx::Method::kGrid ? "grid" : "mc"), e.value,
                      e.std_error, static_cast<std::int64_t>(e.samples), bound,
                      bcx::radius_free(p, s.beta), bcx::radius_boundary(p, s.beta, rho)});
  }
  return t;
}

void decomposition_rows(Table& t, const bcx::PressureDecomposition& dec, double L,
                        const std::vector<double>& lambdas, bool with_eta) {
  for (double lambda : lambdas) {
    const double abs_lambda = std::abs(lambda);
    Cell eta, eta_error;
    if (with_eta) {
      eta = dec.eta_at(lambda).real();
      eta_error = dec.eta.error_at(abs_lambda);
    }
    t.rows.push_back({L, dec.regions.shell_width, std::int64_t{dec.n_cut}, lambda, eta, eta_error,
                      dec.xi_bound(abs_lambda), dec.g_lambda, dec.radius_free,
                      dec.radius_boundary, abs_lambda <= dec.radius_boundary});
  }
}

const std::vector<std::string> kDecompositionColumns = {
    "L", "h", "n_cut", "lambda", "eta", "eta_error", "xi_bound", "g_lambda", "radius_free",
    "radius_boundary", "in_disc"};

Table cmd_decompose(const RunConfig& cfg, const std::vector<double>& lambdas) {
  const bcx::System s = cfg.make_system();
  const auto dec = bcx::decompose_pressure(s, cfg.make_shell(), cfg.make_monte_carlo());
  Table t{"decompose", kDecompositionColumns};
  decomposition_rows(t, dec, s.box.half_side, lambdas, true);
  return t;
}

Table cmd_sweep(const RunConfig& cfg, const std::vector<double>& sizes, bool with_eta) {
  if (sizes.empty()) throw bcx::ConfigError("sweep needs box sizes: [sweep] L or --L");
  Table t{"sweep", kDecompositionColumns};
  for (double L : sizes) {
    RunConfig at = cfg;
    at.box.L = L;
    at.validate();
    const bcx::System s = at.make_system();
    const auto dec = with_eta ? bcx::decompose_pressure(s, at.make_shell(), at.make_monte_carlo())
                              : bcx::decomposition_bounds(s, at.make_shell());
    decomposition_rows(t, dec, L, cfg.thermo.lambda, with_eta);
  }
  return t;
}

void write_junit(const std::string& path, const std::vector<bcx::Check>& checks) {
  auto escape = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
      }
    }
    return out;
  };
  int failures = 0, skipped = 0;
  for (const auto& c : checks) {
    failures += !c.pass;
    skipped += c.skipped;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw bcx::ConfigError(fmt::format("cannot write '{}'", path));
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << fmt::format("<testsuite name=\"bcx-verify\" tests=\"{}\" failures=\"{}\" skipped=\"{}\">\n",
                     checks.size(), failures, skipped);
  for (const auto& c : checks) {
    out << fmt::format("  <testcase classname=\"{}\" name=\"{}\"", c.suite, c.name);
    if (c.pass && !c.skipped) {
      out << "/>\n";
      continue;
    }
    out << ">\n";
    if (!c.pass) out << fmt::format("    <failure message=\"{}\"/>\n", escape(c.detail));
    else out << fmt::format("    <skipped message=\"{}\"/>\n", escape(c.detail));
    out << "  </testcase>\n";
  }
  out << "</testsuite>\n";
}

Table cmd_verify(const RunConfig& cfg, const std::string& suite, const std::string& junit,
                 bool& failed) {
  const auto checks = bcx::run_verify(cfg, suite);
  Table t{"verify", {"suite", "check", "status", "detail"}};
  failed = false;
  for (const auto& c : checks) {
    const char* status = !c.pass ? "fail" : c.skipped ? "skip" : "pass";
    t.rows.push_back({c.suite, c.name, std::string(status), c.detail});
    if (!c.pass) {
      failed = true;
      std::cerr << fmt::format("bcx: verification failed: {}/{}: {}\n", c.suite, c.name, c.detail);
    }
  }
  if (!junit.empty()) write_junit(junit, checks);
  return t;
}

// Per-graph contributions to Phi^T for one small configuration.
Table cmd_graphs(const RunConfig& cfg, int n, const std::vector<double>& points) {
  const int k = n + 1;
  if (k < 1 || k > 4) throw bcx::CapabilityExceeded("graphs dumps n + 1 <= 4 points only");
  const auto p = cfg.make_potential();
  const int d = p.dimension();
  std::vector<double> coords = points;
  if (coords.empty()) {
    bcx::Stream rng(bcx::derive_seed(cfg.estimator.seed, {bcx::stream_tag::kVerify, 9}));
    coords.resize(static_cast<std::size_t>(k) * d);
    for (double& c : coords) c = rng.uniform(-p.range(), p.range());
  }
  if (coords.size() != static_cast<std::size_t>(k) * d)
    throw bcx::ConfigError(fmt::format("--points needs {} numbers", k * d));
  const bcx::Configuration config(d, coords);
  const bcx::EdgeWeights f(config, p, cfg.thermo.beta);
  const auto pairs = bcx::pair_list(k);
  Table t{"graphs", {"n", "points", "row", "graph", "edges", "contribution"}};
  const std::string where = join(coords);
  bcx::for_each_connected_graph(k, [&](const bcx::LabeledGraph& g) {
    std::string edges;
    for (std::size_t b = 0; b < pairs.size(); ++b)
      if (g.edges >> b & 1U)
        edges += fmt::format("{}{}-{}", edges.empty() ? "" : " ", pairs[b].first, pairs[b].second);
    t.rows.push_back({std::int64_t{n}, where, std::string("graph"), std::int64_t{g.edges}, edges,
                      bcx::graph_weight(g, f)});
  });
  t.rows.push_back({std::int64_t{n}, where, std::string("graph_sum"), Cell{}, Cell{},
                    bcx::ursell_graph_sum(f)});
  t.rows.push_back({std::int64_t{n}, where, std::string("subset_recursion"), Cell{}, Cell{},
                    bcx::ursell_subset_recursion(config, p, cfg.thermo.beta)});
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mayer cluster expansion with boundary conditions"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed, samples;
  std::optional<std::string> out_path, format;
  app.add_option("--config", config_path, "run configuration (TOML)")->required();
  app.add_option("--seed", seed, "master seed for the estimators");
  app.add_option("--samples", samples, "Monte Carlo sample count");
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* radius = app.add_subcommand("radius", "convergence radii and model constants");

  auto* cn = app.add_subcommand("cn", "Mayer coefficients c_0 .. c_n");
  std::optional<int> cn_order;
  std::vector<double> cn_x0;
  bool cn_average = false;
  cn->add_option("--n", cn_order, "highest order (default: estimator.order)");
  cn->add_option("--x0", cn_x0, "anchor point, comma separated")->delimiter(',');
  cn->add_flag("--average", cn_average, "volume-averaged coefficients");

  auto* decompose = app.add_subcommand("decompose", "eta / xi split of beta p");
  std::vector<double> lambdas;
  decompose->add_option("--lambda", lambdas, "activities, comma separated")->delimiter(',');

  auto* sweep = app.add_subcommand("sweep", "decomposition bounds over box sizes");
  std::vector<double> sweep_sizes;
  bool sweep_eta = false;
  sweep->add_option("--L", sweep_sizes, "half sides, comma separated")->delimiter(',');
  sweep->add_flag("--eta", sweep_eta, "also estimate eta at each size");

  auto* verify = app.add_subcommand("verify", "run invariant suites");
  std::string suite = "all";
  std::string junit;
  verify->add_option("--suite", suite, "graphs | bounds | identity | oracle | all");
  verify->add_option("--junit", junit, "write a JUnit XML summary");

  auto* graphs = app.add_subcommand("graphs", "per-graph contributions to Phi^T (n + 1 <= 4)");
  int graphs_n = 2;
  std::vector<double> graphs_points;
  graphs->add_option("--n", graphs_n, "order n; the configuration has n + 1 points");
  graphs->add_option("--points", graphs_points, "coordinates, comma separated")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    RunConfig cfg = RunConfig::load(config_path);
    if (seed) cfg.estimator.seed = *seed;
    if (samples) cfg.estimator.samples = *samples;
    if (out_path) cfg.output.path = *out_path;
    if (format) cfg.output.format = *format;
    if (cn->parsed()) {
      if (!cn_x0.empty()) cfg.estimator.x0 = cn_x0;
      if (cn_order) cfg.estimator.order = *cn_order;
      if (cn_average) cfg.estimator.average = true;
    }
    if (decompose->parsed() && !lambdas.empty()) cfg.thermo.lambda = lambdas;
    if (sweep->parsed() && !sweep_sizes.empty()) cfg.sweep.L = sweep_sizes;
    cfg.validate();

    bool failed = false;
    Table t;
    if (radius->parsed()) t = cmd_radius(cfg);
    else if (cn->parsed()) t = cmd_cn(cfg, cfg.estimator.order, cfg.estimator.average);
    else if (decompose->parsed()) t = cmd_decompose(cfg, cfg.thermo.lambda);
    else if (sweep->parsed()) t = cmd_sweep(cfg, cfg.sweep.L, sweep_eta);
    else if (verify->parsed()) t = cmd_verify(cfg, suite, junit, failed);
    else t = cmd_graphs(cfg, graphs_n, graphs_points);
    emit(t, cfg);
    return failed ? kVerificationFailed : kOk;
  } catch (const bcx::CapabilityExceeded& e) {
    std::cerr << "bcx: capability exceeded: " << e.what() << "\n";
    return kCapability;
  } catch (const bcx::ConfigError& e) {
    std::cerr << "bcx: config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const bcx::InvalidArgument& e) {
    std::cerr << "bcx: invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "bcx: " << e.what() << "\n";
    return kConfigError;
  }
}
