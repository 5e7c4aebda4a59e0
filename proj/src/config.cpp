#include "bcx/config.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <toml.hpp>

#include "bcx/error.hpp"

namespace bcx {

namespace {

using Keys = std::initializer_list<std::string_view>;

void check_keys(const toml::table& t, std::string_view where, Keys allowed) {
  for (const auto& [key, _] : t) {
    bool known = false;
    for (auto k : allowed) known = known || key.str() == k;
    if (!known) throw ConfigError(fmt::format("unknown key '{}' in [{}]", key.str(), where));
  }
}

const toml::table* table_of(const toml::table& root, std::string_view name) {
  const toml::node* n = root.get(name);
  if (!n) return nullptr;
  if (!n->is_table()) throw ConfigError(fmt::format("'{}' must be a table", name));
  return n->as_table();
}

double as_double(const toml::node& n, std::string_view what) {
  if (auto v = n.value<double>()) {
    if (n.is_integer() || n.is_floating_point()) return *v;
  }
  throw ConfigError(fmt::format("{} must be a number", what));
}

std::int64_t as_integer(const toml::node& n, std::string_view what) {
  if (!n.is_integer()) throw ConfigError(fmt::format("{} must be an integer", what));
  return *n.value<std::int64_t>();
}

std::vector<double> as_doubles(const toml::node& n, std::string_view what) {
  std::vector<double> out;
  if (const auto* arr = n.as_array()) {
    for (const auto& e : *arr) out.push_back(as_double(e, what));
  } else {
    out.push_back(as_double(n, what));
  }
  return out;
}

template <class F>
void with(const toml::table& t, std::string_view key, F&& f) {
  if (const toml::node* n = t.get(key)) f(*n);
}

std::string as_string(const toml::node& n, std::string_view what) {
  if (!n.is_string()) throw ConfigError(fmt::format("{} must be a string", what));
  return *n.value<std::string>();
}

std::vector<std::vector<double>> read_points_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open boundary points file '{}'", path.string()));
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ConfigError(fmt::format("bad number '{}' in '{}'", cell, path.string()));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string number(double x) {
  std::string s = fmt::format("{}", x);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string number_list(const std::vector<double>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + number(xs[i]);
  return s + "]";
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

template <class F>
auto as_config_error(F&& f) {
  try {
    return f();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

RunConfig RunConfig::parse(std::string_view text, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "malformed config: " << e.description() << " at " << e.source().begin;
    throw ConfigError(msg.str());
  }
  check_keys(root, "root",
             {"potential", "box", "boundary", "thermo", "estimator", "sweep", "output"});
  RunConfig c;
  c.base_dir = base_dir;

  if (const auto* t = table_of(root, "potential")) {
    check_keys(*t, "potential", {"preset", "d", "R", "a", "epsilon", "C_decl", "pieces"});
    auto& p = c.potential;
    with(*t, "preset", [&](auto& n) { p.preset = as_string(n, "potential.preset"); });
    with(*t, "d", [&](auto& n) { p.d = static_cast<int>(as_integer(n, "potential.d")); });
    with(*t, "R", [&](auto& n) { p.R = as_double(n, "potential.R"); });
    with(*t, "a", [&](auto& n) { p.a = as_double(n, "potential.a"); });
    with(*t, "epsilon", [&](auto& n) { p.epsilon = as_double(n, "potential.epsilon"); });
    with(*t, "C_decl", [&](auto& n) { p.c_decl = as_double(n, "potential.C_decl"); });
    with(*t, "pieces", [&](const toml::node& n) {
      const auto* arr = n.as_array();
      if (!arr) throw ConfigError("potential.pieces must be an array of [r_lo, r_hi, value]");
      for (const auto& e : *arr) {
        const auto v = as_doubles(e, "potential.pieces entry");
        if (v.size() != 3) throw ConfigError("potential.pieces entries need 3 numbers");
        p.pieces.push_back({v[0], v[1], v[2]});
      }
    });
  }
  if (const auto* t = table_of(root, "box")) {
    check_keys(*t, "box", {"L", "delta", "h_exponent"});
    with(*t, "L", [&](auto& n) { c.box.L = as_double(n, "box.L"); });
    with(*t, "delta", [&](auto& n) { c.box.delta = as_double(n, "box.delta"); });
    with(*t, "h_exponent", [&](auto& n) { c.box.h_exponent = as_double(n, "box.h_exponent"); });
  }
  if (const auto* t = table_of(root, "boundary")) {
    check_keys(*t, "boundary", {"kind", "points", "points_csv", "spacing", "intensity", "seed"});
    auto& b = c.boundary;
    with(*t, "kind", [&](auto& n) { b.kind = as_string(n, "boundary.kind"); });
    with(*t, "points", [&](const toml::node& n) {
      const auto* arr = n.as_array();
      if (!arr) throw ConfigError("boundary.points must be an array of points");
      for (const auto& e : *arr) b.points.push_back(as_doubles(e, "boundary.points entry"));
    });
    with(*t, "points_csv", [&](auto& n) { b.points_csv = as_string(n, "boundary.points_csv"); });
    with(*t, "spacing", [&](auto& n) { b.spacing = as_double(n, "boundary.spacing"); });
    with(*t, "intensity", [&](auto& n) { b.intensity = as_double(n, "boundary.intensity"); });
    with(*t, "seed", [&](auto& n) {
      const auto v = as_integer(n, "boundary.seed");
      if (v < 0) throw ConfigError("boundary.seed must be >= 0");
      b.seed = static_cast<std::uint64_t>(v);
    });
  }
  if (const auto* t = table_of(root, "thermo")) {
    check_keys(*t, "thermo", {"beta", "lambda"});
    with(*t, "beta", [&](auto& n) { c.thermo.beta = as_double(n, "thermo.beta"); });
    with(*t, "lambda", [&](auto& n) { c.thermo.lambda = as_doubles(n, "thermo.lambda"); });
  }
  if (const auto* t = table_of(root, "estimator")) {
    check_keys(*t, "estimator",
               {"seed", "samples", "method", "grid_points", "grid_anchor", "anchor_points",
                "chunk_size", "workers", "order", "x0", "average"});
    auto& e = c.estimator;
    auto nonneg = [](const toml::node& n, std::string_view what) {
      const auto v = as_integer(n, what);
      if (v < 0) throw ConfigError(fmt::format("{} must be >= 0", what));
      return v;
    };
    with(*t, "seed", [&](auto& n) { e.seed = nonneg(n, "estimator.seed"); });
    with(*t, "samples", [&](auto& n) { e.samples = nonneg(n, "estimator.samples"); });
    with(*t, "method", [&](auto& n) { e.method = as_string(n, "estimator.method"); });
    with(*t, "grid_points", [&](auto& n) {
      e.grid_points = static_cast<int>(nonneg(n, "estimator.grid_points"));
    });
    with(*t, "grid_anchor", [&](auto& n) { e.grid_anchor = as_string(n, "estimator.grid_anchor"); });
    with(*t, "anchor_points", [&](auto& n) {
      e.anchor_points = static_cast<int>(nonneg(n, "estimator.anchor_points"));
    });
    with(*t, "chunk_size", [&](auto& n) { e.chunk_size = nonneg(n, "estimator.chunk_size"); });
    with(*t, "workers", [&](auto& n) {
      e.workers = static_cast<unsigned>(nonneg(n, "estimator.workers"));
    });
    with(*t, "order", [&](auto& n) { e.order = static_cast<int>(nonneg(n, "estimator.order")); });
    with(*t, "x0", [&](auto& n) { e.x0 = as_doubles(n, "estimator.x0"); });
    with(*t, "average", [&](const toml::node& n) {
      if (!n.is_boolean()) throw ConfigError("estimator.average must be true or false");
      e.average = *n.value<bool>();
    });
  }
  if (const auto* t = table_of(root, "sweep")) {
    check_keys(*t, "sweep", {"L"});
    with(*t, "L", [&](auto& n) { c.sweep.L = as_doubles(n, "sweep.L"); });
  }
  if (const auto* t = table_of(root, "output")) {
    check_keys(*t, "output", {"format", "path"});
    with(*t, "format", [&](auto& n) { c.output.format = as_string(n, "output.format"); });
    with(*t, "path", [&](auto& n) { c.output.path = as_string(n, "output.path"); });
  }
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.parent_path());
}

std::string RunConfig::to_toml() const {
  std::string s;
  auto line = [&](std::string_view key, const std::string& value) {
    s += fmt::format("{} = {}\n", key, value);
  };
  s += "[potential]\n";
  line("preset", quoted(potential.preset));
  line("d", std::to_string(potential.d));
  line("R", number(potential.R));
  if (potential.a) line("a", number(*potential.a));
  line("epsilon", number(potential.epsilon));
  if (potential.c_decl) line("C_decl", number(*potential.c_decl));
  if (!potential.pieces.empty()) {
    std::string arr = "[";
    for (std::size_t i = 0; i < potential.pieces.size(); ++i) {
      const auto& p = potential.pieces[i];
      arr += (i ? ", " : "") + number_list({p.r_lo, p.r_hi, p.value});
    }
    line("pieces", arr + "]");
  }
  s += "\n[box]\n";
  line("L", number(box.L));
  if (box.delta) line("delta", number(*box.delta));
  line("h_exponent", number(box.h_exponent));
  s += "\n[boundary]\n";
  line("kind", quoted(boundary.kind));
  if (!boundary.points.empty()) {
    std::string arr = "[";
    for (std::size_t i = 0; i < boundary.points.size(); ++i)
      arr += (i ? ", " : "") + number_list(boundary.points[i]);
    line("points", arr + "]");
  }
  if (!boundary.points_csv.empty()) line("points_csv", quoted(boundary.points_csv));
  line("spacing", number(boundary.spacing));
  line("intensity", number(boundary.intensity));
  line("seed", std::to_string(boundary.seed));
  s += "\n[thermo]\n";
  line("beta", number(thermo.beta));
  line("lambda", number_list(thermo.lambda));
  s += "\n[estimator]\n";
  line("seed", std::to_string(estimator.seed));
  line("samples", std::to_string(estimator.samples));
  line("method", quoted(estimator.method));
  line("grid_points", std::to_string(estimator.grid_points));
  line("grid_anchor", quoted(estimator.grid_anchor));
  line("anchor_points", std::to_string(estimator.anchor_points));
  line("chunk_size", std::to_string(estimator.chunk_size));
  line("workers", std::to_string(estimator.workers));
  line("order", std::to_string(estimator.order));
  if (!estimator.x0.empty()) line("x0", number_list(estimator.x0));
  line("average", estimator.average ? "true" : "false");
  s += "\n[sweep]\n";
  line("L", number_list(sweep.L));
  s += "\n[output]\n";
  line("format", quoted(output.format));
  line("path", quoted(output.path));
  return s;
}

std::string RunConfig::hash() const {
  // Where and how results are written does not change them.
  std::string text = to_toml();
  text.erase(text.find("\n[output]\n"));
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

void RunConfig::validate() const {
  constexpr auto kMaxInt = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
  if (output.format != "csv" && output.format != "json")
    throw ConfigError("output.format must be csv or json");
  if (estimator.method != "mc" && estimator.method != "grid")
    throw ConfigError("estimator.method must be mc or grid");
  if (estimator.grid_anchor != "point" && estimator.grid_anchor != "box")
    throw ConfigError("estimator.grid_anchor must be point or box");
  if (estimator.seed > kMaxInt) throw ConfigError("estimator.seed must fit in a signed 64-bit integer");
  if (estimator.method == "mc" && estimator.samples < 2)
    throw ConfigError("estimator.samples must be >= 2");
  if (estimator.chunk_size < 1) throw ConfigError("estimator.chunk_size must be >= 1");
  if (!(thermo.beta > 0.0) || !std::isfinite(thermo.beta))
    throw ConfigError("thermo.beta must be a finite number > 0");
  for (double l : thermo.lambda)
    if (!std::isfinite(l)) throw ConfigError("thermo.lambda entries must be finite");
  if (!(box.h_exponent > 0.0 && box.h_exponent < 1.0))
    throw ConfigError("box.h_exponent must lie in (0, 1)");
  for (double L : sweep.L)
    if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("sweep.L entries must be > 0");
  if (!boundary.points.empty() && !boundary.points_csv.empty())
    throw ConfigError("boundary: give points or points_csv, not both");
  const System s = make_system();
  const auto x = anchor();
  if (static_cast<int>(x.size()) != s.box.dimension)
    throw ConfigError("estimator.x0 must have d coordinates");
  if (!s.box.contains(x)) throw ConfigError("estimator.x0 lies outside the box");
}

PairPotential RunConfig::make_potential() const {
  return as_config_error([&] {
    const auto& p = potential;
    if (p.preset == "hard_rod" || p.preset == "hard_sphere") {
      if (p.preset == "hard_rod" && p.d != 1) throw ConfigError("hard_rod needs d = 1");
      const double diameter = p.a.value_or(p.R);
      if (diameter != p.R) throw ConfigError("hard rods and spheres have R = a");
      return PairPotential::hard_sphere(p.d, diameter);
    }
    if (p.preset == "square_well") {
      if (!p.a) throw ConfigError("square_well needs potential.a");
      auto w = PairPotential::square_well(p.d, *p.a, p.epsilon, p.R);
      if (p.c_decl)
        return PairPotential::piecewise(p.d, p.R, *p.a, {w.pieces().begin(), w.pieces().end()},
                                        *p.c_decl, "square_well");
      return w;
    }
    if (p.preset == "zero") return PairPotential::zero(p.d, p.R);
    if (p.preset == "custom") {
      if (!p.c_decl) throw ConfigError("custom potentials need potential.C_decl");
      return PairPotential::piecewise(p.d, p.R, p.a.value_or(0.0), p.pieces, *p.c_decl, "custom");
    }
    throw ConfigError(fmt::format("unknown potential preset '{}'", p.preset));
  });
}

Box RunConfig::make_box() const {
  return as_config_error([&] { return bcx::make_box(potential.d, box.L); });
}

CubeGrid RunConfig::make_grid() const {
  return as_config_error(
      [&] { return CubeGrid::aligned(make_box(), potential.R, box.delta); });
}

BoundaryConfig RunConfig::make_boundary() const {
  return as_config_error([&] {
    const PairPotential p = make_potential();
    const Box b = make_box();
    const CubeGrid g = make_grid();
    BoundarySpec spec;
    if (boundary.kind == "free") {
      spec.kind = BoundaryKind::kFree;
    } else if (boundary.kind == "explicit") {
      spec.kind = BoundaryKind::kExplicit;
      auto rows = boundary.points;
      if (!boundary.points_csv.empty()) {
        std::filesystem::path path = boundary.points_csv;
        if (path.is_relative()) path = base_dir / path;
        rows = read_points_csv(path);
      }
      for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != potential.d)
          throw ConfigError("boundary points must have d coordinates");
        spec.points.insert(spec.points.end(), r.begin(), r.end());
      }
    } else if (boundary.kind == "grid") {
      spec.kind = BoundaryKind::kGrid;
      spec.spacing = boundary.spacing;
    } else if (boundary.kind == "poisson") {
      spec.kind = BoundaryKind::kPoisson;
      spec.intensity = boundary.intensity;
      spec.seed = boundary.seed;
    } else {
      throw ConfigError(fmt::format("unknown boundary kind '{}'", boundary.kind));
    }
    return generate(spec, b, g, p);
  });
}

System RunConfig::make_system() const {
  return as_config_error(
      [&] { return System(make_potential(), make_box(), make_boundary(), thermo.beta); });
}

ShellSpec RunConfig::make_shell() const { return ShellSpec{box.h_exponent}; }

MonteCarloSampler RunConfig::make_monte_carlo() const {
  return MonteCarloSampler{estimator.samples, estimator.seed, estimator.chunk_size,
                           estimator.workers};
}

Sampler RunConfig::make_sampler() const {
  if (estimator.method == "grid")
    return GridSampler{estimator.grid_points,
                       estimator.grid_anchor == "box" ? GridAnchor::kBox : GridAnchor::kPoint,
                       estimator.anchor_points};
  return make_monte_carlo();
}

std::vector<double> RunConfig::anchor() const {
  if (!estimator.x0.empty()) return estimator.x0;
  return std::vector<double>(potential.d, 0.0);
}

}  // namespace bcx
