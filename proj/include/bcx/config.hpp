#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bcx/boundary.hpp"
#include "bcx/geometry.hpp"
#include "bcx/mayer.hpp"
#include "bcx/potential.hpp"

namespace bcx {

struct PotentialSection {
  std::string preset = "hard_rod";  ///< hard_rod | hard_sphere | square_well | zero | custom
  int d = 1;
  double R = 1.0;
  std::optional<double> a;
  double epsilon = 1.0;
  std::optional<double> c_decl;
  std::vector<RadialPiece> pieces;

  friend bool operator==(const PotentialSection&, const PotentialSection&) = default;
};

struct BoxSection {
  double L = 10.0;
  std::optional<double> delta;
  double h_exponent = 0.5;

  friend bool operator==(const BoxSection&, const BoxSection&) = default;
};

struct BoundarySection {
  std::string kind = "free";  ///< free | explicit | grid | poisson
  std::vector<std::vector<double>> points;
  std::string points_csv;     ///< relative paths resolve against the config file
  double spacing = 0.0;
  double intensity = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const BoundarySection&, const BoundarySection&) = default;
};

struct ThermoSection {
  double beta = 1.0;
  std::vector<double> lambda{0.0};

  friend bool operator==(const ThermoSection&, const ThermoSection&) = default;
};

struct EstimatorSection {
  std::uint64_t seed = 0;
  std::uint64_t samples = 100'000;
  std::string method = "mc";  ///< mc | grid
  int grid_points = 199;
  std::string grid_anchor = "point";  ///< point | box
  int anchor_points = 200;
  std::uint64_t chunk_size = 1 << 14;
  unsigned workers = 0;
  int order = 3;
  std::vector<double> x0;  ///< empty: the centre of the box
  bool average = false;    ///< cn: volume-averaged coefficients instead of c_n(x0)

  friend bool operator==(const EstimatorSection&, const EstimatorSection&) = default;
};

struct SweepSection {
  std::vector<double> L;

  friend bool operator==(const SweepSection&, const SweepSection&) = default;
};

struct OutputSection {
  std::string format = "csv";  ///< csv | json
  std::string path;            ///< empty: stdout

  friend bool operator==(const OutputSection&, const OutputSection&) = default;
};

/// Parsed run configuration. Unknown tables or keys are errors; every
/// semantic check runs in validate() before any estimator is built.
struct RunConfig {
  PotentialSection potential;
  BoxSection box;
  BoundarySection boundary;
  ThermoSection thermo;
  EstimatorSection estimator;
  SweepSection sweep;
  OutputSection output;
  std::filesystem::path base_dir;  ///< not serialized

  /// Throws ConfigError on malformed input.
  static RunConfig parse(std::string_view text, const std::filesystem::path& base_dir = {});
  static RunConfig load(const std::filesystem::path& path);

  /// Canonical TOML; parse(to_toml()) == *this.
  std::string to_toml() const;
  /// FNV-1a of to_toml() without the [output] table, as 16 hex digits.
  std::string hash() const;

  /// Throws ConfigError naming the first violated precondition.
  void validate() const;

  PairPotential make_potential() const;
  Box make_box() const;
  CubeGrid make_grid() const;
  BoundaryConfig make_boundary() const;
  System make_system() const;
  ShellSpec make_shell() const;
  Sampler make_sampler() const;
  MonteCarloSampler make_monte_carlo() const;
  std::vector<double> anchor() const;

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.potential == b.potential && a.box == b.box && a.boundary == b.boundary &&
           a.thermo == b.thermo && a.estimator == b.estimator && a.sweep == b.sweep &&
           a.output == b.output;
  }
};

}  // namespace bcx
