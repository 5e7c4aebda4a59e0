#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "bcx/config.hpp"
#include "bcx/error.hpp"

using namespace bcx;

#ifndef BCX_CONFIG_DIR
#error "BCX_CONFIG_DIR must point at the example configs"
#endif

namespace {

const char* kFull = R"(
[potential]
preset = "custom"
d = 2
R = 1.5
a = 0.25
C_decl = 3
pieces = [[0.25, 1.0, -0.5], [1.0, 1.5, 0.125]]

[box]
L = 12
delta = 0.25
h_exponent = 0.6

[boundary]
kind = "explicit"
points = [[12.5, 0.0], [-12.25, 3.0]]

[thermo]
beta = 0.75
lambda = [0, 1e-3, 0.1]

[estimator]
seed = 123456789
samples = 5000
method = "mc"
order = 2
x0 = [1.0, -2.5]
average = true

[sweep]
L = [25, 100]

[output]
format = "json"
path = "out.json"
)";

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults") {
  const RunConfig c = RunConfig::parse("");
  CHECK(c.potential.preset == "hard_rod");
  CHECK(c.estimator.method == "mc");
  CHECK_NOTHROW(c.validate());
  CHECK(c.anchor() == std::vector<double>{0.0});
}

TEST_CASE("canonical round trip") {
  const RunConfig c = RunConfig::parse(kFull);
  CHECK(c.potential.pieces.size() == 2);
  CHECK(c.potential.c_decl == 3.0);
  CHECK(c.box.delta == 0.25);
  CHECK(c.boundary.points.size() == 2);
  CHECK(c.thermo.lambda.size() == 3);
  CHECK(c.estimator.seed == 123456789u);
  CHECK(c.estimator.average);
  const RunConfig again = RunConfig::parse(c.to_toml());
  CHECK(again == c);
  CHECK(again.to_toml() == c.to_toml());
  CHECK(again.hash() == c.hash());
  CHECK_NOTHROW(c.validate());

  for (const auto& entry : std::filesystem::directory_iterator(BCX_CONFIG_DIR)) {
    if (entry.path().extension() != ".toml") continue;
    CAPTURE(entry.path().string());
    const RunConfig file = RunConfig::load(entry.path());
    CHECK_NOTHROW(file.validate());
    CHECK(RunConfig::parse(file.to_toml()) == file);
  }
}

TEST_CASE("hash tracks content") {
  RunConfig a = RunConfig::parse(kFull);
  RunConfig b = a;
  CHECK(a.hash().size() == 16);
  b.estimator.seed += 1;
  CHECK(a.hash() != b.hash());
  b = a;
  b.base_dir = "/elsewhere";
  b.output.path = "elsewhere.csv";
  b.output.format = "json";
  CHECK(a.hash() == b.hash());
}

TEST_CASE("fail fast on bad input") {
  CHECK_THROWS_AS(RunConfig::parse("[potential\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("[potential]\nradius = 1\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("[extras]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("top = 1\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("[box]\nL = \"big\"\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("[estimator]\nseed = -1\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("[estimator]\nsamples = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::load("/nonexistent/run.toml"), ConfigError);

  auto invalid = [](const char* text) { return RunConfig::parse(text).validate(); };
  CHECK_THROWS_AS(invalid("[output]\nformat = \"xml\"\n"), ConfigError);
  CHECK_THROWS_AS(invalid("[estimator]\nmethod = \"quasi\"\n"), ConfigError);
  CHECK_THROWS_AS(invalid("[estimator]\nx0 = [20.0]\n"), ConfigError);
  CHECK_THROWS_AS(invalid("[estimator]\nx0 = [0.0, 0.0]\n"), ConfigError);
  CHECK_THROWS_AS(invalid("[thermo]\nbeta = 0\n"), ConfigError);
  CHECK_THROWS_AS(invalid("[potential]\npreset = \"lennard_jones\"\n"), ConfigError);
  CHECK_THROWS_AS(invalid("[potential]\npreset = \"square_well\"\n"), ConfigError);
  CHECK_THROWS_AS(invalid("[potential]\npreset = \"custom\"\npieces = [[0.0, 1.0, 1.0]]\n"),
                  ConfigError);
  CHECK_THROWS_AS(invalid("[potential]\npreset = \"hard_rod\"\nd = 2\n"), ConfigError);
  CHECK_THROWS_AS(invalid("[box]\ndelta = 0.3\n"), ConfigError);
  CHECK_THROWS_AS(invalid("[boundary]\nkind = \"mirror\"\n"), ConfigError);
  CHECK_THROWS_AS(invalid("[boundary]\nkind = \"explicit\"\npoints = [[1.0, 2.0]]\n"), ConfigError);
  CHECK_THROWS_AS(invalid("[box]\nh_exponent = 1.0\n"), ConfigError);
}

TEST_CASE("boundary points from a CSV file next to the config") {
  const auto dir = std::filesystem::temp_directory_path() / "bcx_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "omega.csv") << "# y\n10.2\n-10.5\n 10.9 \n";
    std::ofstream(dir / "run.toml") << "[box]\nL = 10\n[boundary]\nkind = \"explicit\"\n"
                                       "points_csv = \"omega.csv\"\n";
  }
  const RunConfig c = RunConfig::load(dir / "run.toml");
  CHECK(c.make_boundary().size() == 3);
  std::ofstream(dir / "omega.csv") << "10.2\nten\n";
  CHECK_THROWS_AS(RunConfig::load(dir / "run.toml").validate(), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("builders") {
  const RunConfig c = RunConfig::load(std::filesystem::path(BCX_CONFIG_DIR) / "square_well_grid.toml");
  const System s = c.make_system();
  CHECK(s.potential.stability_constant() == 1.0);
  CHECK(s.boundary.size() == 4);
  CHECK(s.boundary.rho_omega() == 2.0);
  CHECK(std::holds_alternative<MonteCarloSampler>(c.make_sampler()));
  CHECK(c.make_monte_carlo().seed == 7);

  RunConfig g = c;
  g.estimator.method = "grid";
  g.estimator.grid_anchor = "box";
  const auto sampler = std::get<GridSampler>(g.make_sampler());
  CHECK(sampler.anchor == GridAnchor::kBox);

  RunConfig decl = c;
  decl.potential.c_decl = 2.0;
  CHECK(decl.make_potential().stability_constant() == 2.0);
}

}
