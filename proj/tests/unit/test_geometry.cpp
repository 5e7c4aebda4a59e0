#include <doctest.h>

#include <cmath>
#include <vector>

#include "bcx/error.hpp"
#include "bcx/geometry.hpp"

using namespace bcx;

TEST_SUITE("geometry") {

TEST_CASE("distance to the boundary is the sup-norm gap") {
  const Box b2 = make_box(2, 5.0);
  CHECK(dist_to_boundary(b2, std::vector{0.0, 0.0}) == 5.0);
  CHECK(dist_to_boundary(b2, std::vector{4.0, 1.0}) == 1.0);
  CHECK(dist_to_boundary(make_box(1, 5.0), std::vector{-4.5}) == 0.5);
  CHECK(b2.volume() == 100.0);
  CHECK(b2.contains(std::vector{-5.0, 4.999}));
}

TEST_CASE("cells are half-open") {
  const CubeGrid g1(1, 1.0);
  CHECK(g1.cell_of(std::vector{0.5}) == std::vector<std::int64_t>{0});
  CHECK(g1.cell_of(std::vector{1.0}) == std::vector<std::int64_t>{1});
  CHECK(g1.cell_of(std::vector{-1.0}) == std::vector<std::int64_t>{-1});
  const CubeGrid g2(1, 0.5);
  CHECK(g2.cell_of(std::vector{-0.25}) == std::vector<std::int64_t>{-1});
}

TEST_CASE("cell-count condition") {
  const Box box = make_box(1, 5.0);
  const std::vector<double> origin{0.0};

  const CubeGrid fine = CubeGrid::aligned(box, 1.0, 0.25);
  CHECK(cells_within(fine, 1.0, origin) == 10);
  const TusfReport r = check_tusf(fine, 1.0, origin);
  CHECK(r.pass);
  CHECK(r.worst_ratio == 0.625);

  // [-2,-1), [-1,0), [0,1), [1,2): the closed unit ball touches four cells.
  const CubeGrid coarse = CubeGrid::aligned(box, 1.0, 1.0);
  CHECK(cells_within(coarse, 1.0, origin) == 4);
  CHECK(check_tusf(coarse, 1.0, origin).worst_ratio == 1.0);

  // The default cell size satisfies the condition everywhere, in any dimension.
  for (int d = 1; d <= 3; ++d) {
    const Box b = make_box(d, 6.0);
    const CubeGrid g = CubeGrid::aligned(b, 1.0);
    CHECK(g.cell_size() <= default_cell_size(d, 1.0));
    CHECK(std::abs(6.0 / g.cell_size() - std::round(6.0 / g.cell_size())) < 1e-9);
    std::vector<double> samples;
    for (int i = 0; i < 50; ++i)
      for (int c = 0; c < d; ++c) samples.push_back(-3.0 + 0.1237 * i + 0.31 * c);
    CHECK(check_tusf(g, 1.0, samples).pass);
  }

  CHECK_THROWS_AS(CubeGrid::aligned(box, 1.0, 0.3), InvalidArgument);
}

TEST_CASE("bulk and shell regions") {
  const Regions r1 = regions(make_box(1, 100.0), 10.0);
  CHECK(r1.bulk_volume == 180.0);
  CHECK(r1.shell_volume == 20.0);
  CHECK(r1.box_volume == 200.0);
  const Regions r2 = regions(make_box(2, 100.0), 10.0);
  CHECK(r2.bulk_volume == 32400.0);
  CHECK(r2.shell_volume == 7600.0);
  CHECK(regions(make_box(2, 100.0), 1e-9).shell_volume < 1e-5);

  const Regions r3 = regions(make_box(1, 100.0), ShellSpec{0.5});
  CHECK(r3.shell_width == 10.0);
}

TEST_CASE("cutoff order") {
  CHECK(n_cut(10.0, 1.0) == 9);
  CHECK(n_cut(10.0, 3.0) == 2);
  CHECK(n_cut(ShellSpec{0.5}.width(100.0), 1.0) == 9);
  CHECK_THROWS_AS(n_cut(1.0, 1.0), InvalidArgument);
}

}
