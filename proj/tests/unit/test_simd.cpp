#include <doctest.h>

#include <bit>
#include <cstring>
#include <vector>

#include "bcx/rng.hpp"
#include "bcx/simd.hpp"
#include "bcx/ursell.hpp"

using namespace bcx;

namespace {

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("scalar level is always available") {
  CHECK(simd::supported(simd::Level::kScalar));
  CHECK(simd::name(simd::Level::kScalar) == "scalar");
  MESSAGE("active kernels: " << simd::name(simd::active().level));
}

TEST_CASE("batched Ursell kernel matches the per-configuration recursion") {
  const auto p = PairPotential::square_well(2, 0.4, 0.9, 1.0);
  const auto table = p.boltzmann_table(1.0);
  const auto view = simd::StepTableView::of(table);
  for (int k = 2; k <= 8; ++k) {
    const std::size_t count = 37, d = 2;
    Stream rng(derive_seed(3, {static_cast<std::uint64_t>(k)}));
    std::vector<double> coords(k * d * count);
    for (double& c : coords) c = rng.uniform(-0.6, 0.6);
    std::vector<double> out(count), scratch(simd::ursell_scratch_size(k));
    simd::scalar::ursell_batch(k, d, coords.data(), count, count, view, out.data(), scratch.data());
    for (std::size_t s = 0; s < count; ++s) {
      std::vector<double> pts;
      for (int i = 0; i < k; ++i)
        for (std::size_t c = 0; c < d; ++c) pts.push_back(coords[(i * d + c) * count + s]);
      const double ref = ursell_subset_recursion(Configuration(2, pts), p, 1.0);
      CHECK(out[s] == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("AVX2 kernels are bitwise equal to the scalar reference") {
  if (!simd::supported(simd::Level::kAvx2)) {
    MESSAGE("AVX2 not available on this host; equivalence not exercised");
    return;
  }
  const auto& vec = simd::kernels(simd::Level::kAvx2);
  const auto& ref = simd::kernels(simd::Level::kScalar);
  for (int d = 1; d <= 3; ++d) {
    const auto p = PairPotential::square_well(d, 0.3, 1.1, 1.0);
    const auto energy = p.energy_table();
    const auto boltz = p.boltzmann_table(0.8);
    Stream rng(derive_seed(11, {static_cast<std::uint64_t>(d)}));

    // Radial sums over point counts that exercise every tail length.
    for (std::size_t n : {0, 1, 3, 4, 5, 17, 64, 101}) {
      std::vector<double> pts(n * d);
      for (double& c : pts) c = rng.uniform(-1.2, 1.2);
      const simd::PointsView view{pts.data(), n, n};
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(d);
        for (double& c : x) c = rng.uniform(-0.5, 0.5);
        const double a = ref.radial_sum(x.data(), d, view, simd::StepTableView::of(energy));
        const double b = vec.radial_sum(x.data(), d, view, simd::StepTableView::of(energy));
        CHECK(same_bits(a, b));
      }
    }

    for (int k = 2; k <= 9; ++k) {
      for (std::size_t count : {1, 3, 4, 7, 64}) {
        std::vector<double> coords(k * d * count);
        for (double& c : coords) c = rng.uniform(-0.7, 0.7);
        std::vector<double> out_ref(count), out_vec(count), scratch(simd::ursell_scratch_size(k));
        ref.ursell_batch(k, d, coords.data(), count, count, simd::StepTableView::of(boltz),
                         out_ref.data(), scratch.data());
        vec.ursell_batch(k, d, coords.data(), count, count, simd::StepTableView::of(boltz),
                         out_vec.data(), scratch.data());
        for (std::size_t s = 0; s < count; ++s) CHECK(same_bits(out_ref[s], out_vec[s]));
      }
    }
  }
}

}
