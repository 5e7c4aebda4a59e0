#include "bcx/ursell.hpp"

#include <algorithm>
#include <cmath>

#include "bcx/simd.hpp"
#include "bcx/summation.hpp"

namespace bcx {

Configuration::Configuration(int dimension, std::vector<double> coords)
    : dimension_(dimension), coords_(std::move(coords)) {
  require(dimension >= 1, "configuration: dimension must be >= 1");
  require(!coords_.empty() && coords_.size() % dimension == 0,
          "configuration: need a whole, nonzero number of points");
  for (double c : coords_) require(std::isfinite(c), "configuration: coordinates must be finite");
}

double distance(std::span<const double> x, std::span<const double> y) {
  double r2 = 0.0;
  for (std::size_t c = 0; c < x.size(); ++c) {
    const double d = x[c] - y[c];
    r2 = r2 + d * d;
  }
  return std::sqrt(r2);
}

double f_bond(const PairPotential& p, double beta, std::span<const double> x,
              std::span<const double> y) {
  const double v = p(distance(x, y));
  if (v == 0.0) return 0.0;
  return std::expm1(-beta * v);
}

EdgeWeights::EdgeWeights(const Configuration& config, const PairPotential& p, double beta)
    : n_(config.size()), f_(static_cast<std::size_t>(n_) * n_, 0.0) {
  require(config.dimension() == p.dimension(), "edge weights: dimension mismatch");
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      f_[i * n_ + j] = f_[j * n_ + i] = f_bond(p, beta, config.point(i), config.point(j));
}

int pair_count(int vertices) { return vertices * (vertices - 1) / 2; }

std::vector<std::pair<int, int>> pair_list(int vertices) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < vertices; ++i)
    for (int j = i + 1; j < vertices; ++j) pairs.emplace_back(i, j);
  return pairs;
}

bool is_connected(const LabeledGraph& g) {
  const int m = g.vertices;
  if (m <= 1) return true;
  std::uint32_t adjacency[32] = {};
  int bit = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j, ++bit)
      if (g.edges >> bit & 1u) {
        adjacency[i] |= 1u << j;
        adjacency[j] |= 1u << i;
      }
  const std::uint32_t all = (m == 32) ? ~0u : (1u << m) - 1;
  std::uint32_t seen = 1u, frontier = 1u;
  while (frontier) {
    std::uint32_t next = 0;
    for (std::uint32_t f = frontier; f; f &= f - 1) next |= adjacency[__builtin_ctz(f)];
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == all;
}

std::uint64_t count_connected_graphs(int vertices) {
  std::uint64_t count = 0;
  for_each_connected_graph(vertices, [&](const LabeledGraph&) { ++count; });
  return count;
}

double graph_weight(const LabeledGraph& g, const EdgeWeights& f) {
  double w = 1.0;
  int bit = 0;
  for (int i = 0; i < g.vertices; ++i)
    for (int j = i + 1; j < g.vertices; ++j, ++bit)
      if (g.edges >> bit & 1u) w = w * f(i, j);
  return w;
}

double ursell_graph_sum(const EdgeWeights& f) {
  if (f.size() == 1) return 1.0;
  // Attractive wells give large cancelling terms.
  CompensatedSum sum;
  for_each_connected_graph(f.size(), [&](const LabeledGraph& g) { sum.add(graph_weight(g, f)); });
  return sum.value();
}

double ursell_graph_sum(const Configuration& config, const PairPotential& p, double beta) {
  return ursell_graph_sum(EdgeWeights(config, p, beta));
}

double ursell_subset_recursion(const Configuration& config, const PairPotential& p, double beta) {
  const int k = config.size();
  require(config.dimension() == p.dimension(), "ursell: dimension mismatch");
  if (k > kSubsetRecursionCap)
    throw CapabilityExceeded("subset recursion is capped at " +
                             std::to_string(kSubsetRecursionCap) + " points");
  if (k == 1) return 1.0;
  std::vector<double> bonds(static_cast<std::size_t>(k) * k, 1.0);
  std::vector<std::uint32_t> adjacency(k, 0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < i; ++j) {
      const double v = p(distance(config.point(i), config.point(j)));
      bonds[i * k + j] = bonds[j * k + i] = (v == 0.0) ? 1.0 : std::exp(-beta * v);
      if (v != 0.0) {
        adjacency[i] |= 1u << j;
        adjacency[j] |= 1u << i;
      }
    }
  // Every connected graph then contains a vanishing bond, so Phi^T is exactly
  // 0; the recursion would only return rounding residue.
  std::uint32_t seen = 1u, frontier = 1u;
  while (frontier) {
    std::uint32_t next = 0;
    for (std::uint32_t f = frontier; f; f &= f - 1) next |= adjacency[__builtin_ctz(f)];
    frontier = next & ~seen;
    seen |= next;
  }
  if (seen != (1u << k) - 1) return 0.0;
  std::vector<double> scratch(std::size_t{2} << k);
  return simd::ursell_from_boltzmann(k, bonds.data(), scratch.data());
}

namespace detail {

void decode_pruefer(int vertices, std::span<const int> code,
                    std::vector<std::pair<int, int>>& edges) {
  edges.clear();
  std::vector<int> degree(vertices, 1);
  for (int c : code) ++degree[c];
  for (int c : code) {
    int leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    edges.emplace_back(std::min(leaf, c), std::max(leaf, c));
    --degree[leaf];
    --degree[c];
  }
  int u = -1;
  for (int v = 0; v < vertices; ++v)
    if (degree[v] == 1) {
      if (u < 0) {
        u = v;
      } else {
        edges.emplace_back(u, v);
        break;
      }
    }
}

}  // namespace detail

std::uint64_t count_trees(int vertices) {
  std::uint64_t count = 0;
  for_each_tree(vertices, [&](std::span<const std::pair<int, int>>) { ++count; });
  return count;
}

double tree_bound(const Configuration& config, const PairPotential& p, double beta) {
  const int m = config.size();
  require(beta > 0.0, "tree bound: beta must be > 0");
  if (m > kTreeBoundCap)
    throw CapabilityExceeded("tree bound is capped at " + std::to_string(kTreeBoundCap) +
                             " points");
  const double prefactor = std::exp(beta * p.stability_constant() * m);
  if (m == 1) return prefactor;
  std::vector<double> factor(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double v = std::abs(p(distance(config.point(i), config.point(j))));
      factor[i * m + j] = -std::expm1(-beta * v);
    }
  double sum = 0.0;
  for_each_tree(m, [&](std::span<const std::pair<int, int>> edges) {
    double w = 1.0;
    for (auto [i, j] : edges) w = w * factor[i * m + j];
    sum += w;
  });
  return prefactor * sum;
}

}  // namespace bcx
