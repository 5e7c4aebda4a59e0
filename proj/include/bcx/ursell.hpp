#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bcx/error.hpp"
#include "bcx/potential.hpp"

namespace bcx {

/// Ordered points (x_0, ..., x_n), stored back to back.
class Configuration {
 public:
  Configuration(int dimension, std::vector<double> coords);

  int dimension() const { return dimension_; }
  int size() const { return static_cast<int>(coords_.size()) / dimension_; }
  std::span<const double> point(int i) const {
    return std::span<const double>(coords_).subspan(static_cast<std::size_t>(i) * dimension_,
                                                    dimension_);
  }
  std::span<const double> coords() const { return coords_; }

 private:
  int dimension_;
  std::vector<double> coords_;
};

double distance(std::span<const double> x, std::span<const double> y);

/// e^{-beta v(|x - y|)} - 1: exactly -1 on a hard-core overlap, exactly 0 at |x - y| >= R.
double f_bond(const PairPotential& p, double beta, std::span<const double> x,
              std::span<const double> y);

/// Symmetric matrix of f-bonds for one configuration.
class EdgeWeights {
 public:
  EdgeWeights(const Configuration& config, const PairPotential& p, double beta);

  int size() const { return n_; }
  double operator()(int i, int j) const { return f_[i * n_ + j]; }

 private:
  int n_;
  std::vector<double> f_;
};

/// Graphs on vertices {0, ..., m-1}. Bit b of `edges` is the b-th pair in the
/// order (0,1), (0,2), ..., (0,m-1), (1,2), ...
struct LabeledGraph {
  int vertices = 0;
  std::uint32_t edges = 0;
};

inline constexpr int kGraphSumCap = 7;
inline constexpr int kSubsetRecursionCap = 20;
inline constexpr int kTreeBoundCap = 9;
inline constexpr int kTreeEnumerationCap = 10;

int pair_count(int vertices);
/// Pairs in bit order.
std::vector<std::pair<int, int>> pair_list(int vertices);

bool is_connected(const LabeledGraph& g);

/// Visits the connected graphs whose edge mask lies in [first, last). Masks
/// are visited in increasing order, so disjoint ranges partition the work.
template <class F>
void for_each_connected_graph(int vertices, F&& visit, std::uint64_t first = 0,
                              std::uint64_t last = ~std::uint64_t{0}) {
  if (vertices < 1) throw InvalidArgument("graph enumeration: need at least one vertex");
  if (vertices > kGraphSumCap)
    throw CapabilityExceeded("graph enumeration is capped at " + std::to_string(kGraphSumCap) +
                             " vertices; use the subset recursion");
  const std::uint64_t total = std::uint64_t{1} << pair_count(vertices);
  if (last > total) last = total;
  for (std::uint64_t m = first; m < last; ++m) {
    LabeledGraph g{vertices, static_cast<std::uint32_t>(m)};
    if (is_connected(g)) visit(g);
  }
}

std::uint64_t count_connected_graphs(int vertices);

/// Product of f-bonds over the edges of g, multiplied in bit order.
double graph_weight(const LabeledGraph& g, const EdgeWeights& f);

/// Sum over connected graphs of products of f-bonds (compensated summation).
double ursell_graph_sum(const EdgeWeights& f);
double ursell_graph_sum(const Configuration& config, const PairPotential& p, double beta);

/// Same quantity via the first-vertex deconvolution over subsets, 3^m work.
double ursell_subset_recursion(const Configuration& config, const PairPotential& p, double beta);

/// Visits each labelled tree on `vertices` vertices once, decoded from its
/// Pruefer sequence; the callback receives the m - 1 edges.
template <class F>
void for_each_tree(int vertices, F&& visit);

std::uint64_t count_trees(int vertices);

/// e^{beta C (n+1)} sum over trees of prod over tree edges of (1 - e^{-beta |v|}).
double tree_bound(const Configuration& config, const PairPotential& p, double beta);

namespace detail {
void decode_pruefer(int vertices, std::span<const int> code,
                    std::vector<std::pair<int, int>>& edges);
}

template <class F>
void for_each_tree(int vertices, F&& visit) {
  if (vertices < 2) throw InvalidArgument("tree enumeration: need at least two vertices");
  if (vertices > kTreeEnumerationCap)
    throw CapabilityExceeded("tree enumeration is capped at " +
                             std::to_string(kTreeEnumerationCap) + " vertices");
  const int len = vertices - 2;
  std::vector<int> code(len, 0);
  std::vector<std::pair<int, int>> edges;
  while (true) {
    detail::decode_pruefer(vertices, code, edges);
    visit(std::span<const std::pair<int, int>>(edges));
    int i = len - 1;
    while (i >= 0 && code[i] == vertices - 1) code[i--] = 0;
    if (i < 0) break;
    ++code[i];
  }
}

}  // namespace bcx
