#include "modtv/generators.hpp"

#include <random>
#include <stdexcept>
#include <vector>

namespace modtv::gen {

Graph barbell() {
  const std::vector<Edge> edges{{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}, {2, 3, 1.0},
                                {3, 4, 1.0}, {4, 5, 1.0}, {5, 3, 1.0}};
  return Graph::from_edges(6, edges);
}

Graph complete(Index n) {
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
  }
  return Graph::from_edges(n, edges);
}

Graph erdos_renyi(Index n, double p, std::uint64_t seed) {
  const Index sizes[] = {n};
  return planted_partition(sizes, p, p, seed);
}

Graph planted_partition(std::span<const Index> block_sizes, double p_in, double p_out,
                        std::uint64_t seed) {
  std::vector<Index> block;
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    if (block_sizes[b] < 0) throw std::invalid_argument("negative block size");
    block.insert(block.end(), static_cast<std::size_t>(block_sizes[b]), static_cast<Index>(b));
  }
  const auto n = static_cast<Index>(block.size());
  if (n < 2) throw std::invalid_argument("need at least two nodes");
  if (!(p_in > 0.0 || p_out > 0.0)) throw std::invalid_argument("edge probabilities are all zero");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Edge> edges;
  while (edges.empty()) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double prob = block[i] == block[j] ? p_in : p_out;
        if (unit(rng) < prob) edges.push_back({i, j, 1.0});
      }
    }
  }
  return Graph::from_edges(n, edges);
}

}  // namespace modtv::gen
