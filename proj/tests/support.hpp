#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "modtv/generators.hpp"
#include "modtv/graph.hpp"

namespace modtv::testing {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline double max_rel_err(std::span<const double> got, std::span<const double> want) {
  double scale = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    scale = std::max(scale, std::abs(want[i]));
    diff = std::max(diff, std::abs(got[i] - want[i]));
  }
  return diff / std::max(scale, 1e-300);
}

inline Vector uniform_vector(Index n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector x(static_cast<std::size_t>(n));
  for (double& v : x) v = u(rng);
  return x;
}

/// Random vector whose sorted components are at least `gap` apart.
inline Vector spread_vector(Index n, double gap, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector steps(static_cast<std::size_t>(n));
  double pos = -0.5 * gap * n;
  for (double& s : steps) {
    pos += gap + u(rng) * gap;
    s = pos;
  }
  std::shuffle(steps.begin(), steps.end(), rng);
  return steps;
}

inline NodeSet random_set(Index n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  NodeSet s(n);
  for (Index i = 0; i < n; ++i) {
    if (coin(rng)) s.insert(i);
  }
  return s;
}

/// Mixed corpus: Erdos-Renyi G(n, 0.3) and planted two-block graphs.
inline Graph corpus_graph(int index, Index n, std::uint64_t seed) {
  if (index % 2 == 0) return gen::erdos_renyi(n, 0.3, seed);
  const Index blocks[] = {n / 2, n - n / 2};
  return gen::planted_partition(blocks, 0.8, 0.1, seed);
}

}  // namespace modtv::testing
