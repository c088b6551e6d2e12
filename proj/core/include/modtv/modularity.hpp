#pragma once

#include <vector>

#include "modtv/graph.hpp"

namespace modtv {

/// Q(S) = (1/vol) * sum_{i,j in S} (A_ij - d_i d_j / vol).
/// Evaluated in O(vol-incident edges of S) as (w_in(S) - vol(S)^2 / vol) / vol.
double modularity(const Graph& g, const NodeSet& s);

struct SweepResult {
  NodeSet community;
  double q = 0.0;
};

/// Ascending (stable) order of x; ties keep node-index order.
std::vector<Index> ascending_order(std::span<const double> x);

/// Q of every suffix set of the ascending order: entry t is Q of the set
/// formed by the last n - t nodes, for t = 0 .. n-1 (entry 0 is Q(V) = 0).
/// Computed incrementally in O(m + n log n).
Vector sweep_profile(const Graph& g, std::span<const double> x);

/// Best suffix set of the ascending order of x by modularity. Candidates are
/// the full node set and every proper nonempty suffix; equal Q goes to the
/// smaller set.
SweepResult threshold_sweep(const Graph& g, std::span<const double> x);

}  // namespace modtv
