#pragma once

#include <cstdint>
#include <span>

#include "modtv/graph.hpp"

namespace modtv::gen {

/// Two triangles {0,1,2} and {3,4,5} joined by the edge 2-3.
Graph barbell();

/// Complete graph on n nodes.
Graph complete(Index n);

/// G(n, p). Resampled until at least one edge exists.
Graph erdos_renyi(Index n, double p, std::uint64_t seed);

/// Planted partition: nodes are grouped into consecutive blocks of the given
/// sizes; same-block pairs connect with probability p_in, others with p_out.
/// Resampled until at least one edge exists.
Graph planted_partition(std::span<const Index> block_sizes, double p_in, double p_out,
                        std::uint64_t seed);

}  // namespace modtv::gen
