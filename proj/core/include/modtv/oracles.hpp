#pragma once

#include <functional>

#include "modtv/graph.hpp"
#include "modtv/modularity.hpp"

// Reference implementations used to verify the fast paths. Everything here is
// written directly from the defining sums and is deliberately slow.
namespace modtv::oracle {

/// Largest node count accepted by the exhaustive routines.
inline constexpr Index kMaxEnumerationNodes = 20;

struct SetFunction {
  Index num_nodes = 0;
  std::function<double(const NodeSet&)> evaluate;
};

/// Cut weight K(S) = sum_{i in S, j not in S} A_ij.
SetFunction cut_function(const Graph& g);
/// Cut weight of the rank-one null graph, K0(S) = sum_{i in S, j not in S} d_i d_j / vol.
SetFunction null_cut_function(const Graph& g);
/// Q(S) by the defining double sum.
SetFunction modularity_function(const Graph& g);

/// f_F(x) = sum_{i=1}^{n-1} F(C_{i+1})(x_{i+1} - x_i) + F(V) x_1 over the
/// ascending order of x (ties by index), C_i the suffix starting at position i.
double lovasz_extension(const SetFunction& f, std::span<const double> x);

/// (1/vol) sum_{i,j in S} (A_ij - d_i d_j / vol), dense double loop.
double modularity_naive(const Graph& g, const NodeSet& s);

/// 1/2 sum_{i,j} M_ij |x_i - x_j|^p over all ordered pairs, dense double loop
/// (p = 1 gives TV_Q).
double tv_q_naive(const Graph& g, std::span<const double> x, double p = 1.0);

/// 1/2 sum_{i,j} A_ij |x_i - x_j| over all ordered pairs.
double tv_graph_naive(const Graph& g, std::span<const double> x);

/// Exact maximizer of Q over all 2^n subsets. Throws std::invalid_argument if
/// n > kMaxEnumerationNodes.
SweepResult brute_force_max_modularity(const Graph& g);

struct VertexMax {
  double value = 0.0;     ///< max of TV_Q over the box vertices
  NodeSet argmax;         ///< S with b 1_S - a 1_{S^c} attaining it
  double predicted = 0.0; ///< vol (a + b) max_S Q(S)
};

/// Enumerates all 2^n box vertices. Throws std::logic_error if the vertex
/// maximum disagrees with vol (a + b) max Q by more than 1e-9 (relative to
/// max(1, |value|)).
VertexMax vertex_max_tv(const Graph& g, const BoxSpec& box);

/// Central differences of TV_Q^p with step h. Requires every pair of
/// components to differ by at least 10 h.
Vector finite_diff_gradient(const Graph& g, std::span<const double> x, double p, double h);

}  // namespace modtv::oracle
