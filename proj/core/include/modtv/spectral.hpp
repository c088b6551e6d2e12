#pragma once

#include <cstdint>

#include "modtv/graph.hpp"

namespace modtv {

struct PowerIterParams {
  /// Converged when ||B x - lambda x||_inf <= tol * |lambda|.
  double tol = 1e-8;
  int max_iters = 10000;
  /// Diagonal shift c for B + cI; 0 selects d_max + ||d||^2 / vol.
  double shift = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EigenResult {
  Vector vector;  ///< unit infinity norm, first nonzero component positive
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// B v = A v - d (d^T v) / vol, without forming B.
Vector modularity_matvec(const Graph& g, std::span<const double> v);

/// Leading eigenpair of the modularity matrix B by shifted power iteration
/// from a mean-free random start. Requires n >= 2. When max_iters is hit the
/// best iterate is returned with converged = false.
EigenResult leading_eigenvector(const Graph& g, const PowerIterParams& params = {});

}  // namespace modtv
