#pragma once

#include <cstdint>
#include <vector>

#include "modtv/solver.hpp"

namespace modtv {

enum class PsAcceptance {
  kLarger,  ///< keep the re-solved point iff its TV_Q is strictly larger
  kLiteralSmaller,  ///< keep it iff its TV_Q is strictly smaller (comparison mode)
};

struct GlobalParams {
  double sigma = 75.0;  ///< percentage of each sign class flipped by swap
  int ps_iters = 10;
  int restarts = 10;
  std::uint64_t seed = 0;
  PsAcceptance acceptance = PsAcceptance::kLarger;

  void validate() const;
};

/// Flips floor(sigma% of each sign class) to the opposite bound: components
/// with x_i < 0 may move to b, components with x_i >= 0 may move to -a. At
/// least one index is flipped per nonempty class when sigma > 0.
Vector swap(std::span<const double> x, double sigma, const BoxSpec& box, Rng& rng);

struct SearchStep {
  int iteration = 0;
  double candidate_tv = 0.0;
  double incumbent_tv = 0.0;
  double incumbent_q = 0.0;
  bool accepted = false;
};

struct GlobalResult {
  ModuleResult best;
  std::vector<SearchStep> history;
  std::int64_t total_iters = 0;
  std::int64_t total_fevals = 0;
  std::int64_t total_gevals = 0;
  double wall_time_ms = 0.0;
};

/// Iterated local search: solve from x0, then repeatedly perturb the
/// incumbent with swap, re-solve, and keep the better point by TV_Q.
GlobalResult partition_and_swap(const Graph& g, std::span<const double> x0, const BoxSpec& box,
                                const SolverParams& sp, const GlobalParams& gp);

/// Best-by-TV_Q of `restarts` solver runs from uniform random points in the box.
GlobalResult multistart(const Graph& g, const BoxSpec& box, const SolverParams& sp,
                        const GlobalParams& gp);

}  // namespace modtv
