#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "modtv/graph.hpp"
#include "modtv/objective.hpp"

namespace modtv {

/// Raised when a run cannot continue: line search exhaustion, non-finite
/// values, or a violated internal contract.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;

/// Which quantity the unit-step test compares against the radius.
enum class UnitStepTest {
  kPointNorm,         ///< ||[x + d]#||_inf <= radius
  kDisplacementNorm,  ///< ||[x + d]# - x||_inf <= radius
};

struct SolverParams {
  double p = 1.4;
  int function_control_period = 20;  ///< Z: iterations between forced function checks
  int reference_memory = 100;        ///< M: checkpoint values kept for the reference max
  double initial_radius = 1e20;      ///< Delta_0
  double radius_shrink = 0.99;       ///< beta
  double backtrack_factor = 0.5;     ///< delta in the Armijo rule
  double armijo_slope = 1e-3;        ///< gamma
  double mu_min = 1e-10;
  double mu_max = 1e10;
  Index ws_start = 2;
  Index ws_cap = 0;  ///< 0 selects max(10, min(1000, floor(0.03 n)))
  double eps_stat = 1e-4;
  std::int64_t max_iters = 0;  ///< 0 selects min(10 n, 1e6)
  int max_ls_steps = 100;
  std::uint64_t seed = 0;
  /// Snap the start point to box vertices by sign before iterating.
  bool snap_start = true;
  UnitStepTest unit_step_test = UnitStepTest::kPointNorm;
  GradientCacheOptions gradient_cache;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
  Index working_set_cap(Index n) const;
  std::int64_t iteration_limit(Index n) const;
};

struct ActiveSets {
  std::vector<Index> lower;  ///< at -a with grad_i f > 0
  std::vector<Index> upper;  ///< at b with grad_i f < 0
  std::vector<Index> free;   ///< everything else
};

/// Componentwise clamp to [-a, b].
Vector project(std::span<const double> x, const BoxSpec& box);

/// Negative components to -a, non-negative ones to b.
Vector initialize(std::span<const double> x0, const BoxSpec& box);

ActiveSets estimate_sets(std::span<const double> x, std::span<const double> grad,
                         const BoxSpec& box);

/// ||x - [x - grad]#||_inf.
double stationarity_measure(std::span<const double> x, std::span<const double> grad,
                            const BoxSpec& box);

/// Working set drawn from `free`: the index of maximal stationarity violation
/// (smallest index on ties) comes first, followed by up to target_size - 1
/// indices sampled uniformly without replacement from the rest of `free`.
/// Throws SolverError if `free` is empty.
std::vector<Index> select_working_set(std::span<const double> x, std::span<const double> grad,
                                      const BoxSpec& box, std::span<const Index> free,
                                      Index target_size, Rng& rng);

/// Previous-step differences restricted to the working set.
struct SecantPair {
  Vector s;  ///< x^k_W - x^{k-1}_W
  Vector y;  ///< grad_W f(x^k) - grad_W f(x^{k-1})
};

/// Safeguarded Barzilai-Borwein coefficient mu in [mu_min, mu_max].
/// Without a secant pair, mu = max(mu_min, min(1, ||x_W|| / ||grad_W||)).
double bb_coefficient(std::span<const double> x_w, std::span<const double> grad_w,
                      const std::optional<SecantPair>& secant, double mu_min, double mu_max);

/// d with d_W = -grad_W / mu and zeros elsewhere.
Vector direction(std::span<const double> grad, std::span<const Index> working_set, double mu);

struct LineSearchResult {
  double alpha = 1.0;
  Vector x_next;
  double f_next = 0.0;
  int steps = 0;  ///< function evaluations spent
};

/// Non-monotone Armijo rule: the first alpha = delta^nu (nu = 0, 1, ...) with
/// f([x + alpha d]#) <= f_ref + gamma alpha grad^T d. Throws SolverError after
/// max_ls_steps rejected trials.
LineSearchResult nonmonotone_linesearch(const std::function<double(const Vector&)>& f,
                                        std::span<const double> x, std::span<const double> d,
                                        double f_ref, std::span<const double> grad,
                                        const BoxSpec& box, const SolverParams& params);

struct SolverTelemetry {
  std::int64_t unit_steps = 0;
  std::int64_t line_searches = 0;
  std::int64_t line_search_trials = 0;
  std::int64_t backtracks = 0;
  std::int64_t function_controls = 0;
  /// f_R after initialization and after every new checkpoint.
  std::vector<double> reference_values;
  OpCounter gradient_ops;
  std::uint64_t drift_audits = 0;
  std::uint64_t drift_audit_failures = 0;
  double max_drift = 0.0;
  /// FNV-1a digest of the bit patterns of every iterate.
  std::uint64_t iterate_digest = 0;
  bool converged = false;
};

struct ModuleResult {
  Vector x_star;
  NodeSet community;
  double q_value = 0.0;
  double tv_p_init = 0.0;
  double tv_p_final = 0.0;
  double tv_final = 0.0;
  double stationarity = 0.0;
  std::int64_t iters = 0;
  std::int64_t fevals = 0;
  std::int64_t gevals = 0;
  double wall_time_ms = 0.0;
  std::uint64_t seed = 0;
  SolverTelemetry telemetry;
};

/// Per-iteration view handed to an observer after the iterate is updated.
struct IterationEvent {
  std::int64_t iteration = 0;
  std::int64_t k = 0;  ///< algorithm counter (rewinds on backtrack)
  std::span<const double> x{};
  double mu = 0.0;
  double slope = 0.0;  ///< grad^T d of the direction that produced x
  Index working_set_size = 0;
  bool function_control = false;
  bool unit_step = false;
  bool backtracked = false;
  std::int64_t fevals_in_iteration = 0;
};

using IterationObserver = std::function<void(const IterationEvent&)>;

/// Active-set first-order maximization of TV_Q^p over the box (minimizes
/// f = -TV_Q^p) with non-monotone stabilization. The result carries the
/// thresholded community of the final point.
ModuleResult fast_atvo(const Graph& g, std::span<const double> x0, const BoxSpec& box,
                       const SolverParams& params, const IterationObserver& observer = {});

/// Fills community, q_value and tv_final from result.x_star.
void finalize_result(const Graph& g, ModuleResult& result);

}  // namespace modtv
