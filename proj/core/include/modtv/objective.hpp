#pragma once

#include <cstdint>
#include <span>

#include "modtv/graph.hpp"

namespace modtv {

/// Counts evaluations of the pairwise term M_ij sign(x_i - x_j)|x_i - x_j|^(p-1)
/// over the dense (degree-product) part of M. One pair {i, j} evaluated once
/// counts one, whichever endpoints receive it.
struct OpCounter {
  std::uint64_t pair_terms = 0;
  std::uint64_t full_gradients = 0;
  std::uint64_t incremental_gradients = 0;
};

/// TV_Q(x) = 1/2 sum_ij (d_i d_j / vol - A_ij)|x_i - x_j|. O(m + n log n):
/// the degree part comes from prefix sums over the sorted order of x.
double tv_q(const Graph& g, std::span<const double> x);

/// TV_G(x) = 1/2 sum_ij A_ij |x_i - x_j|.
double tv_graph(const Graph& g, std::span<const double> x);

/// TV_Q^p(x) = sum_{i<j} M_ij |x_i - x_j|^p. O(n^2 + m). Requires p > 1.
double tv_q_p(const Graph& g, std::span<const double> x, double p);

/// Gradient of TV_Q^p by the full pairwise sum, O(n(n-1)/2).
Vector grad_full(const Graph& g, std::span<const double> x, double p, OpCounter* ops = nullptr);

/// Gradient of TV_Q^p at x_new from the gradient at x_old, where the two
/// points differ only on `changed`. Components in `changed` are recomputed
/// in full; every other component h is corrected by phi_h(x_new) - phi_h(x_old),
/// phi_h summing over j in `changed` only.
/// Throws std::invalid_argument if x_new differs from x_old outside `changed`.
Vector grad_incremental(const Graph& g, std::span<const double> x_old,
                        std::span<const double> grad_old, std::span<const double> x_new,
                        std::span<const Index> changed, double p, OpCounter* ops = nullptr);

/// TV_Q^p(x) = grad^T x / p (Euler's identity for degree-p homogeneity).
double obj_from_grad(std::span<const double> grad, std::span<const double> x, double p);

/// Pair-term counts of the two gradient routes.
std::uint64_t full_gradient_cost(Index n);
std::uint64_t incremental_gradient_cost(Index n, Index changed);
/// |W| < (n - 1) / 3, i.e. |W|(4n - 3|W| - 1) < n(n - 1).
bool prefer_incremental(Index n, Index changed);

/// The minimization objective f = -TV_Q^p used by the solver. All gradients
/// returned here are gradients of f.
class Objective {
 public:
  Objective(const Graph& g, double p);

  const Graph& graph() const { return *graph_; }
  double p() const { return p_; }

  double value(std::span<const double> x) const;
  Vector gradient(std::span<const double> x, OpCounter* ops = nullptr) const;
  Vector gradient_update(std::span<const double> x_old, std::span<const double> grad_old,
                         std::span<const double> x_new, std::span<const Index> changed,
                         OpCounter* ops = nullptr) const;
  /// f(x) from grad f(x) in O(n).
  double value_from_gradient(std::span<const double> grad, std::span<const double> x) const;

 private:
  const Graph* graph_;
  double p_;
};

struct GradientCacheOptions {
  /// Incremental updates allowed between two full evaluations.
  int refresh_period = 1000;
  /// Relative drift tolerated at a refresh audit before it is counted as a failure.
  double drift_tolerance = 1e-8;
};

/// Owns the gradient of f at a base point and produces gradients at nearby
/// points, choosing between the full and incremental routes by cost. Every
/// `refresh_period` incremental updates the full route is taken instead and
/// the incremental answer is audited against it.
class GradientCache {
 public:
  explicit GradientCache(const Objective& objective, GradientCacheOptions options = {});

  /// Full evaluation at x; becomes the base.
  void reset(std::span<const double> x);
  /// Installs a known (x, grad) pair as the base.
  void restore(Vector x, Vector grad);
  void accept(Vector x, Vector grad) { restore(std::move(x), std::move(grad)); }

  bool valid() const { return valid_; }
  const Vector& x() const { return x_; }
  const Vector& gradient() const { return grad_; }

  /// Gradient of f at x_new, which differs from the base only on `changed`.
  /// Does not move the base.
  Vector gradient_at(std::span<const double> x_new, std::span<const Index> changed);

  const OpCounter& ops() const { return ops_; }
  std::uint64_t audits() const { return audits_; }
  std::uint64_t audit_failures() const { return audit_failures_; }
  double max_drift() const { return max_drift_; }

 private:
  const Objective* objective_;
  GradientCacheOptions options_;
  Vector x_;
  Vector grad_;
  bool valid_ = false;
  int since_refresh_ = 0;
  OpCounter ops_;
  std::uint64_t audits_ = 0;
  std::uint64_t audit_failures_ = 0;
  double max_drift_ = 0.0;
};

}  // namespace modtv
