#include "modtv/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "modtv/modularity.hpp"

namespace modtv {
namespace {

void require_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("exponent p must be > 1");
}

void require_len(const Graph& g, std::size_t len) {
  if (static_cast<Index>(len) != g.num_nodes()) throw std::invalid_argument("vector length mismatch");
}

// |t|^e with a one-entry memo: iterates sitting on box vertices produce the
// same |x_i - x_j| for most pairs.
class AbsPow {
 public:
  explicit AbsPow(double e) : e_(e) {}
  double operator()(double t) {
    const double a = std::abs(t);
    if (a != last_in_) {
      last_in_ = a;
      last_out_ = a == 0.0 ? 0.0 : std::pow(a, e_);
    }
    return last_out_;
  }

 private:
  double e_;
  double last_in_ = 0.0;
  double last_out_ = 0.0;
};

// sign(t)|t|^(p-1)
class SignedPow {
 public:
  explicit SignedPow(double p) : pow_(p - 1.0) {}
  double operator()(double t) {
    const double v = pow_(t);
    return t > 0.0 ? v : (t < 0.0 ? -v : 0.0);
  }

 private:
  AbsPow pow_;
};

// Gradient of sign * TV_Q^p, full route.
Vector gradient_full_scaled(const Graph& g, std::span<const double> x, double p, double sign,
                            OpCounter* ops) {
  const Index n = g.num_nodes();
  require_len(g, x.size());
  const auto& d = g.degrees();
  const double dense_scale = sign * p / g.volume();
  SignedPow term(p);
  Vector grad(static_cast<std::size_t>(n), 0.0);
  for (Index i = 0; i < n; ++i) {
    const double di = d[i] * dense_scale;
    if (di == 0.0) continue;
    const double xi = x[i];
    double acc = 0.0;
    for (Index j = i + 1; j < n; ++j) {
      const double t = di * d[j] * term(xi - x[j]);
      acc += t;
      grad[j] -= t;
    }
    grad[i] += acc;
  }
  const double sparse_scale = -sign * p;
  for (Index i = 0; i < n; ++i) {
    for (const Neighbor& nb : g.neighbors(i)) {
      if (nb.node <= i) continue;
      const double t = sparse_scale * nb.weight * term(x[i] - x[nb.node]);
      grad[i] += t;
      grad[nb.node] -= t;
    }
  }
  if (ops) {
    ops->pair_terms += full_gradient_cost(n);
    ++ops->full_gradients;
  }
  return grad;
}

Vector gradient_incremental_scaled(const Graph& g, std::span<const double> x_old,
                                   std::span<const double> grad_old,
                                   std::span<const double> x_new,
                                   std::span<const Index> changed, double p, double sign,
                                   OpCounter* ops) {
  const Index n = g.num_nodes();
  require_len(g, x_old.size());
  require_len(g, grad_old.size());
  require_len(g, x_new.size());

  std::vector<std::uint8_t> in_w(static_cast<std::size_t>(n), 0);
  for (Index i : changed) {
    if (i < 0 || i >= n) throw std::invalid_argument("working-set index out of range");
    if (in_w[i]) throw std::invalid_argument("duplicate working-set index");
    in_w[i] = 1;
  }
  for (Index h = 0; h < n; ++h) {
    if (!in_w[h] && x_new[h] != x_old[h]) {
      throw std::invalid_argument("point changed outside the working set");
    }
  }

  const auto& d = g.degrees();
  const double dense_scale = sign * p / g.volume();
  const double sparse_scale = -sign * p;
  SignedPow term_new(p);
  SignedPow term_old(p);
  SignedPow term_w(p);

  Vector grad(grad_old.begin(), grad_old.end());
  for (Index i : changed) grad[i] = 0.0;

  // Pairs with exactly one endpoint in W: rho_i(x_new) for i in W and the
  // phi_h(x_new) - phi_h(x_old) correction for h outside W.
  for (Index i : changed) {
    const double di = d[i] * dense_scale;
    const double xi_new = x_new[i];
    const double xi_old = x_old[i];
    double acc = 0.0;
    if (di != 0.0) {
      for (Index h = 0; h < n; ++h) {
        if (in_w[h]) continue;
        const double c = di * d[h];
        const double tn = c * term_new(xi_new - x_new[h]);
        const double to = c * term_old(xi_old - x_old[h]);
        acc += tn;
        grad[h] -= tn - to;
      }
    }
    grad[i] += acc;
  }

  // Pairs inside W.
  for (std::size_t a = 0; a < changed.size(); ++a) {
    const Index i = changed[a];
    const double di = d[i] * dense_scale;
    if (di == 0.0) continue;
    for (std::size_t b = a + 1; b < changed.size(); ++b) {
      const Index j = changed[b];
      const double t = di * d[j] * term_w(x_new[i] - x_new[j]);
      grad[i] += t;
      grad[j] -= t;
    }
  }

  // Adjacency part of M, restricted to edges touching W.
  for (Index i : changed) {
    for (const Neighbor& nb : g.neighbors(i)) {
      const Index j = nb.node;
      if (j == i) continue;
      const double c = sparse_scale * nb.weight;
      if (in_w[j]) {
        if (j < i) continue;
        const double t = c * term_w(x_new[i] - x_new[j]);
        grad[i] += t;
        grad[j] -= t;
      } else {
        const double tn = c * term_new(x_new[i] - x_new[j]);
        const double to = c * term_old(x_old[i] - x_old[j]);
        grad[i] += tn;
        grad[j] -= tn - to;
      }
    }
  }

  if (ops) {
    ops->pair_terms += incremental_gradient_cost(n, static_cast<Index>(changed.size()));
    ++ops->incremental_gradients;
  }
  return grad;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double tv_graph(const Graph& g, std::span<const double> x) {
  require_len(g, x.size());
  double s = 0.0;
  for (Index i = 0; i < g.num_nodes(); ++i) {
    for (const Neighbor& nb : g.neighbors(i)) {
      if (nb.node > i) s += nb.weight * std::abs(x[i] - x[nb.node]);
    }
  }
  return s;
}

double tv_q(const Graph& g, std::span<const double> x) {
  require_len(g, x.size());
  const auto order = ascending_order(x);
  const auto& d = g.degrees();
  // sum_{i<j} d_i d_j |x_i - x_j| with x visited in ascending order.
  double dense = 0.0;
  double deg_before = 0.0;
  double weighted_before = 0.0;
  for (Index k : order) {
    dense += d[k] * (x[k] * deg_before - weighted_before);
    deg_before += d[k];
    weighted_before += d[k] * x[k];
  }
  return dense / g.volume() - tv_graph(g, x);
}

double tv_q_p(const Graph& g, std::span<const double> x, double p) {
  require_p(p);
  require_len(g, x.size());
  const Index n = g.num_nodes();
  const auto& d = g.degrees();
  AbsPow pow_p(p);
  double dense = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (d[i] == 0.0) continue;
    double row = 0.0;
    for (Index j = i + 1; j < n; ++j) row += d[j] * pow_p(x[i] - x[j]);
    dense += d[i] * row;
  }
  double sparse = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (const Neighbor& nb : g.neighbors(i)) {
      if (nb.node > i) sparse += nb.weight * pow_p(x[i] - x[nb.node]);
    }
  }
  return dense / g.volume() - sparse;
}

Vector grad_full(const Graph& g, std::span<const double> x, double p, OpCounter* ops) {
  require_p(p);
  return gradient_full_scaled(g, x, p, 1.0, ops);
}

Vector grad_incremental(const Graph& g, std::span<const double> x_old,
                        std::span<const double> grad_old, std::span<const double> x_new,
                        std::span<const Index> changed, double p, OpCounter* ops) {
  require_p(p);
  return gradient_incremental_scaled(g, x_old, grad_old, x_new, changed, p, 1.0, ops);
}

double obj_from_grad(std::span<const double> grad, std::span<const double> x, double p) {
  if (grad.size() != x.size()) throw std::invalid_argument("vector length mismatch");
  return dot(grad, x) / p;
}

std::uint64_t full_gradient_cost(Index n) {
  const auto nn = static_cast<std::uint64_t>(n);
  return nn * (nn - (nn > 0 ? 1 : 0)) / 2;
}

std::uint64_t incremental_gradient_cost(Index n, Index changed) {
  const auto w = static_cast<std::uint64_t>(changed);
  const auto nn = static_cast<std::uint64_t>(n);
  return w * (w - (w > 0 ? 1 : 0)) / 2 + 2 * w * (nn - w);
}

bool prefer_incremental(Index n, Index changed) {
  return 3 * static_cast<std::int64_t>(changed) < static_cast<std::int64_t>(n) - 1;
}

Objective::Objective(const Graph& g, double p) : graph_(&g), p_(p) { require_p(p); }

double Objective::value(std::span<const double> x) const { return -tv_q_p(*graph_, x, p_); }

Vector Objective::gradient(std::span<const double> x, OpCounter* ops) const {
  return gradient_full_scaled(*graph_, x, p_, -1.0, ops);
}

Vector Objective::gradient_update(std::span<const double> x_old, std::span<const double> grad_old,
                                  std::span<const double> x_new,
                                  std::span<const Index> changed, OpCounter* ops) const {
  return gradient_incremental_scaled(*graph_, x_old, grad_old, x_new, changed, p_, -1.0, ops);
}

double Objective::value_from_gradient(std::span<const double> grad,
                                      std::span<const double> x) const {
  return obj_from_grad(grad, x, p_);
}

GradientCache::GradientCache(const Objective& objective, GradientCacheOptions options)
    : objective_(&objective), options_(options) {}

void GradientCache::reset(std::span<const double> x) {
  x_.assign(x.begin(), x.end());
  grad_ = objective_->gradient(x_, &ops_);
  valid_ = true;
  since_refresh_ = 0;
}

void GradientCache::restore(Vector x, Vector grad) {
  if (x.size() != grad.size()) throw std::invalid_argument("vector length mismatch");
  x_ = std::move(x);
  grad_ = std::move(grad);
  valid_ = true;
}

Vector GradientCache::gradient_at(std::span<const double> x_new, std::span<const Index> changed) {
  if (!valid_) throw std::logic_error("gradient cache used before initialization");
  const Index n = objective_->graph().num_nodes();
  if (!prefer_incremental(n, static_cast<Index>(changed.size()))) {
    since_refresh_ = 0;
    return objective_->gradient(x_new, &ops_);
  }
  Vector inc = objective_->gradient_update(x_, grad_, x_new, changed, &ops_);
  if (++since_refresh_ < options_.refresh_period) return inc;

  since_refresh_ = 0;
  Vector full = objective_->gradient(x_new, &ops_);
  double scale = 0.0;
  double diff = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    scale = std::max(scale, std::abs(full[i]));
    diff = std::max(diff, std::abs(full[i] - inc[i]));
  }
  const double drift = scale > 0.0 ? diff / scale : diff;
  ++audits_;
  max_drift_ = std::max(max_drift_, drift);
  if (drift > options_.drift_tolerance) ++audit_failures_;
  return full;
}

}  // namespace modtv
