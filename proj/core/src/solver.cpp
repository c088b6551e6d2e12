#include "modtv/solver.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <deque>
#include <string>

#include "modtv/modularity.hpp"

namespace modtv {

void SolverParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (!(p > 1.0) || !std::isfinite(p)) fail("p must be > 1");
  if (function_control_period < 1) fail("function control period Z must be >= 1");
  if (reference_memory < 0) fail("reference memory M must be >= 0");
  if (!(initial_radius >= 0.0)) fail("initial radius must be >= 0");
  if (!(radius_shrink > 0.0 && radius_shrink < 1.0)) fail("radius shrink beta must be in (0,1)");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) fail("backtrack factor must be in (0,1)");
  if (!(armijo_slope > 0.0 && armijo_slope < 1.0)) fail("Armijo gamma must be in (0,1)");
  if (!(mu_min > 0.0 && mu_min <= mu_max && std::isfinite(mu_max))) {
    fail("need 0 < mu_min <= mu_max < inf");
  }
  if (ws_start < 1) fail("working-set start size must be >= 1");
  if (ws_cap < 0) fail("working-set cap must be >= 0");
  if (!(eps_stat >= 0.0)) fail("stationarity tolerance must be >= 0");
  if (max_iters < 0) fail("max_iters must be >= 0");
  if (max_ls_steps < 1) fail("max_ls_steps must be >= 1");
  if (gradient_cache.refresh_period < 1) fail("gradient refresh period must be >= 1");
}

Index SolverParams::working_set_cap(Index n) const {
  if (ws_cap > 0) return ws_cap;
  const auto scaled = static_cast<Index>(std::floor(0.03 * n));
  return std::max<Index>(10, std::min<Index>(1000, scaled));
}

std::int64_t SolverParams::iteration_limit(Index n) const {
  if (max_iters > 0) return max_iters;
  return std::min<std::int64_t>(10 * std::int64_t{n}, 1'000'000);
}

Vector project(std::span<const double> x, const BoxSpec& box) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::clamp(x[i], box.lower(), box.upper());
  return out;
}

Vector initialize(std::span<const double> x0, const BoxSpec& box) {
  Vector out(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) out[i] = x0[i] < 0.0 ? box.lower() : box.upper();
  return out;
}

ActiveSets estimate_sets(std::span<const double> x, std::span<const double> grad,
                         const BoxSpec& box) {
  ActiveSets sets;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto idx = static_cast<Index>(i);
    if (x[i] == box.lower() && grad[i] > 0.0) {
      sets.lower.push_back(idx);
    } else if (x[i] == box.upper() && grad[i] < 0.0) {
      sets.upper.push_back(idx);
    } else {
      sets.free.push_back(idx);
    }
  }
  return sets;
}

namespace {

double violation(double xi, double gi, const BoxSpec& box) {
  return std::abs(xi - std::clamp(xi - gi, box.lower(), box.upper()));
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return std::sqrt(s);
}

}  // namespace

double stationarity_measure(std::span<const double> x, std::span<const double> grad,
                            const BoxSpec& box) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, violation(x[i], grad[i], box));
  return worst;
}

std::vector<Index> select_working_set(std::span<const double> x, std::span<const double> grad,
                                      const BoxSpec& box, std::span<const Index> free,
                                      Index target_size, Rng& rng) {
  if (free.empty()) throw SolverError("working set requested with an empty non-active set");
  std::size_t best = 0;
  double best_v = -1.0;
  for (std::size_t t = 0; t < free.size(); ++t) {
    const double v = violation(x[free[t]], grad[free[t]], box);
    if (v > best_v) {
      best_v = v;
      best = t;
    }
  }
  std::vector<Index> rest;
  rest.reserve(free.size() - 1);
  for (std::size_t t = 0; t < free.size(); ++t) {
    if (t != best) rest.push_back(free[t]);
  }
  const auto extra = std::min<std::size_t>(rest.size(), target_size > 1 ? target_size - 1 : 0);
  std::vector<Index> ws{free[best]};
  ws.reserve(extra + 1);
  for (std::size_t t = 0; t < extra; ++t) {
    std::uniform_int_distribution<std::size_t> pick(t, rest.size() - 1);
    std::swap(rest[t], rest[pick(rng)]);
    ws.push_back(rest[t]);
  }
  return ws;
}

double bb_coefficient(std::span<const double> x_w, std::span<const double> grad_w,
                      const std::optional<SecantPair>& secant, double mu_min, double mu_max) {
  auto fallback = [&] {
    const double gnorm = norm2(grad_w);
    if (gnorm == 0.0) return 1.0;
    return std::max(mu_min, std::min(1.0, norm2(x_w) / gnorm));
  };
  if (!secant) return fallback();
  const Vector& s = secant->s;
  const Vector& y = secant->y;
  double ss = 0.0, sy = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    ss += s[i] * s[i];
    sy += s[i] * y[i];
    yy += y[i] * y[i];
  }
  if (ss == 0.0) return fallback();
  const double mu_a = sy / ss;
  if (mu_a > 0.0 && mu_a < mu_max) return std::max(mu_min, mu_a);
  if (mu_a >= mu_max) return std::max(mu_min, std::min(mu_max, yy / sy));
  return fallback();
}

Vector direction(std::span<const double> grad, std::span<const Index> working_set, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  Vector d(grad.size(), 0.0);
  for (Index i : working_set) d[i] = -grad[i] / mu;
  return d;
}

LineSearchResult nonmonotone_linesearch(const std::function<double(const Vector&)>& f,
                                        std::span<const double> x, std::span<const double> d,
                                        double f_ref, std::span<const double> grad,
                                        const BoxSpec& box, const SolverParams& params) {
  double slope = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) slope += grad[i] * d[i];
  LineSearchResult res;
  Vector trial(x.size());
  double alpha = 1.0;
  for (int nu = 0; nu < params.max_ls_steps; ++nu) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      trial[i] = std::clamp(x[i] + alpha * d[i], box.lower(), box.upper());
    }
    const double ft = f(trial);
    ++res.steps;
    if (ft <= f_ref + params.armijo_slope * alpha * slope) {
      res.alpha = alpha;
      res.x_next = trial;
      res.f_next = ft;
      return res;
    }
    alpha *= params.backtrack_factor;
  }
  throw SolverError("line search failed after " + std::to_string(params.max_ls_steps) +
                    " reductions");
}

namespace {

class Digest {
 public:
  void add(std::span<const double> x) {
    for (double v : x) {
      auto bits = std::bit_cast<std::uint64_t>(v);
      for (int b = 0; b < 8; ++b) {
        h_ ^= (bits >> (8 * b)) & 0xffU;
        h_ *= 0x100000001b3ULL;
      }
    }
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw SolverError(std::string("non-finite ") + what);
}

struct Checkpoint {
  std::int64_t k = 0;
  Vector x;
  Vector grad;
  double f = 0.0;
  std::vector<Index> ws;
  Vector d_ws;
  bool has_direction = false;
};

class FastAtvo {
 public:
  FastAtvo(const Graph& g, const BoxSpec& box, const SolverParams& params,
           const IterationObserver& observer)
      : g_(g),
        box_(box),
        params_(params),
        observer_(observer),
        objective_(g, params.p),
        cache_(objective_, params.gradient_cache),
        rng_(params.seed) {}

  ModuleResult run(std::span<const double> x0);

 private:
  double eval_f(std::span<const double> grad, std::span<const double> x) {
    ++fevals_;
    const double v = objective_.value_from_gradient(grad, x);
    require_finite(v, "objective value");
    return v;
  }

  void push_checkpoint(double fx) {
    ckpt_ = Checkpoint{k_, x_, grad_, fx, {}, {}, false};
    history_.push_back(fx);
    while (history_.size() > static_cast<std::size_t>(params_.reference_memory) + 1) {
      history_.pop_front();
    }
    f_ref_ = *std::max_element(history_.begin(), history_.end());
    telemetry_.reference_values.push_back(f_ref_);
  }

  void move_to(Vector x, Vector grad) {
    for (double v : grad) require_finite(v, "gradient component");
    prev_x_ = std::move(x_);
    prev_grad_ = std::move(grad_);
    x_ = std::move(x);
    grad_ = std::move(grad);
    cache_.accept(x_, grad_);
    digest_.add(x_);
    ++k_;
  }

  // Armijo search from the current point along d (nonzero on ws only).
  void line_search(const std::vector<Index>& ws, const Vector& d_ws) {
    ++telemetry_.line_searches;
    Vector d(x_.size(), 0.0);
    for (std::size_t t = 0; t < ws.size(); ++t) d[ws[t]] = d_ws[t];
    Vector trial_grad;
    auto f = [&](const Vector& trial) {
      trial_grad = cache_.gradient_at(trial, ws);
      return eval_f(trial_grad, trial);
    };
    LineSearchResult ls = nonmonotone_linesearch(f, x_, d, f_ref_, grad_, box_, params_);
    telemetry_.line_search_trials += ls.steps;
    // trial_grad belongs to the last (accepted) trial.
    move_to(std::move(ls.x_next), std::move(trial_grad));
  }

  void backtrack_and_search() {
    ++telemetry_.backtracks;
    if (!ckpt_.has_direction) throw SolverError("backtrack to a checkpoint without a direction");
    x_ = ckpt_.x;
    grad_ = ckpt_.grad;
    cache_.restore(x_, grad_);
    k_ = ckpt_.k;
    line_search(ckpt_.ws, ckpt_.d_ws);
  }

  void notify(IterationEvent ev) {
    if (!observer_) return;
    ev.iteration = iterations_;
    ev.k = k_;
    ev.x = x_;
    observer_(ev);
  }

  const Graph& g_;
  BoxSpec box_;
  const SolverParams& params_;
  const IterationObserver& observer_;
  Objective objective_;
  GradientCache cache_;
  Rng rng_;

  Vector x_, grad_, prev_x_, prev_grad_;
  std::int64_t k_ = 0;
  std::int64_t iterations_ = 0;
  std::int64_t fevals_ = 0;
  double f_ref_ = 0.0;
  std::deque<double> history_;
  Checkpoint ckpt_;
  SolverTelemetry telemetry_;
  Digest digest_;
};

ModuleResult FastAtvo::run(std::span<const double> x0) {
  const auto start = std::chrono::steady_clock::now();
  const Index n = g_.num_nodes();
  if (static_cast<Index>(x0.size()) != n) throw std::invalid_argument("start vector length mismatch");

  x_ = params_.snap_start ? initialize(x0, box_) : project(x0, box_);
  cache_.reset(x_);
  grad_ = cache_.gradient();
  digest_.add(x_);

  const double f0 = eval_f(grad_, x_);
  push_checkpoint(f0);

  const Index ws_cap = std::min(params_.working_set_cap(n), n);
  Index ws_target = std::min(params_.ws_start, ws_cap);
  const std::int64_t limit = params_.iteration_limit(n);
  double radius = params_.initial_radius;
  const auto period = static_cast<std::int64_t>(params_.function_control_period);

  while (true) {
    if (stationarity_measure(x_, grad_, box_) <= params_.eps_stat) {
      // A stationary point reached by unchecked unit steps must still beat
      // the reference value; otherwise fall back to the checkpoint.
      if (k_ != ckpt_.k) {
        const double fx = eval_f(grad_, x_);
        if (fx >= f_ref_) {
          ++iterations_;
          backtrack_and_search();
          notify({.backtracked = true});
          continue;
        }
      }
      telemetry_.converged = true;
      break;
    }
    if (iterations_ >= limit) {
      if (k_ != ckpt_.k && eval_f(grad_, x_) >= f_ref_) {
        x_ = ckpt_.x;
        grad_ = ckpt_.grad;
      }
      break;
    }
    ++iterations_;
    const std::int64_t fevals_before = fevals_;

    const ActiveSets sets = estimate_sets(x_, grad_, box_);

    bool f_known = false;
    bool control = false;
    if (k_ == ckpt_.k + period) {
      control = true;
      ++telemetry_.function_controls;
      const double fx = eval_f(grad_, x_);
      if (fx >= f_ref_) {
        backtrack_and_search();
        notify({.function_control = true, .backtracked = true,
                .fevals_in_iteration = fevals_ - fevals_before});
        continue;
      }
      push_checkpoint(fx);
      f_known = true;
    }

    const std::vector<Index> ws =
        select_working_set(x_, grad_, box_, sets.free, ws_target, rng_);
    ws_target = std::min<Index>(ws_target * 2, ws_cap);

    Vector x_ws(ws.size()), g_ws(ws.size());
    for (std::size_t t = 0; t < ws.size(); ++t) {
      x_ws[t] = x_[ws[t]];
      g_ws[t] = grad_[ws[t]];
    }
    std::optional<SecantPair> secant;
    if (k_ >= 2 && !prev_x_.empty()) {
      SecantPair sp{Vector(ws.size()), Vector(ws.size())};
      for (std::size_t t = 0; t < ws.size(); ++t) {
        sp.s[t] = x_[ws[t]] - prev_x_[ws[t]];
        sp.y[t] = grad_[ws[t]] - prev_grad_[ws[t]];
      }
      secant = std::move(sp);
    }
    const double mu = bb_coefficient(x_ws, g_ws, secant, params_.mu_min, params_.mu_max);
    Vector d_ws(ws.size());
    double slope = 0.0;
    for (std::size_t t = 0; t < ws.size(); ++t) {
      d_ws[t] = -g_ws[t] / mu;
      slope += g_ws[t] * d_ws[t];
    }
    if (!(slope < 0.0)) throw SolverError("working set produced no descent");
    if (!ckpt_.has_direction) {
      ckpt_.ws = ws;
      ckpt_.d_ws = d_ws;
      ckpt_.has_direction = true;
    }

    Vector trial = x_;
    double test_norm = 0.0;
    for (std::size_t t = 0; t < ws.size(); ++t) {
      const Index i = ws[t];
      trial[i] = std::clamp(x_[i] + d_ws[t], box_.lower(), box_.upper());
    }
    if (params_.unit_step_test == UnitStepTest::kPointNorm) {
      for (double v : trial) test_norm = std::max(test_norm, std::abs(v));
    } else {
      for (Index i : ws) test_norm = std::max(test_norm, std::abs(trial[i] - x_[i]));
    }

    if (test_norm <= radius) {
      Vector g_new = cache_.gradient_at(trial, ws);
      move_to(std::move(trial), std::move(g_new));
      radius *= params_.radius_shrink;
      ++telemetry_.unit_steps;
      notify({.mu = mu, .slope = slope, .working_set_size = static_cast<Index>(ws.size()),
              .function_control = control, .unit_step = true,
              .fevals_in_iteration = fevals_ - fevals_before});
      continue;
    }

    if (!f_known) {
      const double fx = eval_f(grad_, x_);
      if (fx >= f_ref_) {
        backtrack_and_search();
        notify({.mu = mu, .slope = slope, .working_set_size = static_cast<Index>(ws.size()),
                .function_control = control, .backtracked = true,
                .fevals_in_iteration = fevals_ - fevals_before});
        continue;
      }
      push_checkpoint(fx);
      ckpt_.ws = ws;
      ckpt_.d_ws = d_ws;
      ckpt_.has_direction = true;
    }
    line_search(ws, d_ws);
    notify({.mu = mu, .slope = slope, .working_set_size = static_cast<Index>(ws.size()),
            .function_control = control, .fevals_in_iteration = fevals_ - fevals_before});
  }

  ModuleResult result;
  result.x_star = x_;
  result.stationarity = stationarity_measure(x_, grad_, box_);
  result.tv_p_init = -f0;
  result.tv_p_final = -objective_.value_from_gradient(grad_, x_);
  result.iters = iterations_;
  result.fevals = fevals_;
  const OpCounter& ops = cache_.ops();
  result.gevals = static_cast<std::int64_t>(ops.full_gradients + ops.incremental_gradients);
  result.seed = params_.seed;
  telemetry_.gradient_ops = ops;
  telemetry_.drift_audits = cache_.audits();
  telemetry_.drift_audit_failures = cache_.audit_failures();
  telemetry_.max_drift = cache_.max_drift();
  telemetry_.iterate_digest = digest_.value();
  result.telemetry = std::move(telemetry_);
  finalize_result(g_, result);
  result.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace

void finalize_result(const Graph& g, ModuleResult& result) {
  SweepResult sweep = threshold_sweep(g, result.x_star);
  result.community = std::move(sweep.community);
  result.q_value = sweep.q;
  result.tv_final = tv_q(g, result.x_star);
}

ModuleResult fast_atvo(const Graph& g, std::span<const double> x0, const BoxSpec& box,
                       const SolverParams& params, const IterationObserver& observer) {
  box.validate();
  params.validate();
  FastAtvo solver(g, box, params, observer);
  return solver.run(x0);
}

}  // namespace modtv
