#include "modtv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace modtv {

void PowerIterParams::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("power iteration tolerance must be > 0");
  if (max_iters < 1) throw std::invalid_argument("power iteration max_iters must be >= 1");
  if (!(shift >= 0.0)) throw std::invalid_argument("shift must be >= 0");
}

Vector modularity_matvec(const Graph& g, std::span<const double> v) {
  if (static_cast<Index>(v.size()) != g.num_nodes()) {
    throw std::invalid_argument("vector length mismatch");
  }
  const auto& d = g.degrees();
  double dv = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) dv += d[i] * v[i];
  const double scale = dv / g.volume();
  Vector out(v.size());
  for (Index i = 0; i < g.num_nodes(); ++i) {
    double s = 0.0;
    for (const Neighbor& nb : g.neighbors(i)) s += nb.weight * v[nb.node];
    out[i] = s - d[i] * scale;
  }
  return out;
}

namespace {

double inf_norm(const Vector& v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

void normalize_sign(Vector& v) {
  const double m = inf_norm(v);
  if (m == 0.0) return;
  double sign = 1.0;
  for (double e : v) {
    if (e != 0.0) {
      sign = e > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  for (double& e : v) e *= sign / m;
}

}  // namespace

EigenResult leading_eigenvector(const Graph& g, const PowerIterParams& params) {
  params.validate();
  const Index n = g.num_nodes();
  if (n < 2) throw std::invalid_argument("leading eigenvector needs at least two nodes");
  const auto& d = g.degrees();

  // lambda_min(B) >= lambda_min(A) - ||d||^2 / vol >= -(d_max + ||d||^2 / vol),
  // so this shift makes B + cI positive semidefinite.
  double shift = params.shift;
  if (shift == 0.0) {
    double dd = 0.0;
    for (double di : d) dd += di * di;
    shift = g.max_degree() + dd / g.volume();
  }

  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> gauss;
  Vector x(static_cast<std::size_t>(n));
  for (double& e : x) e = gauss(rng);
  double mean = 0.0;
  for (double e : x) mean += e;
  mean /= n;
  for (double& e : x) e -= mean;
  normalize_sign(x);

  EigenResult best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= params.max_iters; ++it) {
    const Vector bx = modularity_matvec(g, x);
    double num = 0.0, den = 0.0;
    for (Index i = 0; i < n; ++i) {
      num += x[i] * bx[i];
      den += x[i] * x[i];
    }
    const double lambda = num / den;
    double res = 0.0;
    for (Index i = 0; i < n; ++i) res = std::max(res, std::abs(bx[i] - lambda * x[i]));
    // x is normalized to unit inf-norm, so res is already relative to ||x||.
    if (res < best.residual) {
      best.vector = x;
      best.value = lambda;
      best.residual = res;
      best.iterations = it;
    }
    if (res <= params.tol * std::abs(lambda)) {
      best.converged = true;
      break;
    }
    Vector next(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) next[i] = bx[i] + shift * x[i];
    if (inf_norm(next) == 0.0) break;
    normalize_sign(next);
    x = std::move(next);
  }
  return best;
}

}  // namespace modtv
