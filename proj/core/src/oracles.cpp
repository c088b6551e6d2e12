#include "modtv/oracles.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace modtv::oracle {
namespace {

// Dense row-major M_ij = d_i d_j / vol - A_ij.
std::vector<double> dense_m(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.num_nodes());
  std::vector<double> m(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m[i * n + j] = g.degree(static_cast<Index>(i)) * g.degree(static_cast<Index>(j)) / g.volume() -
                     g.weight(static_cast<Index>(i), static_cast<Index>(j));
    }
  }
  return m;
}

void require_enumerable(const Graph& g) {
  if (g.num_nodes() > kMaxEnumerationNodes) {
    throw std::invalid_argument("exhaustive enumeration limited to " +
                                std::to_string(kMaxEnumerationNodes) + " nodes");
  }
}

}  // namespace

SetFunction cut_function(const Graph& g) {
  return {g.num_nodes(), [&g](const NodeSet& s) {
            double cut = 0.0;
            for (Index i = 0; i < g.num_nodes(); ++i) {
              if (!s.contains(i)) continue;
              for (Index j = 0; j < g.num_nodes(); ++j) {
                if (!s.contains(j)) cut += g.weight(i, j);
              }
            }
            return cut;
          }};
}

SetFunction null_cut_function(const Graph& g) {
  return {g.num_nodes(), [&g](const NodeSet& s) {
            double cut = 0.0;
            for (Index i = 0; i < g.num_nodes(); ++i) {
              if (!s.contains(i)) continue;
              for (Index j = 0; j < g.num_nodes(); ++j) {
                if (!s.contains(j)) cut += g.degree(i) * g.degree(j) / g.volume();
              }
            }
            return cut;
          }};
}

SetFunction modularity_function(const Graph& g) {
  return {g.num_nodes(), [&g](const NodeSet& s) { return modularity_naive(g, s); }};
}

double lovasz_extension(const SetFunction& f, std::span<const double> x) {
  const auto n = static_cast<Index>(x.size());
  if (n != f.num_nodes) throw std::invalid_argument("vector length mismatch");
  if (n == 0) return 0.0;
  std::vector<Index> order(x.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index l, Index r) { return x[l] < x[r]; });

  NodeSet level(n);
  for (Index i = 0; i < n; ++i) level.insert(i);
  double value = f.evaluate(level) * x[order[0]];
  for (Index t = 1; t < n; ++t) {
    level.erase(order[t - 1]);
    value += f.evaluate(level) * (x[order[t]] - x[order[t - 1]]);
  }
  return value;
}

double modularity_naive(const Graph& g, const NodeSet& s) {
  const Index n = g.num_nodes();
  if (s.universe_size() != n) throw std::invalid_argument("node set size mismatch");
  double sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (!s.contains(i)) continue;
    for (Index j = 0; j < n; ++j) {
      if (s.contains(j)) sum += g.weight(i, j) - g.degree(i) * g.degree(j) / g.volume();
    }
  }
  return sum / g.volume();
}

double tv_q_naive(const Graph& g, std::span<const double> x, double p) {
  const Index n = g.num_nodes();
  if (static_cast<Index>(x.size()) != n) throw std::invalid_argument("vector length mismatch");
  double sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double m = g.degree(i) * g.degree(j) / g.volume() - g.weight(i, j);
      sum += m * std::pow(std::abs(x[i] - x[j]), p);
    }
  }
  return 0.5 * sum;
}

double tv_graph_naive(const Graph& g, std::span<const double> x) {
  const Index n = g.num_nodes();
  if (static_cast<Index>(x.size()) != n) throw std::invalid_argument("vector length mismatch");
  double sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) sum += g.weight(i, j) * std::abs(x[i] - x[j]);
  }
  return 0.5 * sum;
}

SweepResult brute_force_max_modularity(const Graph& g) {
  require_enumerable(g);
  const Index n = g.num_nodes();
  const double vol = g.volume();
  // Gray-code walk over all subsets, tracking w_in(S) and vol(S).
  std::vector<std::uint8_t> in_set(static_cast<std::size_t>(n), 0);
  double inside = 0.0;
  double vol_s = 0.0;
  double best_q = 0.0;  // the empty set
  std::uint64_t best_mask = 0;
  std::uint64_t mask = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto i = static_cast<Index>(std::countr_zero(step));
    double touch = 0.0;
    for (const Neighbor& nb : g.neighbors(i)) {
      if (nb.node == i) {
        touch += nb.weight;
      } else if (in_set[nb.node]) {
        touch += 2.0 * nb.weight;
      }
    }
    if (in_set[i]) {
      in_set[i] = 0;
      inside -= touch;
      vol_s -= g.degree(i);
    } else {
      in_set[i] = 1;
      inside += touch;
      vol_s += g.degree(i);
    }
    mask ^= std::uint64_t{1} << i;
    const double q = (inside - vol_s * vol_s / vol) / vol;
    if (q > best_q) {
      best_q = q;
      best_mask = mask;
    }
  }
  NodeSet best = NodeSet::from_mask(n, best_mask);
  const double exact = modularity_naive(g, best);
  return {std::move(best), exact};
}

VertexMax vertex_max_tv(const Graph& g, const BoxSpec& box) {
  require_enumerable(g);
  box.validate();
  const Index n = g.num_nodes();
  const auto nn = static_cast<std::size_t>(n);
  const std::vector<double> m = dense_m(g);

  VertexMax out;
  out.value = -std::numeric_limits<double>::infinity();
  std::vector<double> u(nn);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t i = 0; i < nn; ++i) u[i] = ((mask >> i) & 1U) ? box.upper() : box.lower();
    double tv = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
      for (std::size_t j = 0; j < nn; ++j) tv += m[i * nn + j] * std::abs(u[i] - u[j]);
    }
    tv *= 0.5;
    if (tv > out.value) {
      out.value = tv;
      out.argmax = NodeSet::from_mask(n, mask);
    }
  }

  out.predicted = g.volume() * (box.a + box.b) * brute_force_max_modularity(g).q;
  if (std::abs(out.value - out.predicted) > 1e-9 * std::max(1.0, std::abs(out.value))) {
    throw std::logic_error("box-vertex maximum of TV_Q disagrees with vol (a+b) max Q");
  }
  return out;
}

Vector finite_diff_gradient(const Graph& g, std::span<const double> x, double p, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("step must be positive");
  Vector sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] - sorted[i - 1] < 10.0 * h) {
      throw std::invalid_argument("components closer than 10 h; central differences invalid");
    }
  }
  Vector probe(x.begin(), x.end());
  Vector grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = tv_q_naive(g, probe, p);
    probe[i] = x[i] - h;
    const double down = tv_q_naive(g, probe, p);
    probe[i] = x[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace modtv::oracle
