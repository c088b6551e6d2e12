#include "modtv/modularity.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace modtv {

double modularity(const Graph& g, const NodeSet& s) {
  if (s.universe_size() != g.num_nodes()) throw std::invalid_argument("node set size mismatch");
  double inside = 0.0;
  double vol_s = 0.0;
  for (Index i = 0; i < g.num_nodes(); ++i) {
    if (!s.contains(i)) continue;
    vol_s += g.degree(i);
    for (const Neighbor& nb : g.neighbors(i)) {
      if (s.contains(nb.node)) inside += nb.weight;
    }
  }
  const double vol = g.volume();
  return (inside - vol_s * vol_s / vol) / vol;
}

std::vector<Index> ascending_order(std::span<const double> x) {
  std::vector<Index> order(x.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index l, Index r) { return x[l] < x[r]; });
  return order;
}

Vector sweep_profile(const Graph& g, std::span<const double> x) {
  const Index n = g.num_nodes();
  if (static_cast<Index>(x.size()) != n) throw std::invalid_argument("vector length mismatch");
  const auto order = ascending_order(x);
  const double vol = g.volume();

  std::vector<std::uint8_t> in_set(static_cast<std::size_t>(n), 1);
  double inside = vol;
  double vol_s = vol;
  Vector q(static_cast<std::size_t>(n));
  q[0] = 0.0;
  for (Index t = 0; t + 1 < n; ++t) {
    const Index i = order[t];
    double loss = 0.0;
    for (const Neighbor& nb : g.neighbors(i)) {
      if (nb.node == i) {
        loss += nb.weight;
      } else if (in_set[nb.node]) {
        loss += 2.0 * nb.weight;
      }
    }
    in_set[i] = 0;
    inside -= loss;
    vol_s -= g.degree(i);
    q[t + 1] = (inside - vol_s * vol_s / vol) / vol;
  }
  return q;
}

SweepResult threshold_sweep(const Graph& g, std::span<const double> x) {
  const Vector q = sweep_profile(g, x);
  std::size_t best = 0;
  for (std::size_t t = 1; t < q.size(); ++t) {
    if (q[t] >= q[best]) best = t;
  }
  const auto order = ascending_order(x);
  NodeSet community(g.num_nodes());
  for (std::size_t t = best; t < order.size(); ++t) community.insert(order[t]);
  return {std::move(community), q[best]};
}

}  // namespace modtv
