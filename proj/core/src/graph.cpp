#include "modtv/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace modtv {

Graph Graph::from_edges(Index num_nodes, std::span<const Edge> edges) {
  if (num_nodes < 0) throw GraphError("negative node count");

  struct Arc {
    Index from;
    Index to;
    double w;
  };
  std::vector<Arc> arcs;
  arcs.reserve(2 * edges.size());
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= num_nodes || e.v < 0 || e.v >= num_nodes) {
      throw GraphError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                       ") out of range for " + std::to_string(num_nodes) + " nodes");
    }
    if (!std::isfinite(e.weight)) throw GraphError("non-finite edge weight");
    if (e.weight < 0.0) {
      throw GraphError("negative weight on edge (" + std::to_string(e.u) + ", " +
                       std::to_string(e.v) + ")");
    }
    if (e.weight == 0.0) continue;
    arcs.push_back({e.u, e.v, e.weight});
    if (e.u != e.v) arcs.push_back({e.v, e.u, e.weight});
  }
  std::sort(arcs.begin(), arcs.end(), [](const Arc& l, const Arc& r) {
    return l.from != r.from ? l.from < r.from : l.to < r.to;
  });

  Graph g;
  g.offsets_.assign(static_cast<std::size_t>(num_nodes) + 1, 0);
  g.degrees_.assign(static_cast<std::size_t>(num_nodes), 0.0);
  for (std::size_t k = 0; k < arcs.size();) {
    std::size_t next = k;
    double w = 0.0;
    while (next < arcs.size() && arcs[next].from == arcs[k].from && arcs[next].to == arcs[k].to) {
      w += arcs[next].w;
      ++next;
    }
    g.adjacency_.push_back({arcs[k].to, w});
    ++g.offsets_[arcs[k].from + 1];
    g.degrees_[arcs[k].from] += w;
    if (arcs[k].from <= arcs[k].to) ++g.num_edges_;
    k = next;
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());

  g.volume_ = std::accumulate(g.degrees_.begin(), g.degrees_.end(), 0.0);
  if (!(g.volume_ > 0.0)) throw GraphError("graph has zero volume");
  g.max_degree_ = *std::max_element(g.degrees_.begin(), g.degrees_.end());
  return g;
}

double Graph::weight(Index i, Index j) const {
  auto nbrs = neighbors(i);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), j,
                             [](const Neighbor& nb, Index key) { return nb.node < key; });
  return (it != nbrs.end() && it->node == j) ? it->weight : 0.0;
}

bool Graph::check_invariants() const {
  double vol = 0.0;
  for (Index i = 0; i < num_nodes(); ++i) {
    double d = 0.0;
    Index prev = -1;
    for (const Neighbor& nb : neighbors(i)) {
      if (!(nb.weight > 0.0) || nb.node <= prev) return false;
      if (weight(nb.node, i) != nb.weight) return false;
      prev = nb.node;
      d += nb.weight;
    }
    if (std::abs(d - degrees_[i]) > 1e-12 * std::max(1.0, d)) return false;
    vol += d;
  }
  return vol > 0.0 && std::abs(vol - volume_) <= 1e-12 * vol;
}

NodeSet NodeSet::from_members(Index num_nodes, std::span<const Index> members) {
  NodeSet s(num_nodes);
  for (Index i : members) {
    if (i < 0 || i >= num_nodes) throw std::out_of_range("node id out of range");
    s.insert(i);
  }
  return s;
}

NodeSet NodeSet::from_mask(Index num_nodes, std::uint64_t mask) {
  if (num_nodes > 63) throw std::invalid_argument("mask form limited to 63 nodes");
  NodeSet s(num_nodes);
  for (Index i = 0; i < num_nodes; ++i) {
    if ((mask >> i) & 1U) s.insert(i);
  }
  return s;
}

Index NodeSet::size() const {
  return static_cast<Index>(std::count(member_.begin(), member_.end(), std::uint8_t{1}));
}

NodeSet NodeSet::complement() const {
  NodeSet c(universe_size());
  for (std::size_t i = 0; i < member_.size(); ++i) c.member_[i] = member_[i] ? 0 : 1;
  return c;
}

std::vector<Index> NodeSet::members() const {
  std::vector<Index> out;
  for (std::size_t i = 0; i < member_.size(); ++i) {
    if (member_[i]) out.push_back(static_cast<Index>(i));
  }
  return out;
}

Vector NodeSet::indicator(double inside, double outside) const {
  Vector x(member_.size());
  for (std::size_t i = 0; i < member_.size(); ++i) x[i] = member_[i] ? inside : outside;
  return x;
}

void BoxSpec::validate() const {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("box bounds must satisfy a > 0 and b > 0");
  }
}

}  // namespace modtv
