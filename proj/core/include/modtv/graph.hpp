#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace modtv {

using Index = std::int32_t;
using Vector = std::vector<double>;

/// Raised for malformed graph input or inconsistent graph construction.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  Index u;
  Index v;
  double weight = 1.0;
};

struct Neighbor {
  Index node;
  double weight;
};

/// Immutable undirected weighted graph in CSR form.
///
/// Every undirected edge {u, v} with u != v is stored in both adjacency
/// lists; a self-loop {u, u} is stored once, so that d_u = sum_j A_uj counts
/// it once. Neighbor lists are sorted by node id and contain no duplicates.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph on `num_nodes` nodes. Parallel edges are merged by summing
  /// weights. Throws GraphError on out-of-range ids, negative or non-finite
  /// weights, or zero total volume.
  static Graph from_edges(Index num_nodes, std::span<const Edge> edges);

  Index num_nodes() const { return static_cast<Index>(degrees_.size()); }
  /// Number of distinct undirected edges, self-loops included.
  std::size_t num_edges() const { return num_edges_; }

  std::span<const Neighbor> neighbors(Index i) const {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }

  /// A_ij, zero when the pair is not adjacent. O(log deg(i)).
  double weight(Index i, Index j) const;

  double degree(Index i) const { return degrees_[i]; }
  const Vector& degrees() const { return degrees_; }
  double volume() const { return volume_; }
  double max_degree() const { return max_degree_; }

  /// Recomputes degrees and symmetry from the adjacency; used by tests.
  bool check_invariants() const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  Vector degrees_;
  double volume_ = 0.0;
  double max_degree_ = 0.0;
  std::size_t num_edges_ = 0;
};

/// Subset of the node set {0, ..., n-1} in indicator form.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(Index num_nodes) : member_(static_cast<std::size_t>(num_nodes), 0) {}
  static NodeSet from_members(Index num_nodes, std::span<const Index> members);
  /// Bit i of `mask` selects node i. Requires num_nodes <= 63.
  static NodeSet from_mask(Index num_nodes, std::uint64_t mask);

  Index universe_size() const { return static_cast<Index>(member_.size()); }
  bool contains(Index i) const { return member_[i] != 0; }
  void insert(Index i) { member_[i] = 1; }
  void erase(Index i) { member_[i] = 0; }
  Index size() const;
  bool empty() const { return size() == 0; }

  NodeSet complement() const;
  std::vector<Index> members() const;

  /// b on members, -a elsewhere: the box vertex b*1_S - a*1_{S^c}.
  Vector indicator(double inside, double outside) const;

  friend bool operator==(const NodeSet&, const NodeSet&) = default;

 private:
  std::vector<std::uint8_t> member_;
};

/// The feasible box [-a, b]^n.
struct BoxSpec {
  double a = 1.0;
  double b = 1.0;

  double lower() const { return -a; }
  double upper() const { return b; }
  /// Throws std::invalid_argument unless a > 0 and b > 0.
  void validate() const;
};

}  // namespace modtv
