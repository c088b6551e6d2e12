#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "modtv/graph.hpp"

namespace modtv {

enum class GraphFormat { kEdgeList, kMatrixMarket, kAuto };
enum class Indexing { kZeroBased, kOneBased, kAuto };

/// Parse failure carrying the 1-based line number of the offending line
/// (0 when the error is not tied to a line).
class ParseError : public GraphError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : GraphError(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct LoadOptions {
  GraphFormat format = GraphFormat::kAuto;
  Indexing indexing = Indexing::kAuto;
};

/// Edge list: one "u v [w]" per line, '#' and '%' comment lines skipped.
/// With kAuto indexing, ids are zero-based iff some id equals 0. The node
/// count is one past the largest id after rebasing.
Graph read_edge_list(std::istream& in, Indexing indexing = Indexing::kAuto);

/// Matrix Market coordinate format, `pattern` / `real` / `integer` fields,
/// `symmetric` or `general` symmetry. Each stored entry (i, j, w) adds an
/// undirected edge {i, j} of weight w.
Graph read_matrix_market(std::istream& in);

/// Dispatches on `options.format`; kAuto picks Matrix Market for `.mtx`.
Graph load_graph(const std::filesystem::path& path, const LoadOptions& options = {});

GraphFormat parse_format(std::string_view name);
Indexing parse_indexing(std::string_view name);

/// One node id per line, ascending, using the requested base.
void write_node_set(std::ostream& out, const NodeSet& set, Index base = 0);

}  // namespace modtv
