#include "modtv/graph_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

namespace modtv {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

long long parse_id(std::string_view tok, std::size_t line) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "invalid node id '" + std::string(tok) + "'");
  }
  if (v < 0) throw ParseError(line, "negative node id");
  return v;
}

double parse_weight(std::string_view tok, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "invalid weight '" + std::string(tok) + "'");
  }
  if (v < 0.0) throw ParseError(line, "negative weight");
  return v;
}

struct RawEdge {
  long long u;
  long long v;
  double w;
  std::size_t line;
};

Graph build(std::vector<RawEdge>& raw, long long base, long long num_nodes) {
  if (num_nodes > std::numeric_limits<Index>::max()) throw GraphError("too many nodes");
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const RawEdge& e : raw) {
    if (e.u < base || e.v < base) throw ParseError(e.line, "node id below index base");
    edges.push_back({static_cast<Index>(e.u - base), static_cast<Index>(e.v - base), e.w});
  }
  if (num_nodes == 0) throw GraphError("empty graph");
  return Graph::from_edges(static_cast<Index>(num_nodes), edges);
}

}  // namespace

Graph read_edge_list(std::istream& in, Indexing indexing) {
  std::vector<RawEdge> raw;
  std::string buf;
  std::size_t line = 0;
  long long max_id = -1;
  bool saw_zero = false;
  while (std::getline(in, buf)) {
    ++line;
    std::string_view s = trim(buf);
    if (s.empty() || s.front() == '#' || s.front() == '%') continue;
    auto tok = split_ws(s);
    if (tok.size() < 2 || tok.size() > 3) {
      throw ParseError(line, "expected 'u v [w]', got " + std::to_string(tok.size()) + " fields");
    }
    RawEdge e{parse_id(tok[0], line), parse_id(tok[1], line), 1.0, line};
    if (tok.size() == 3) e.w = parse_weight(tok[2], line);
    saw_zero = saw_zero || e.u == 0 || e.v == 0;
    max_id = std::max({max_id, e.u, e.v});
    raw.push_back(e);
  }
  if (raw.empty()) throw GraphError("edge list contains no edges");

  long long base = 0;
  switch (indexing) {
    case Indexing::kZeroBased: base = 0; break;
    case Indexing::kOneBased: base = 1; break;
    case Indexing::kAuto: base = saw_zero ? 0 : 1; break;
  }
  return build(raw, base, max_id - base + 1);
}

Graph read_matrix_market(std::istream& in) {
  std::string buf;
  std::size_t line = 0;
  if (!std::getline(in, buf)) throw ParseError(0, "empty Matrix Market input");
  ++line;
  std::string header = buf;
  std::transform(header.begin(), header.end(), header.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  auto head = split_ws(header);
  if (head.size() < 5 || head[0] != "%%matrixmarket" || head[1] != "matrix") {
    throw ParseError(line, "missing %%MatrixMarket matrix header");
  }
  if (head[2] != "coordinate") throw ParseError(line, "only coordinate format is supported");
  const bool pattern = head[3] == "pattern";
  if (!pattern && head[3] != "real" && head[3] != "integer") {
    throw ParseError(line, "unsupported field '" + std::string(head[3]) + "'");
  }
  if (head[4] != "symmetric" && head[4] != "general") {
    throw ParseError(line, "unsupported symmetry '" + std::string(head[4]) + "'");
  }

  long long rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, buf)) {
    ++line;
    std::string_view s = trim(buf);
    if (s.empty() || s.front() == '%') continue;
    auto tok = split_ws(s);
    if (tok.size() != 3) throw ParseError(line, "expected 'rows cols nnz'");
    rows = parse_id(tok[0], line);
    cols = parse_id(tok[1], line);
    nnz = parse_id(tok[2], line);
    break;
  }
  if (rows < 0) throw ParseError(line, "missing size line");
  if (rows != cols) throw ParseError(line, "adjacency matrix must be square");

  std::vector<RawEdge> raw;
  raw.reserve(static_cast<std::size_t>(nnz));
  while (std::getline(in, buf)) {
    ++line;
    std::string_view s = trim(buf);
    if (s.empty() || s.front() == '%') continue;
    auto tok = split_ws(s);
    if (tok.size() != (pattern ? 2u : 3u)) throw ParseError(line, "malformed entry");
    RawEdge e{parse_id(tok[0], line), parse_id(tok[1], line), 1.0, line};
    if (!pattern) e.w = parse_weight(tok[2], line);
    if (e.u < 1 || e.v < 1 || e.u > rows || e.v > rows) throw ParseError(line, "entry out of range");
    raw.push_back(e);
  }
  if (static_cast<long long>(raw.size()) != nnz) {
    throw ParseError(line, "expected " + std::to_string(nnz) + " entries, found " +
                               std::to_string(raw.size()));
  }
  return build(raw, 1, rows);
}

Graph load_graph(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open '" + path.string() + "'");
  GraphFormat format = options.format;
  if (format == GraphFormat::kAuto) {
    format = path.extension() == ".mtx" ? GraphFormat::kMatrixMarket : GraphFormat::kEdgeList;
  }
  if (format == GraphFormat::kMatrixMarket) return read_matrix_market(in);
  return read_edge_list(in, options.indexing);
}

GraphFormat parse_format(std::string_view name) {
  if (name == "edgelist" || name == "edge-list") return GraphFormat::kEdgeList;
  if (name == "mtx" || name == "matrix-market") return GraphFormat::kMatrixMarket;
  if (name == "auto") return GraphFormat::kAuto;
  throw std::invalid_argument("unknown graph format '" + std::string(name) + "'");
}

Indexing parse_indexing(std::string_view name) {
  if (name == "zero" || name == "zero-based" || name == "0") return Indexing::kZeroBased;
  if (name == "one" || name == "one-based" || name == "1") return Indexing::kOneBased;
  if (name == "auto") return Indexing::kAuto;
  throw std::invalid_argument("unknown indexing '" + std::string(name) + "'");
}

void write_node_set(std::ostream& out, const NodeSet& set, Index base) {
  for (Index i : set.members()) out << (i + base) << '\n';
}

}  // namespace modtv
