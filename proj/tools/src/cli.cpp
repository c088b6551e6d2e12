#include "modtv_cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "modtv/global_search.hpp"
#include "modtv/graph_io.hpp"
#include "modtv/modularity.hpp"
#include "modtv/objective.hpp"
#include "modtv/oracles.hpp"
#include "modtv/solver.hpp"
#include "modtv/spectral.hpp"
#include "modtv_cli/run_record.hpp"

namespace modtv::cli {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Options {
  std::vector<std::string> graphs;
  std::string format = "auto";
  std::string indexing = "auto";
  std::string method = "fastatvo";
  std::vector<std::string> methods{"linear", "fastatvo", "multistart", "ps"};
  std::string start = "linear";
  std::string start_file;
  double p = 1.4;
  double a = 1.0;
  double b = 1.0;
  std::uint64_t seed = 0;
  double eps = 1e-4;
  std::int64_t max_iters = 0;
  int ps_iters = 10;
  double sigma = 75.0;
  int restarts = 10;
  int seeds = 10;
  int samples = 50;
  std::string out;
  std::string community_out;
  int community_base = 0;
  std::string csv;
};

// Distinguishes failure classes so run() can map them to exit codes.
struct InputFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kMethods{"linear", "fastatvo", "multistart", "ps"};

void add_graph_flags(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "Graph file format")
      ->check(CLI::IsMember({"auto", "edgelist", "mtx"}))
      ->capture_default_str();
  sub->add_option("--indexing", o.indexing, "Node id base of edge lists")
      ->check(CLI::IsMember({"auto", "zero", "one"}))
      ->capture_default_str();
}

void add_solver_flags(CLI::App* sub, Options& o) {
  sub->add_option("--start", o.start, "Starting point")
      ->check(CLI::IsMember({"linear", "random", "file"}))
      ->capture_default_str();
  sub->add_option("--start-file", o.start_file, "Start vector, one value per line (--start file)");
  sub->add_option("--p", o.p, "Exponent of the smoothed objective")->capture_default_str();
  sub->add_option("--a", o.a, "Box lower bound is -a")->capture_default_str();
  sub->add_option("--b", o.b, "Box upper bound is b")->capture_default_str();
  sub->add_option("--seed", o.seed, "Base random seed")->capture_default_str();
  sub->add_option("--eps", o.eps, "Stationarity tolerance")->capture_default_str();
  sub->add_option("--max-iters", o.max_iters, "Solver iteration limit (0 = automatic)")
      ->capture_default_str();
  sub->add_option("--ps-iters", o.ps_iters, "Partition & Swap outer iterations")
      ->capture_default_str();
  sub->add_option("--sigma", o.sigma, "Swap percentage")->capture_default_str();
  sub->add_option("--restarts", o.restarts, "Multistart runs")->capture_default_str();
}

BoxSpec box_of(const Options& o) { return {o.a, o.b}; }

SolverParams solver_params(const Options& o, std::uint64_t seed) {
  SolverParams sp;
  sp.p = o.p;
  sp.eps_stat = o.eps;
  sp.max_iters = o.max_iters;
  sp.seed = seed;
  return sp;
}

GlobalParams global_params(const Options& o, std::uint64_t seed) {
  GlobalParams gp;
  gp.sigma = o.sigma;
  gp.ps_iters = o.ps_iters;
  gp.restarts = o.restarts;
  gp.seed = seed;
  return gp;
}

void validate(const Options& o) {
  box_of(o).validate();
  solver_params(o, o.seed).validate();
  global_params(o, o.seed).validate();
  if (o.start == "file" && o.start_file.empty()) {
    throw std::invalid_argument("--start file needs --start-file");
  }
  if (o.seeds < 1) throw std::invalid_argument("--seeds must be >= 1");
  if (o.samples < 1) throw std::invalid_argument("--samples must be >= 1");
  if (o.community_base != 0 && o.community_base != 1) {
    throw std::invalid_argument("--community-base must be 0 or 1");
  }
}

Graph load(const Options& o, const std::string& path, double& load_ms) {
  const auto start = Clock::now();
  try {
    Graph g = load_graph(path, {parse_format(o.format), parse_indexing(o.indexing)});
    load_ms = ms_since(start);
    return g;
  } catch (const GraphError& e) {
    throw InputFailure(path + ": " + e.what());
  }
}

Vector read_start_file(const std::string& path, Index n) {
  std::ifstream in(path);
  if (!in) throw InputFailure("cannot open start file '" + path + "'");
  Vector x;
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      x.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw InputFailure(path + ": bad number '" + token + "'");
    }
  }
  if (static_cast<Index>(x.size()) != n) {
    throw InputFailure(path + ": expected " + std::to_string(n) + " values, got " +
                       std::to_string(x.size()));
  }
  return x;
}

Vector start_vector(const Graph& g, const Options& o, std::uint64_t seed) {
  if (o.start == "file") return read_start_file(o.start_file, g.num_nodes());
  if (o.start == "random") {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-o.a, o.b);
    Vector x(static_cast<std::size_t>(g.num_nodes()));
    for (double& v : x) v = u(rng);
    return x;
  }
  PowerIterParams pp;
  pp.seed = seed;
  return leading_eigenvector(g, pp).vector;
}

struct Run {
  RunRecord record;
  NodeSet community;
};

void fill_from_module(RunRecord& r, const ModuleResult& m) {
  r.q = m.q_value;
  r.community_size = m.community.size();
  r.tv_q_final = m.tv_final;
  r.tv_p_init = m.tv_p_init;
  r.tv_p_final = m.tv_p_final;
  r.stationarity = m.stationarity;
  r.converged = m.telemetry.converged;
  r.iters = m.iters;
  r.fevals = m.fevals;
  r.gevals = m.gevals;
}

Run run_method(const Graph& g, const std::string& dataset, const std::string& method,
               const Options& o, std::uint64_t seed, double load_ms) {
  Run run;
  RunRecord& r = run.record;
  r.dataset = dataset;
  r.n = g.num_nodes();
  r.m = static_cast<std::int64_t>(g.num_edges());
  r.method = method;
  r.seed = seed;
  r.params = {method == "multistart" || method == "linear" ? "-" : o.start,
              o.p, o.a, o.b, o.eps, o.max_iters, o.ps_iters, o.sigma, o.restarts};
  r.load_time_ms = load_ms;

  const auto start = Clock::now();
  const BoxSpec box = box_of(o);
  if (method == "linear") {
    PowerIterParams pp;
    pp.seed = seed;
    EigenResult eig = leading_eigenvector(g, pp);
    SweepResult sweep = threshold_sweep(g, eig.vector);
    r.q = sweep.q;
    r.community_size = sweep.community.size();
    r.tv_q_final = tv_q(g, eig.vector);
    r.converged = eig.converged;
    r.iters = eig.iterations;
    run.community = std::move(sweep.community);
  } else if (method == "fastatvo") {
    ModuleResult m = fast_atvo(g, start_vector(g, o, seed), box, solver_params(o, seed));
    fill_from_module(r, m);
    run.community = std::move(m.community);
  } else if (method == "ps") {
    GlobalResult gr = partition_and_swap(g, start_vector(g, o, seed), box, solver_params(o, seed),
                                         global_params(o, seed));
    fill_from_module(r, gr.best);
    r.iters = gr.total_iters;
    r.fevals = gr.total_fevals;
    r.gevals = gr.total_gevals;
    run.community = std::move(gr.best.community);
  } else {
    GlobalResult gr = multistart(g, box, solver_params(o, seed), global_params(o, seed));
    fill_from_module(r, gr.best);
    r.iters = gr.total_iters;
    r.fevals = gr.total_fevals;
    r.gevals = gr.total_gevals;
    run.community = std::move(gr.best.community);
  }
  r.wall_time_ms = ms_since(start);
  r.community_fraction = r.n ? static_cast<double>(r.community_size) / r.n : 0.0;
  return run;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw InputFailure("cannot write '" + path + "'");
  f << text;
}

void emit_json(const nlohmann::json& j, const Options& o, std::ostream& out) {
  if (o.out.empty()) {
    out << j.dump(2) << '\n';
  } else {
    write_text(o.out, j.dump(2) + "\n");
  }
}

std::string summary_line(const RunRecord& r) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << r.method << "  Q = " << r.q << "  size = "
    << r.community_size << " (" << std::setprecision(0) << 100.0 * r.community_fraction << "%)"
    << std::setprecision(1) << "  time = " << r.wall_time_ms << " ms";
  return s.str();
}

int cmd_solve(const Options& o, std::ostream& out) {
  double load_ms = 0.0;
  const std::string& path = o.graphs.front();
  Graph g = load(o, path, load_ms);
  Run run = run_method(g, path, o.method, o, o.seed, load_ms);
  emit_json(to_json(run.record), o, out);
  if (!o.out.empty()) out << summary_line(run.record) << '\n';
  if (!o.community_out.empty()) {
    std::ostringstream s;
    write_node_set(s, run.community, o.community_base);
    write_text(o.community_out, s.str());
  }
  if (!o.csv.empty()) write_text(o.csv, csv_header() + "\n" + csv_row(run.record) + "\n");
  return kOk;
}

int cmd_bench(const Options& o, std::ostream& out) {
  std::vector<RunRecord> records;
  for (const std::string& path : o.graphs) {
    double load_ms = 0.0;
    Graph g = load(o, path, load_ms);
    for (const std::string& method : o.methods) {
      for (int s = 0; s < o.seeds; ++s) {
        records.push_back(run_method(g, path, method, o, o.seed + s, load_ms).record);
      }
    }
  }
  const std::vector<Aggregate> aggs = aggregate(records);
  nlohmann::json j = {{"schema_version", kSchemaVersion},
                      {"runs", nlohmann::json::array()},
                      {"summary", nlohmann::json::array()}};
  for (const RunRecord& r : records) j["runs"].push_back(to_json(r));
  for (const Aggregate& a : aggs) j["summary"].push_back(to_json(a));
  emit_json(j, o, out);

  if (!o.out.empty()) {
    char line[256];
    std::snprintf(line, sizeof line, "%-12s %-30s %10s %10s %12s %12s\n", "method", "dataset",
                  "Q mean", "Q std", "size mean", "size std");
    out << line;
    for (const Aggregate& a : aggs) {
      std::snprintf(line, sizeof line, "%-12s %-30s %10.4f %10.4f %12.1f %12.1f\n",
                    a.method.c_str(), a.dataset.c_str(), a.q_mean, a.q_std, a.size_mean,
                    a.size_std);
      out << line;
    }
  }
  if (!o.csv.empty()) {
    std::string text = aggregate_csv_header() + "\n";
    for (const Aggregate& a : aggs) text += aggregate_csv_row(a) + "\n";
    write_text(o.csv, text);
  }
  return kOk;
}

struct Check {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed() const { return max_error <= tolerance; }
};

int cmd_oracle(const Options& o, std::ostream& out) {
  double load_ms = 0.0;
  const std::string& path = o.graphs.front();
  Graph g = load(o, path, load_ms);
  if (g.num_nodes() > oracle::kMaxEnumerationNodes) {
    throw std::invalid_argument("oracle needs n <= " +
                                std::to_string(oracle::kMaxEnumerationNodes));
  }
  const Index n = g.num_nodes();
  const BoxSpec box = box_of(o);
  Rng rng(o.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto random_x = [&] {
    Vector x(static_cast<std::size_t>(n));
    for (double& v : x) v = u(rng);
    return x;
  };

  std::vector<Check> checks;
  const SweepResult best = oracle::brute_force_max_modularity(g);

  Check vertex{"vertex_max_identity", 0.0, 1e-9};
  for (const BoxSpec& bx : {BoxSpec{1.0, 1.0}, box}) {
    try {
      const oracle::VertexMax vm = oracle::vertex_max_tv(g, bx);
      vertex.max_error = std::max(vertex.max_error,
                                  std::abs(vm.value - g.volume() * (bx.a + bx.b) * best.q));
    } catch (const std::logic_error&) {
      vertex.max_error = std::numeric_limits<double>::infinity();
    }
  }
  checks.push_back(vertex);

  Check cut{"cut_extension", 0.0, 1e-10};
  Check mod{"modularity_extension", 0.0, 1e-10};
  Check two{"two_valued", 0.0, 1e-10};
  std::uniform_real_distribution<double> level(-3.0, 3.0);
  std::bernoulli_distribution coin(0.5);
  for (int s = 0; s < o.samples; ++s) {
    const Vector x = random_x();
    cut.max_error = std::max(cut.max_error,
                             std::abs(oracle::lovasz_extension(oracle::cut_function(g), x) -
                                      oracle::tv_graph_naive(g, x)));
    mod.max_error = std::max(
        mod.max_error,
        std::abs(g.volume() * oracle::lovasz_extension(oracle::modularity_function(g), x) -
                 tv_q(g, x)));
    NodeSet set(n);
    for (Index i = 0; i < n; ++i) {
      if (coin(rng)) set.insert(i);
    }
    const double lo = level(rng), hi = level(rng);
    two.max_error = std::max(two.max_error,
                             std::abs(tv_q(g, set.indicator(hi, lo)) -
                                      g.volume() * std::abs(hi - lo) * modularity(g, set)));
  }
  checks.push_back(cut);
  checks.push_back(mod);
  checks.push_back(two);

  Check grad{"gradient_finite_difference", 0.0, 1e-5};
  for (int s = 0; s < std::min(o.samples, 20); ++s) {
    // evenly spaced values in random order keep central differences valid
    Vector x(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) x[i] = -1.0 + 2.0 * i / std::max<Index>(1, n - 1) + 0.01 * u(rng);
    std::shuffle(x.begin(), x.end(), rng);
    const Vector fd = oracle::finite_diff_gradient(g, x, o.p, 1e-6);
    const Vector an = grad_full(g, x, o.p);
    double scale = 0.0, diff = 0.0;
    for (Index i = 0; i < n; ++i) {
      scale = std::max(scale, std::abs(fd[i]));
      diff = std::max(diff, std::abs(an[i] - fd[i]));
    }
    grad.max_error = std::max(grad.max_error, diff / std::max(scale, 1e-300));
  }
  checks.push_back(grad);

  const GlobalResult ps = partition_and_swap(g, start_vector(g, o, o.seed), box,
                                             solver_params(o, o.seed), global_params(o, o.seed));

  bool all = true;
  nlohmann::json j = {{"schema_version", kSchemaVersion},
                      {"dataset", path},
                      {"n", n},
                      {"m", g.num_edges()},
                      {"max_q", best.q},
                      {"max_q_size", best.community.size()},
                      {"ps_q", ps.best.q_value},
                      {"ps_optimal", std::abs(ps.best.q_value - best.q) <= 1e-9},
                      {"checks", nlohmann::json::array()}};
  for (const Check& c : checks) {
    all = all && c.passed();
    j["checks"].push_back({{"name", c.name},
                           {"max_error", c.max_error},
                           {"tolerance", c.tolerance},
                           {"passed", c.passed()}});
  }
  j["passed"] = all;
  emit_json(j, o, out);
  if (!o.out.empty()) {
    for (const Check& c : checks) {
      out << (c.passed() ? "ok    " : "FAIL  ") << c.name << "  max error " << c.max_error << '\n';
    }
  }
  return all ? kOk : kOracleFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Leading-module detection by modularity total variation"};
  app.name("modtv");
  app.require_subcommand(1, 1);

  std::string graph;
  CLI::App* solve = app.add_subcommand("solve", "Run one method on one graph");
  solve->add_option("--graph", graph, "Graph file")->required();
  add_graph_flags(solve, o);
  solve->add_option("--method", o.method, "Method")
      ->check(CLI::IsMember(kMethods))
      ->capture_default_str();
  add_solver_flags(solve, o);
  solve->add_option("--out", o.out, "Write JSON here instead of stdout");
  solve->add_option("--community-out", o.community_out, "Write community node ids here");
  solve->add_option("--community-base", o.community_base, "Id base for --community-out")
      ->capture_default_str();
  solve->add_option("--csv", o.csv, "Write a CSV row here");

  CLI::App* bench = app.add_subcommand("bench", "Methods x graphs x seeds with mean/std");
  bench->add_option("--graph", o.graphs, "Graph files")->required();
  add_graph_flags(bench, o);
  bench->add_option("--methods", o.methods, "Methods to compare")
      ->check(CLI::IsMember(kMethods))
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--seeds", o.seeds, "Seeds per cell (seed, seed+1, ...)")
      ->capture_default_str();
  add_solver_flags(bench, o);
  bench->add_option("--out", o.out, "Write JSON here instead of stdout");
  bench->add_option("--csv", o.csv, "Write the summary table as CSV here");

  CLI::App* orc = app.add_subcommand("oracle", "Verify identities on a small graph (n <= 20)");
  orc->add_option("--graph", graph, "Graph file")->required();
  add_graph_flags(orc, o);
  add_solver_flags(orc, o);
  orc->add_option("--samples", o.samples, "Random points per identity")->capture_default_str();
  orc->add_option("--out", o.out, "Write JSON here instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (!graph.empty()) o.graphs = {graph};

  try {
    validate(o);
  } catch (const std::invalid_argument& e) {
    err << "modtv: invalid parameter: " << e.what() << '\n';
    return kInvalid;
  }

  try {
    if (solve->parsed()) return cmd_solve(o, out);
    if (bench->parsed()) return cmd_bench(o, out);
    return cmd_oracle(o, out);
  } catch (const InputFailure& e) {
    err << "modtv: " << e.what() << '\n';
    return kInput;
  } catch (const std::invalid_argument& e) {
    err << "modtv: invalid parameter: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    err << "modtv: run aborted: " << e.what() << '\n';
    return kSolverAbort;
  }
}

}  // namespace modtv::cli
