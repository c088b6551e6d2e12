#include "modtv_cli/run_record.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace modtv::cli {
namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> read_optional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : ""; }

// CSV field quoting for dataset paths.
std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void mean_std(const std::vector<double>& v, double& mean, double& stdev) {
  mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  stdev = 0.0;
  if (v.size() < 2) return;
  for (double x : v) stdev += (x - mean) * (x - mean);
  stdev = std::sqrt(stdev / static_cast<double>(v.size() - 1));
}

}  // namespace

nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json params = {
      {"start", r.params.start},         {"p", r.params.p},
      {"a", r.params.a},                 {"b", r.params.b},
      {"eps", r.params.eps},             {"max_iters", r.params.max_iters},
      {"ps_iters", r.params.ps_iters},   {"sigma", r.params.sigma},
      {"restarts", r.params.restarts},
  };
  return {
      {"schema_version", kSchemaVersion},
      {"dataset", r.dataset},
      {"n", r.n},
      {"m", r.m},
      {"method", r.method},
      {"seed", r.seed},
      {"params", params},
      {"q", r.q},
      {"community_size", r.community_size},
      {"community_fraction", r.community_fraction},
      {"tv_q_final", r.tv_q_final},
      {"tv_p_init", optional_number(r.tv_p_init)},
      {"tv_p_final", optional_number(r.tv_p_final)},
      {"stationarity", optional_number(r.stationarity)},
      {"converged", r.converged},
      {"iters", r.iters},
      {"fevals", r.fevals},
      {"gevals", r.gevals},
      {"load_time_ms", r.load_time_ms},
      {"wall_time_ms", r.wall_time_ms},
  };
}

RunRecord record_from_json(const nlohmann::json& j) {
  if (j.at("schema_version").get<int>() != kSchemaVersion) {
    throw std::invalid_argument("unsupported schema_version");
  }
  RunRecord r;
  r.dataset = j.at("dataset").get<std::string>();
  r.n = j.at("n").get<std::int64_t>();
  r.m = j.at("m").get<std::int64_t>();
  r.method = j.at("method").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  const auto& p = j.at("params");
  r.params.start = p.at("start").get<std::string>();
  r.params.p = p.at("p").get<double>();
  r.params.a = p.at("a").get<double>();
  r.params.b = p.at("b").get<double>();
  r.params.eps = p.at("eps").get<double>();
  r.params.max_iters = p.at("max_iters").get<std::int64_t>();
  r.params.ps_iters = p.at("ps_iters").get<int>();
  r.params.sigma = p.at("sigma").get<double>();
  r.params.restarts = p.at("restarts").get<int>();
  r.q = j.at("q").get<double>();
  r.community_size = j.at("community_size").get<std::int64_t>();
  r.community_fraction = j.at("community_fraction").get<double>();
  r.tv_q_final = j.at("tv_q_final").get<double>();
  r.tv_p_init = read_optional(j, "tv_p_init");
  r.tv_p_final = read_optional(j, "tv_p_final");
  r.stationarity = read_optional(j, "stationarity");
  r.converged = j.at("converged").get<bool>();
  r.iters = j.at("iters").get<std::int64_t>();
  r.fevals = j.at("fevals").get<std::int64_t>();
  r.gevals = j.at("gevals").get<std::int64_t>();
  r.load_time_ms = j.at("load_time_ms").get<double>();
  r.wall_time_ms = j.at("wall_time_ms").get<double>();
  return r;
}

std::vector<Aggregate> aggregate(const std::vector<RunRecord>& records) {
  std::vector<Aggregate> out;
  std::map<std::pair<std::string, std::string>, std::size_t> slot;
  std::vector<std::vector<const RunRecord*>> groups;
  for (const RunRecord& r : records) {
    auto [it, fresh] = slot.try_emplace({r.dataset, r.method}, groups.size());
    if (fresh) {
      groups.emplace_back();
      out.push_back({r.dataset, r.method});
    }
    groups[it->second].push_back(&r);
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<double> q, size, time;
    for (const RunRecord* r : groups[g]) {
      q.push_back(r->q);
      size.push_back(static_cast<double>(r->community_size));
      time.push_back(r->wall_time_ms);
    }
    Aggregate& a = out[g];
    a.runs = static_cast<std::int64_t>(q.size());
    double unused = 0.0;
    mean_std(q, a.q_mean, a.q_std);
    mean_std(size, a.size_mean, a.size_std);
    mean_std(time, a.time_mean_ms, unused);
  }
  return out;
}

nlohmann::json to_json(const Aggregate& a) {
  return {{"dataset", a.dataset},     {"method", a.method},       {"runs", a.runs},
          {"q_mean", a.q_mean},       {"q_std", a.q_std},         {"size_mean", a.size_mean},
          {"size_std", a.size_std},   {"time_mean_ms", a.time_mean_ms}};
}

std::string csv_header() {
  return "dataset,n,m,method,seed,q,community_size,community_fraction,tv_q_final,tv_p_init,"
         "tv_p_final,stationarity,converged,iters,fevals,gevals,load_time_ms,wall_time_ms";
}

std::string csv_row(const RunRecord& r) {
  std::ostringstream s;
  s << quoted(r.dataset) << ',' << r.n << ',' << r.m << ',' << r.method << ',' << r.seed << ','
    << num(r.q) << ',' << r.community_size << ',' << num(r.community_fraction) << ','
    << num(r.tv_q_final) << ',' << opt(r.tv_p_init) << ',' << opt(r.tv_p_final) << ','
    << opt(r.stationarity) << ',' << (r.converged ? 1 : 0) << ',' << r.iters << ',' << r.fevals
    << ',' << r.gevals << ',' << num(r.load_time_ms) << ',' << num(r.wall_time_ms);
  return s.str();
}

std::string aggregate_csv_header() {
  return "dataset,method,runs,q_mean,q_std,size_mean,size_std,time_mean_ms";
}

std::string aggregate_csv_row(const Aggregate& a) {
  std::ostringstream s;
  s << quoted(a.dataset) << ',' << a.method << ',' << a.runs << ',' << num(a.q_mean) << ','
    << num(a.q_std) << ',' << num(a.size_mean) << ',' << num(a.size_std) << ','
    << num(a.time_mean_ms);
  return s.str();
}

}  // namespace modtv::cli
