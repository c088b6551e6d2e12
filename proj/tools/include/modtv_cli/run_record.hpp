#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace modtv::cli {

inline constexpr int kSchemaVersion = 1;

/// Echo of the parameters a run was launched with.
struct RunParams {
  std::string start;
  double p = 1.4;
  double a = 1.0;
  double b = 1.0;
  double eps = 1e-4;
  std::int64_t max_iters = 0;
  int ps_iters = 10;
  double sigma = 75.0;
  int restarts = 10;
};

struct RunRecord {
  std::string dataset;
  std::int64_t n = 0;
  std::int64_t m = 0;
  std::string method;
  std::uint64_t seed = 0;
  RunParams params;
  double q = 0.0;
  std::int64_t community_size = 0;
  double community_fraction = 0.0;
  double tv_q_final = 0.0;
  std::optional<double> tv_p_init;
  std::optional<double> tv_p_final;
  std::optional<double> stationarity;
  bool converged = true;
  std::int64_t iters = 0;
  std::int64_t fevals = 0;
  std::int64_t gevals = 0;
  double load_time_ms = 0.0;
  double wall_time_ms = 0.0;
};

nlohmann::json to_json(const RunRecord& r);
RunRecord record_from_json(const nlohmann::json& j);

/// Mean and sample standard deviation over a (dataset, method) cell.
struct Aggregate {
  std::string dataset;
  std::string method;
  std::int64_t runs = 0;
  double q_mean = 0.0;
  double q_std = 0.0;
  double size_mean = 0.0;
  double size_std = 0.0;
  double time_mean_ms = 0.0;
};

/// Groups by (dataset, method) in first-seen order.
std::vector<Aggregate> aggregate(const std::vector<RunRecord>& records);
nlohmann::json to_json(const Aggregate& a);

std::string csv_header();
std::string csv_row(const RunRecord& r);
std::string aggregate_csv_header();
std::string aggregate_csv_row(const Aggregate& a);

}  // namespace modtv::cli
