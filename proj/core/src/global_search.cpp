#include "modtv/global_search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace modtv {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream + 1));
}

void pick_and_set(std::vector<Index>& pool, double sigma, double value, Vector& y, Rng& rng) {
  if (pool.empty() || sigma <= 0.0) return;
  auto count = static_cast<std::size_t>(std::floor(sigma / 100.0 * static_cast<double>(pool.size())));
  count = std::clamp<std::size_t>(count, 1, pool.size());
  for (std::size_t t = 0; t < count; ++t) {
    std::uniform_int_distribution<std::size_t> pick(t, pool.size() - 1);
    std::swap(pool[t], pool[pick(rng)]);
    y[pool[t]] = value;
  }
}

void accumulate(GlobalResult& out, const ModuleResult& run) {
  out.total_iters += run.iters;
  out.total_fevals += run.fevals;
  out.total_gevals += run.gevals;
}

}  // namespace

void GlobalParams::validate() const {
  if (!(sigma >= 0.0 && sigma <= 100.0)) throw std::invalid_argument("sigma must lie in [0, 100]");
  if (ps_iters < 0) throw std::invalid_argument("ps_iters must be >= 0");
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
}

Vector swap(std::span<const double> x, double sigma, const BoxSpec& box, Rng& rng) {
  std::vector<Index> lower_class, upper_class;
  for (std::size_t i = 0; i < x.size(); ++i) {
    (x[i] < 0.0 ? lower_class : upper_class).push_back(static_cast<Index>(i));
  }
  Vector y(x.begin(), x.end());
  pick_and_set(lower_class, sigma, box.upper(), y, rng);
  pick_and_set(upper_class, sigma, box.lower(), y, rng);
  return y;
}

GlobalResult partition_and_swap(const Graph& g, std::span<const double> x0, const BoxSpec& box,
                                const SolverParams& sp, const GlobalParams& gp) {
  gp.validate();
  const auto start = std::chrono::steady_clock::now();
  Rng rng(gp.seed);
  SolverParams local = sp;

  GlobalResult out;
  // first solve keeps the caller's solver seed
  out.best = fast_atvo(g, x0, box, sp);
  accumulate(out, out.best);

  for (int it = 1; it <= gp.ps_iters; ++it) {
    const Vector perturbed = swap(out.best.x_star, gp.sigma, box, rng);
    local.seed = derive_seed(gp.seed, static_cast<std::uint64_t>(it));
    ModuleResult candidate = fast_atvo(g, perturbed, box, local);
    accumulate(out, candidate);

    const bool accept = gp.acceptance == PsAcceptance::kLarger
                            ? candidate.tv_final > out.best.tv_final
                            : candidate.tv_final < out.best.tv_final;
    SearchStep step{it, candidate.tv_final, 0.0, 0.0, accept};
    if (accept) out.best = std::move(candidate);
    step.incumbent_tv = out.best.tv_final;
    step.incumbent_q = out.best.q_value;
    out.history.push_back(step);
  }
  out.best.seed = gp.seed;
  out.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

GlobalResult multistart(const Graph& g, const BoxSpec& box, const SolverParams& sp,
                        const GlobalParams& gp) {
  gp.validate();
  box.validate();
  const auto start = std::chrono::steady_clock::now();
  Rng rng(gp.seed);
  std::uniform_real_distribution<double> coord(box.lower(), box.upper());
  SolverParams local = sp;

  GlobalResult out;
  bool have_best = false;
  for (int r = 0; r < gp.restarts; ++r) {
    Vector x0(static_cast<std::size_t>(g.num_nodes()));
    for (double& v : x0) v = coord(rng);
    local.seed = derive_seed(gp.seed, static_cast<std::uint64_t>(r));
    ModuleResult run = fast_atvo(g, x0, box, local);
    accumulate(out, run);
    const bool accept = !have_best || run.tv_final > out.best.tv_final;
    SearchStep step{r, run.tv_final, 0.0, 0.0, accept};
    if (accept) {
      out.best = std::move(run);
      have_best = true;
    }
    step.incumbent_tv = out.best.tv_final;
    step.incumbent_q = out.best.q_value;
    out.history.push_back(step);
  }
  out.best.seed = gp.seed;
  out.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace modtv
