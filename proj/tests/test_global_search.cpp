#include <gtest/gtest.h>

#include "modtv/global_search.hpp"
#include "modtv/modularity.hpp"
#include "modtv/oracles.hpp"
#include "support.hpp"

namespace modtv {
namespace {

using testing::corpus_graph;
using testing::uniform_vector;

const BoxSpec kUnit{1.0, 1.0};

TEST(Swap, ZeroSigmaIsIdentity) {
  Rng rng(1);
  const Vector x{-1.0, 0.3, 0.0, 1.0};
  EXPECT_EQ(swap(x, 0.0, kUnit, rng), x);
}

TEST(Swap, FullSigmaGivesOppositeVertex) {
  Rng rng(2);
  const BoxSpec box{2.0, 3.0};
  const Vector x{-2.0, 3.0, 3.0, -2.0, 3.0};
  EXPECT_EQ(swap(x, 100.0, box, rng), (Vector{3.0, -2.0, -2.0, 3.0, -2.0}));
}

TEST(Swap, CountsAndTargets) {
  std::mt19937_64 gen(3);
  for (int k = 0; k < 50; ++k) {
    Vector x = uniform_vector(37, -1.0, 1.0, gen);
    x[5] = 0.0;
    Index lower = 0, upper = 0;
    for (double v : x) (v < 0.0 ? lower : upper)++;
    const double sigma = 10.0 * (k % 11);
    Rng rng(k);
    Vector y = swap(x, sigma, kUnit, rng);
    Index moved_up = 0, moved_down = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (y[i] == x[i]) continue;
      if (x[i] < 0.0) {
        EXPECT_EQ(y[i], 1.0);
        ++moved_up;
      } else {
        EXPECT_EQ(y[i], -1.0);
        ++moved_down;
      }
    }
    auto expected = [&](Index size) -> Index {
      if (sigma == 0.0 || size == 0) return 0;
      return std::max<Index>(1, static_cast<Index>(std::floor(sigma / 100.0 * size)));
    };
    EXPECT_EQ(moved_up, expected(lower));
    EXPECT_EQ(moved_down, expected(upper));
  }
}

TEST(Swap, SmallClassesStillMove) {
  Rng rng(4);
  Vector y = swap(Vector{-1.0, 1.0, 1.0}, 10.0, kUnit, rng);
  EXPECT_EQ(y[0], 1.0);
  EXPECT_EQ((y[1] == -1.0) + (y[2] == -1.0), 1);
}

TEST(Swap, SeededReplay) {
  std::mt19937_64 gen(5);
  Vector x = uniform_vector(50, -1.0, 1.0, gen);
  Rng a(8), b(8);
  EXPECT_EQ(swap(x, 75.0, kUnit, a), swap(x, 75.0, kUnit, b));
}

TEST(GlobalParamsTest, Validation) {
  GlobalParams gp;
  EXPECT_NO_THROW(gp.validate());
  gp.sigma = 101.0;
  EXPECT_THROW(gp.validate(), std::invalid_argument);
  gp = {};
  gp.restarts = 0;
  EXPECT_THROW(gp.validate(), std::invalid_argument);
}

TEST(PartitionAndSwap, ZeroBudgetEqualsSingleRun) {
  Graph g = corpus_graph(1, 40, 4000);
  std::mt19937_64 gen(6);
  Vector x0 = uniform_vector(40, -1.0, 1.0, gen);
  GlobalParams gp;
  gp.ps_iters = 0;
  gp.seed = 12;
  SolverParams sp;
  sp.seed = 99;
  GlobalResult ps = partition_and_swap(g, x0, kUnit, sp, gp);
  ModuleResult single = fast_atvo(g, x0, kUnit, sp);
  EXPECT_TRUE(ps.history.empty());
  EXPECT_EQ(ps.best.x_star, single.x_star);
  EXPECT_EQ(ps.best.telemetry.iterate_digest, single.telemetry.iterate_digest);
  EXPECT_EQ(ps.total_iters, single.iters);
}

TEST(PartitionAndSwap, IncumbentNeverDecreases) {
  for (int k = 0; k < 6; ++k) {
    Graph g = corpus_graph(k, 30, 4100 + k);
    std::mt19937_64 gen(7 + k);
    GlobalParams gp;
    gp.seed = k;
    gp.ps_iters = 8;
    GlobalResult r = partition_and_swap(g, uniform_vector(30, -1.0, 1.0, gen), kUnit,
                                        SolverParams{}, gp);
    ASSERT_EQ(r.history.size(), 8u);
    double prev = -1.0;
    for (const SearchStep& s : r.history) {
      EXPECT_GE(s.incumbent_tv, prev);
      if (s.accepted) {
        EXPECT_EQ(s.incumbent_tv, s.candidate_tv);
        EXPECT_GT(s.candidate_tv, prev);
      } else {
        EXPECT_LE(s.candidate_tv, s.incumbent_tv);
      }
      prev = s.incumbent_tv;
    }
    EXPECT_EQ(r.best.tv_final, r.history.back().incumbent_tv);
  }
}

TEST(PartitionAndSwap, BarbellReachesGlobalOptimum) {
  Graph g = gen::barbell();
  const double best = oracle::brute_force_max_modularity(g).q;
  ASSERT_NEAR(best, 5.0 / 28.0, 1e-15);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 gen(seed);
    GlobalParams gp;
    gp.seed = seed;
    gp.ps_iters = 3;
    GlobalResult r =
        partition_and_swap(g, uniform_vector(6, -1.0, 1.0, gen), kUnit, SolverParams{}, gp);
    EXPECT_NEAR(r.best.q_value, best, 1e-12) << "seed " << seed;
  }
}

TEST(PartitionAndSwap, Reproducible) {
  Graph g = corpus_graph(0, 50, 4200);
  std::mt19937_64 gen(9);
  Vector x0 = uniform_vector(50, -1.0, 1.0, gen);
  GlobalParams gp;
  gp.seed = 3;
  gp.ps_iters = 4;
  GlobalResult a = partition_and_swap(g, x0, kUnit, SolverParams{}, gp);
  GlobalResult b = partition_and_swap(g, x0, kUnit, SolverParams{}, gp);
  EXPECT_EQ(a.best.x_star, b.best.x_star);
  EXPECT_EQ(a.total_iters, b.total_iters);
}

TEST(PartitionAndSwap, LiteralAcceptanceKeepsSmallerValues) {
  Graph g = corpus_graph(1, 30, 4300);
  std::mt19937_64 gen(10);
  GlobalParams gp;
  gp.ps_iters = 5;
  gp.acceptance = PsAcceptance::kLiteralSmaller;
  GlobalResult r =
      partition_and_swap(g, uniform_vector(30, -1.0, 1.0, gen), kUnit, SolverParams{}, gp);
  double prev = r.history.empty() ? 0.0 : 1e300;
  for (const SearchStep& s : r.history) {
    EXPECT_LE(s.incumbent_tv, prev);
    prev = s.incumbent_tv;
  }
}

TEST(Multistart, BarbellAndMonotoneInRestarts) {
  Graph g = gen::barbell();
  GlobalParams gp;
  gp.restarts = 10;
  gp.seed = 1;
  GlobalResult r = multistart(g, kUnit, SolverParams{}, gp);
  EXPECT_NEAR(r.best.q_value, 5.0 / 28.0, 1e-12);
  ASSERT_EQ(r.history.size(), 10u);
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    EXPECT_GE(r.history[i].incumbent_tv, r.history[i - 1].incumbent_tv);
  }

  Graph h = corpus_graph(0, 40, 4400);
  GlobalParams few = gp;
  few.restarts = 3;
  GlobalResult short_run = multistart(h, kUnit, SolverParams{}, few);
  GlobalResult long_run = multistart(h, kUnit, SolverParams{}, gp);
  EXPECT_GE(long_run.best.tv_final, short_run.best.tv_final);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(long_run.history[i].candidate_tv, short_run.history[i].candidate_tv);
  }
}

}  // namespace
}  // namespace modtv
