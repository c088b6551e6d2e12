#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "modtv/modularity.hpp"
#include "modtv/oracles.hpp"
#include "modtv/spectral.hpp"
#include "support.hpp"

namespace modtv {
namespace {

using testing::corpus_graph;
using testing::uniform_vector;

Eigen::MatrixXd dense_modularity_matrix(const Graph& g) {
  const Index n = g.num_nodes();
  Eigen::MatrixXd b(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      b(i, j) = g.weight(i, j) - g.degree(i) * g.degree(j) / g.volume();
    }
  }
  return b;
}

TEST(Matvec, MatchesDenseOperator) {
  std::mt19937_64 rng(51);
  for (int k = 0; k < 20; ++k) {
    Graph g = k == 0 ? gen::barbell() : corpus_graph(k, 8 + 6 * k, 5000 + k);
    const Index n = g.num_nodes();
    Vector v = uniform_vector(n, -1.0, 1.0, rng);
    Eigen::VectorXd want = dense_modularity_matrix(g) * Eigen::Map<Eigen::VectorXd>(v.data(), n);
    Vector got = modularity_matvec(g, v);
    double scale = 0.0, diff = 0.0;
    for (Index i = 0; i < n; ++i) {
      scale = std::max(scale, std::abs(want(i)));
      diff = std::max(diff, std::abs(got[i] - want(i)));
    }
    EXPECT_LE(diff, 1e-12 * std::max(1.0, scale));
  }
}

TEST(Matvec, OnesInKernelAndZeroMapsToZero) {
  Graph g = corpus_graph(1, 40, 5100);
  for (double v : modularity_matvec(g, Vector(40, 1.0))) EXPECT_NEAR(v, 0.0, 1e-12);
  for (double v : modularity_matvec(g, Vector(40, 0.0))) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(modularity_matvec(g, Vector(3, 0.0)), std::invalid_argument);
}

TEST(LeadingEigenvector, BarbellThresholdsToTriangle) {
  Graph g = gen::barbell();
  EigenResult r = leading_eigenvector(g);
  ASSERT_TRUE(r.converged);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_modularity_matrix(g));
  EXPECT_NEAR(r.value, es.eigenvalues()(5), 1e-7);
  SweepResult s = threshold_sweep(g, r.vector);
  EXPECT_NEAR(s.q, oracle::brute_force_max_modularity(g).q, 1e-15);
}

TEST(LeadingEigenvector, SeparatesDisconnectedCliques) {
  std::vector<Edge> edges;
  for (Index base : {0, 5}) {
    for (Index i = 0; i < 5; ++i) {
      for (Index j = i + 1; j < 5; ++j) edges.push_back({base + i, base + j, 1.0});
    }
  }
  Graph g = Graph::from_edges(10, edges);
  EigenResult r = leading_eigenvector(g);
  ASSERT_TRUE(r.converged);
  for (Index i = 0; i < 5; ++i) {
    EXPECT_GT(r.vector[i] * r.vector[0], 0.0);
    EXPECT_LT(r.vector[i + 5] * r.vector[0], 0.0);
  }
  EXPECT_GT(r.vector[0], 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_modularity_matrix(g));
  EXPECT_NEAR(r.value, es.eigenvalues()(9), 1e-7);
}

TEST(LeadingEigenvector, ResidualBoundAndAgreementWithDenseSolver) {
  for (int k = 1; k < 16; k += 2) {
    Graph g = corpus_graph(k, 30 + 4 * k, 5200 + k);
    EigenResult r = leading_eigenvector(g);
    ASSERT_TRUE(r.converged) << k;
    Vector bx = modularity_matvec(g, r.vector);
    double res = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < bx.size(); ++i) {
      res = std::max(res, std::abs(bx[i] - r.value * r.vector[i]));
      norm = std::max(norm, std::abs(r.vector[i]));
    }
    EXPECT_DOUBLE_EQ(norm, 1.0);
    EXPECT_LE(res, 1e-8 * std::abs(r.value));
    EXPECT_DOUBLE_EQ(res, r.residual);
    // planted graphs have sets of positive modularity
    EXPECT_GT(r.value, 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_modularity_matrix(g));
    const Index n = g.num_nodes();
    EXPECT_NEAR(r.value, es.eigenvalues()(n - 1), 1e-6 * es.eigenvalues()(n - 1));
  }
}

TEST(LeadingEigenvector, SignConventionAndDeterminism) {
  Graph g = corpus_graph(0, 50, 5300);
  PowerIterParams p;
  p.seed = 4;
  EigenResult a = leading_eigenvector(g, p);
  EigenResult b = leading_eigenvector(g, p);
  EXPECT_EQ(a.vector, b.vector);
  for (double v : a.vector) {
    if (v != 0.0) {
      EXPECT_GT(v, 0.0);
      break;
    }
  }
}

TEST(LeadingEigenvector, IterationCapReturnsBestSoFar) {
  Graph g = corpus_graph(0, 60, 5400);
  PowerIterParams p;
  p.max_iters = 2;
  p.tol = 1e-14;
  EigenResult r = leading_eigenvector(g, p);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.vector.size(), 60u);
  EXPECT_GE(r.iterations, 1);
  PowerIterParams bad;
  bad.tol = 0.0;
  EXPECT_THROW(leading_eigenvector(g, bad), std::invalid_argument);
}

}  // namespace
}  // namespace modtv
