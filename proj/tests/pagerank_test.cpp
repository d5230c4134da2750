#include <gtest/gtest.h>

#include "diter/dense_oracle.hpp"
#include "diter/errors.hpp"
#include "diter/pagerank.hpp"
#include "diter/vector_ops.hpp"
#include "test_support.hpp"

namespace diter {
namespace {

// Edge 0 -> 1, node 1 dangling.
SparseColumnMatrix single_edge() { return SparseColumnMatrix(2, {0, 1, 1}, {1}, {1.0}); }

SparseColumnMatrix two_cycle() { return SparseColumnMatrix(2, {0, 1, 2}, {1, 0}, {1.0, 1.0}); }

PageRankOptions tight(double target = 1e-12) {
  PageRankOptions o;
  o.target = target;
  return o;
}

TEST(PageRankOperator, AppliesDanglingAndTeleport) {
  const auto pg = single_edge();
  const PageRankOperator op(pg, 0.5);
  const auto y = op.apply(std::vector<double>{0.5, 0.5});
  // d P_g.X = (0, 0.25), dangling share 0.125 each, teleport 0.25 each.
  EXPECT_DOUBLE_EQ(y[0], 0.375);
  EXPECT_DOUBLE_EQ(y[1], 0.625);
  ASSERT_EQ(op.dangling().size(), 1u);

  const auto dense = oracle::dense_completed(pg);
  const auto yd = dense.multiply(std::vector<double>{0.5, 0.5});
  EXPECT_DOUBLE_EQ(y[0], 0.5 * yd[0] + 0.25);
  EXPECT_DOUBLE_EQ(y[1], 0.5 * yd[1] + 0.25);
}

TEST(PageRankOperator, ReducesToLinkMatrix) {
  SplitMix64 rng(5);
  const auto pg = testing::random_irreducible_stochastic(12, rng);
  const PageRankOperator full(pg, 1.0);
  std::vector<double> x(12);
  for (double& v : x) v = rng.next_unit() - 0.5;
  const auto a = full.apply(x);
  const auto b = pg.multiply(x);
  for (std::size_t i = 0; i < 12; ++i) EXPECT_NEAR(a[i], b[i], 1e-15);

  // Zero-sum input: the teleport term vanishes.
  const double s = sum(x);
  for (double& v : x) v -= s / 12.0;
  const auto c = PageRankOperator(pg, 0.7).apply(x);
  const auto dpx = pg.multiply(x);
  for (std::size_t i = 0; i < 12; ++i) EXPECT_NEAR(c[i], 0.7 * dpx[i], 1e-15);
}

TEST(DiPlusPageRank, TwoNodeFixture) {
  const auto pg = single_edge();
  const PageRankProblem prob{pg, 0.5, false};
  const auto f0 = pagerank_initial_fluid(prob);
  EXPECT_DOUBLE_EQ(f0[0], -0.125);
  EXPECT_DOUBLE_EQ(f0[1], 0.125);

  const PageRankResult r = di_plus_pagerank(prob, tight());
  ASSERT_TRUE(r.report.converged);
  EXPECT_NEAR(r.history[0], -0.125, 1e-11);
  EXPECT_NEAR(r.history[1], 0.0625, 1e-11);
  EXPECT_NEAR(r.report.x[0], 0.4, 1e-10);
  EXPECT_NEAR(r.report.x[1], 0.6, 1e-10);

  const auto exact = oracle::dense_pagerank(pg, 0.5);
  EXPECT_NEAR(exact[0], 0.4, 1e-14);
  EXPECT_NEAR(exact[1], 0.6, 1e-14);
}

TEST(DiPlusPageRank, DoublyStochasticIsUniform) {
  const auto pg = two_cycle();
  const PageRankResult r = di_plus_pagerank(PageRankProblem{pg, 0.85, true}, tight());
  EXPECT_EQ(r.report.diffusions, 0u);
  EXPECT_EQ(r.report.x, (std::vector<double>{0.5, 0.5}));
}

TEST(DiPlusPageRank, DampingOneNeedsCompletedGraph) {
  const auto pg = single_edge();
  EXPECT_THROW(di_plus_pagerank(PageRankProblem{pg, 1.0, false}, tight()),
               UndefinedMethodError);
  const auto cycle = two_cycle();
  const auto r = di_plus_pagerank(PageRankProblem{cycle, 1.0, true}, tight());
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.x, (std::vector<double>{0.5, 0.5}));
}

TEST(DiPlusPageRank, RejectsBadDamping) {
  const auto pg = single_edge();
  EXPECT_THROW(di_plus_pagerank(PageRankProblem{pg, 0.0, false}, tight()),
               std::invalid_argument);
  EXPECT_THROW(di_plus_pagerank(PageRankProblem{pg, 1.5, false}, tight()),
               std::invalid_argument);
}

TEST(DiPlusPageRank, UniformDanglingMatchesDrop) {
  SplitMix64 rng(12);
  const auto pg = build_stochastic(testing::random_edges(30, 45, rng));
  ASSERT_GT(compute_stats(pg).dangling, 0u);
  const PageRankProblem prob{pg, 0.85, false};
  PageRankOptions uniform = tight();
  uniform.dangling = DanglingMode::Uniform;
  const auto a = di_plus_pagerank(prob, tight());
  const auto b = di_plus_pagerank(prob, uniform);
  const auto exact = oracle::dense_pagerank(pg, 0.85);
  EXPECT_LE(l1_distance(a.report.x, exact), 1e-10);
  EXPECT_LE(l1_distance(b.report.x, exact), 1e-10);
}

TEST(DiPagerank, TwoCycle) {
  const auto pg = two_cycle();
  const auto r = di_pagerank(PageRankProblem{pg, 0.5, true}, tight());
  ASSERT_TRUE(r.report.converged);
  EXPECT_NEAR(r.report.x[0], 0.5, 1e-12);
  EXPECT_NEAR(r.report.x[1], 0.5, 1e-12);
}

TEST(DiPagerank, SmallDampingIsNearlyUniform) {
  SplitMix64 rng(8);
  const auto pg = build_stochastic(complete_graph(testing::random_edges(20, 40, rng), 1));
  PageRankOptions o;
  o.target = 1e-3;
  const auto r = di_pagerank(PageRankProblem{pg, 0.01, true}, o);
  EXPECT_TRUE(r.report.converged);
  EXPECT_LT(r.report.iterations, 2.0);
  for (const double v : r.report.x) EXPECT_NEAR(v, 0.05, 0.002);
}

TEST(DiPagerank, UndefinedAtDampingOne) {
  const auto pg = two_cycle();
  EXPECT_THROW(di_pagerank(PageRankProblem{pg, 1.0, true}, tight()), UndefinedMethodError);
}

// The residual of classic DI is non-negative and d P has column sums d, so
// |F| / (1 - d) is the exact remaining mass.
TEST(DiPagerank, ResidualIsExactError) {
  SplitMix64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.next() % 49;
    const auto pg = build_stochastic(testing::random_edges(n, 2 * n, rng));
    for (const double d : {0.5, 0.85, 0.99}) {
      const auto exact = oracle::dense_pagerank(pg, d);
      PageRankOptions o;
      o.target = 1e-4;
      const auto r = di_pagerank(PageRankProblem{pg, d, false}, o);
      EXPECT_NEAR(r.report.error_estimate, l1_distance(r.history, exact), 1e-9);
    }
  }
}

TEST(RescalingCertificate, TwoNodeFixture) {
  const auto pg = single_edge();
  const PageRankProblem prob{pg, 0.5, false};
  const std::vector<double> h{-0.125, 0.0625};
  const std::vector<double> h_complete{-0.1, 0.1};
  const RescalingCertificate c = rescaling_certificate(prob, h_complete);
  EXPECT_DOUBLE_EQ(c.f1, 0.5);
  EXPECT_NEAR(c.f2, 0.1, 1e-15);
  EXPECT_NEAR(c.f, 0.6, 1e-15);
  EXPECT_NEAR(c.scale, 0.8 / 0.75, 1e-15);
  EXPECT_LE(verify_rescaling(prob, h, h_complete), 1e-9);

  const auto r = di_plus_pagerank(prob, tight());
  EXPECT_NEAR(r.certificate.scale, 0.8 / 0.75, 1e-10);
}

TEST(RescalingCertificate, DanglingFreeGraphHasUnitScale) {
  SplitMix64 rng(13);
  const auto pg = testing::random_irreducible_stochastic(10, rng, 0.3);
  const PageRankProblem prob{pg, 0.85, true};
  const auto r = di_plus_pagerank(prob, tight(1e-13));
  EXPECT_NEAR(r.certificate.f1, 0.0, 1e-15);
  EXPECT_NEAR(r.certificate.scale, 1.0, 1e-10);
  EXPECT_LE(verify_rescaling(prob, r.history, r.history), 1e-10);
}

TEST(RescalingCertificate, LinksDroppedAndUniformLimits) {
  SplitMix64 rng(17);
  const auto pg = build_stochastic(testing::random_edges(10, 14, rng));
  const PageRankProblem prob{pg, 0.85, false};
  const auto dropped = di_plus_pagerank(prob, tight(1e-13));
  std::vector<double> h_complete = oracle::dense_pagerank(pg, 0.85);
  for (double& v : h_complete) v -= 0.1;
  EXPECT_LE(verify_rescaling(prob, dropped.history, h_complete), 1e-9);
}

TEST(PageRankMethods, AgreeWithOracle) {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.next() % 80;
    const auto pg = build_stochastic(testing::random_edges(n, 3 * n, rng));
    for (const double d : {0.5, 0.85, 0.99}) {
      const PageRankProblem prob{pg, d, false};
      const auto exact = oracle::dense_pagerank(pg, d);
      const auto pi = pi_pagerank(prob, 1e-10, 100000);
      const auto di = di_pagerank(prob, tight(1e-10));
      const auto dip = di_plus_pagerank(prob, tight(1e-10));
      EXPECT_LE(l1_distance(pi.x, exact), 2e-10);
      EXPECT_LE(l1_distance(di.report.x, exact), 2e-10);
      EXPECT_LE(l1_distance(dip.report.x, exact), 2e-10);
    }
  }
}

}  // namespace
}  // namespace diter
