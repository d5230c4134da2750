#include <gtest/gtest.h>

#include <cmath>

#include "diter/diffusion.hpp"
#include "diter/vector_ops.hpp"
#include "test_support.hpp"

namespace diter {
namespace {

// Columns (0, 1) and (0.5, 0.5).
SparseColumnMatrix two_node() {
  return SparseColumnMatrix(2, {0, 1, 3}, {1, 0, 1}, {1.0, 0.5, 0.5});
}

SparseColumnMatrix two_cycle() {
  return SparseColumnMatrix(2, {0, 1, 2}, {1, 0}, {1.0, 1.0});
}

TEST(DiffuseNode, MovesFluidIntoHistoryAndNeighbours) {
  const auto m = two_node();
  DiffusionState s(std::vector<double>{-0.25, 0.25});
  diffuse_node(s, m, 1);
  EXPECT_DOUBLE_EQ(s.history[0], 0.0);
  EXPECT_DOUBLE_EQ(s.history[1], 0.25);
  EXPECT_DOUBLE_EQ(s.fluid[0], -0.125);
  EXPECT_DOUBLE_EQ(s.fluid[1], 0.125);
  EXPECT_DOUBLE_EQ(l1_norm(s.fluid), 0.25);
  EXPECT_EQ(s.diffusions, 1u);
  EXPECT_EQ(s.links_processed, 2u);
}

TEST(DiffuseNode, ZeroFluidOnlyCounts) {
  const auto m = two_node();
  DiffusionState s(std::vector<double>{0.0, 0.3});
  diffuse_node(s, m, 0);
  EXPECT_EQ(s.history, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(s.fluid, (std::vector<double>{0.0, 0.3}));
  EXPECT_EQ(s.diffusions, 1u);
}

TEST(DiffuseNode, SelfLoopReturnsFluid) {
  const SparseColumnMatrix m(2, {0, 1, 2}, {0, 1}, {1.0, 1.0});
  DiffusionState s(std::vector<double>{0.7, 0.0});
  diffuse_node(s, m, 0);
  EXPECT_DOUBLE_EQ(s.history[0], 0.7);
  EXPECT_DOUBLE_EQ(s.fluid[0], 0.7);
}

TEST(DiffuseNode, ScaledOperatorAndDanglingSpread) {
  const SparseColumnMatrix m(2, {0, 1, 1}, {1}, {1.0});
  DiffusionState s(std::vector<double>{0.0, 0.4});
  diffuse_node(s, DiffusionOperator{m, 0.5, true}, 1);
  EXPECT_DOUBLE_EQ(s.fluid[0], 0.1);
  EXPECT_DOUBLE_EQ(s.fluid[1], 0.1);
  EXPECT_EQ(s.links_processed, 2u);

  DiffusionState dropped(std::vector<double>{0.0, 0.4});
  diffuse_node(dropped, DiffusionOperator{m, 0.5, false}, 1);
  EXPECT_EQ(dropped.fluid, (std::vector<double>{0.0, 0.0}));
}

TEST(DiffuseNode, RejectsBadIndex) {
  const auto m = two_node();
  DiffusionState s(std::vector<double>{0.0, 0.0});
  EXPECT_THROW(diffuse_node(s, m, 2), std::out_of_range);
}

TEST(InitDiPlus, InitialFluid) {
  EXPECT_EQ(di_plus_initial_fluid(two_node()), (std::vector<double>{-0.25, 0.25}));
  EXPECT_EQ(di_plus_initial_fluid(two_cycle()), (std::vector<double>{0.0, 0.0}));
  const DiffusionState s = init_di_plus(two_node());
  EXPECT_EQ(s.history, (std::vector<double>{0.0, 0.0}));
}

TEST(RunCycles, ConvergedAtStart) {
  DiffusionState s = init_di_plus(two_cycle());
  const SolverReport r = run_cycles(s, two_cycle(), SelectionPolicy{}, StoppingRule{});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.diffusions, 0u);
  EXPECT_EQ(r.iterations, 0.0);
}

TEST(RunCycles, ReachesStationaryOffset) {
  const auto m = two_node();
  DiffusionState s = init_di_plus(m);
  StoppingRule stop;
  stop.target = 1e-10;
  const SolverReport r = run_cycles(s, m, SelectionPolicy{}, stop);
  ASSERT_TRUE(r.converged);
  // Node 0 is first selected in cycle 1 and cancels all fluid at once:
  // H = (-0.25, 0), and H + e = (0.25, 0.5) is proportional to (1/3, 2/3).
  EXPECT_DOUBLE_EQ(r.x[0], -0.25);
  EXPECT_DOUBLE_EQ(r.x[1], 0.0);
  EXPECT_EQ(r.diffusions, 1u);
  EXPECT_EQ(r.error_estimate, 0.0);
  EXPECT_DOUBLE_EQ(r.iterations, static_cast<double>(r.links_processed) / 3.0);
  EXPECT_EQ(r.trace.front().estimate, 0.5);
  EXPECT_LE(check_identity(s, m, di_plus_initial_fluid(m)), 1e-15);

  const SolverReport x = solve_stationary(m, SelectionPolicy{}, stop);
  EXPECT_NEAR(x.x[0], 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(x.x[1], 2.0 / 3.0, 1e-9);
}

TEST(RunCycles, ReportsMaxCycles) {
  const auto m = two_node();
  DiffusionState s = init_di_plus(m);
  StoppingRule stop;
  stop.max_cycles = 3;
  const SolverReport r = run_cycles(s, m, SelectionPolicy{1e30, 0.25, true}, stop);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.cycles, 3u);
  EXPECT_EQ(r.diffusions, 0u);
}

TEST(RunCycles, DiffusionCapStopsEarly) {
  SplitMix64 rng(2);
  const auto m = testing::random_irreducible_stochastic(30, rng);
  DiffusionState s = init_di_plus(m);
  StoppingRule stop;
  stop.target = 0.0;
  stop.max_diffusions = 17;
  const SolverReport r = run_cycles(s, m, SelectionPolicy{}, stop);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.diffusions, 17u);
}

TEST(RunCycles, IterationDeltaEstimate) {
  SplitMix64 rng(4);
  const auto m = testing::random_irreducible_stochastic(40, rng);
  DiffusionState s = init_di_plus(m);
  StoppingRule stop;
  stop.estimate = StoppingEstimate::IterationDelta;
  stop.target = 1e-12;
  const SolverReport r = run_cycles(s, m, SelectionPolicy{}, stop);
  ASSERT_TRUE(r.converged);
  EXPECT_LE(l1_norm(s.fluid), 1e-9);
}

TEST(RunCycles, InvalidPolicy) {
  const auto m = two_node();
  DiffusionState s = init_di_plus(m);
  EXPECT_THROW(run_cycles(s, m, SelectionPolicy{1.0, 1.0, true}, StoppingRule{}),
               std::invalid_argument);
  EXPECT_THROW(run_cycles(s, m, SelectionPolicy{0.0, 0.5, true}, StoppingRule{}),
               std::invalid_argument);
}

TEST(CheckIdentity, DetectsCorruptedHistory) {
  SplitMix64 rng(9);
  const auto m = testing::random_irreducible_stochastic(20, rng, 0.3);
  const auto f0 = di_plus_initial_fluid(m);
  DiffusionState s(f0);
  EXPECT_EQ(check_identity(s, m, f0), 0.0);
  for (int k = 0; k < 100; ++k) diffuse_node(s, m, static_cast<NodeId>(rng.next() % 20));
  EXPECT_LE(check_identity(s, m, f0), 1e-10 * 20);

  // Column 5 sums to one, so the column-sum lower bound is vacuous but the
  // corruption still shows up as |e_5 - P e_5| = 2 - 2 p_55.
  s.history[5] += 1.0;
  EXPECT_GE(check_identity(s, m, f0), 2.0 - 2.0 * m.at(5, 5) - 1e-9);
}

// Properties over random irreducible column-stochastic matrices.
class DiffusionProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(DiffusionProperties, ConservationMonotonicityIdentity) {
  SplitMix64 rng(GetParam());
  const std::size_t n = 2 + rng.next() % 60;
  const auto m = testing::random_irreducible_stochastic(n, rng, 0.15);
  const auto f0 = di_plus_initial_fluid(m);
  DiffusionState s(f0);
  double prev = l1_norm(s.fluid);
  double diffused = 0.0;
  for (int step = 0; step < 2000; ++step) {
    const auto i = static_cast<NodeId>(rng.next() % n);
    diffused += s.fluid[i];
    diffuse_node(s, m, i);
    ASSERT_LE(std::abs(sum(s.fluid)), 1e-10);
    // sigma(H) is the total diffused fluid, not a conserved quantity.
    ASSERT_NEAR(sum(s.history), diffused, 1e-10);
    const double norm = l1_norm(s.fluid);
    ASSERT_LE(norm, prev + 1e-12);
    prev = norm;
  }
  EXPECT_LE(check_identity(s, m, f0), 1e-10 * static_cast<double>(n));
}

TEST_P(DiffusionProperties, LimitDoesNotDependOnOrder) {
  SplitMix64 rng(GetParam() + 1000);
  const std::size_t n = 2 + rng.next() % 30;
  const auto m = testing::random_irreducible_stochastic(n, rng, 0.2);
  StoppingRule stop;
  stop.target = 1e-13;
  const SolverReport sweep = solve_stationary(m, SelectionPolicy{}, stop);

  // Random single-node order, run until the fluid has drained.
  DiffusionState s = init_di_plus(m);
  for (int k = 0; k < 2000000 && l1_norm(s.fluid) > 1e-14; ++k) {
    diffuse_node(s, m, static_cast<NodeId>(rng.next() % n));
  }
  std::vector<double> x = s.history;
  for (double& v : x) v += 1.0 / static_cast<double>(n);
  normalize_sum(x);
  EXPECT_LE(l1_distance(x, sweep.x), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(RandomMatrices, DiffusionProperties,
                         ::testing::Range<std::uint64_t>(1, 26));

}  // namespace
}  // namespace diter
