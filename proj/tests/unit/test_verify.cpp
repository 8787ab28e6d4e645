#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "shiftlab/shiftop/variants.hpp"
#include "shiftlab/verify/certify.hpp"
#include "shiftlab/verify/counterexamples.hpp"
#include "shiftlab/verify/kernel.hpp"

using namespace shiftlab;
using namespace shiftlab::verify;

namespace {

std::vector<Scalar> matvec(std::size_t rows, std::size_t cols, const std::vector<Scalar>& a,
                           const std::vector<Scalar>& v) {
  std::vector<Scalar> out(rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out[i] += a[i * cols + j] * v[j];
  return out;
}

double norm(const std::vector<Scalar>& v) {
  double s = 0;
  for (auto x : v) s += std::norm(x);
  return std::sqrt(s);
}

}  // namespace

TEST(CertifyDense, IdentityIsTrivial) {
  std::vector<Scalar> a(16);
  for (int i = 0; i < 4; ++i) a[static_cast<std::size_t>(5 * i)] = 1.0;
  const auto r = certify_dense(4, 4, a);
  EXPECT_EQ(r.verdict, Verdict::TrivialKernel);
  EXPECT_NEAR(r.ratio, 1.0, 1e-14);
  EXPECT_EQ(r.kernel_dim, 0u);
}

TEST(CertifyDense, RankDeficientHasKernelVectors) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  // 6 x 5 of rank 3
  const std::size_t rows = 6, cols = 5;
  std::vector<Scalar> u(rows * 3), w(3 * cols), a(rows * cols);
  for (auto& x : u) x = {n(rng), n(rng)};
  for (auto& x : w) x = {n(rng), n(rng)};
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t k = 0; k < 3; ++k) a[i * cols + j] += u[i * 3 + k] * w[k * cols + j];
  const auto r = certify_dense(rows, cols, a);
  EXPECT_EQ(r.verdict, Verdict::Nontrivial);
  EXPECT_EQ(r.kernel_dim, 2u);
  ASSERT_FALSE(r.kernel.empty());
  for (const auto& v : r.kernel) {
    EXPECT_NEAR(norm(v), 1.0, 1e-12);
    EXPECT_LE(norm(matvec(rows, cols, a, v)), 1e-10 * r.sigma_max);
  }
  for (std::size_t i = 1; i < r.spectrum.size(); ++i) EXPECT_LE(r.spectrum[i], r.spectrum[i - 1]);
}

TEST(CertifyDense, WideMatrixCountsMissingRank) {
  const std::vector<Scalar> a{1.0, 0.0, 0.0, 0.0, 1.0, 0.0};
  const auto r = certify_dense(2, 3, a);
  EXPECT_EQ(r.verdict, Verdict::Nontrivial);
  EXPECT_EQ(r.spectrum.size(), 3u);
  ASSERT_FALSE(r.kernel.empty());
  EXPECT_NEAR(std::abs(r.kernel[0][2]), 1.0, 1e-12);
}

TEST(CertifyDense, SmallButNonzeroIsInconclusive) {
  const std::vector<Scalar> a{1.0, 0.0, 0.0, 1e-8};
  const auto r = certify_dense(2, 2, a);
  EXPECT_EQ(r.verdict, Verdict::Inconclusive);
  EXPECT_EQ(to_string(r.verdict), "INCONCLUSIVE");
}

TEST(GoldenKernel, TrivialAtPhiAndShrinkingGap) {
  double prev = 1e300;
  for (int degree : {4, 6, 8, 16}) {
    const auto r = golden_arc_kernel(degree);
    EXPECT_EQ(r.verdict, Verdict::TrivialKernel) << degree;
    const double gap = r.metrics.at("min_phase_gap");
    EXPECT_LE(gap, prev);
    prev = gap;
  }
}

TEST(GoldenKernel, RationalArcHasKernel) {
  const auto r = golden_arc_kernel(6, 0.5);
  EXPECT_EQ(r.verdict, Verdict::Nontrivial);
  // the even modes die
  EXPECT_GE(r.kernel_dim, 3u);
}

TEST(Fibonacci, Values) {
  EXPECT_EQ(fibonacci(0), 0);
  EXPECT_EQ(fibonacci(1), 1);
  EXPECT_EQ(fibonacci(2), 1);
  EXPECT_EQ(fibonacci(10), 55);
  EXPECT_EQ(fibonacci(30), 832040);
}

TEST(Fibonacci, RecursionOnRandomPolynomials) {
  const auto polys = random_trig_polys(4, 8, 5);
  ASSERT_EQ(polys.size(), 4u);
  const auto r = fibonacci_recursion_check(polys, 12);
  EXPECT_LE(r.phi_identity, 1e-15);
  EXPECT_LE(r.additivity_residual, 1e-10);
  EXPECT_LE(r.base_case_residual, 1e-10);
  EXPECT_TRUE(r.implication_holds);
  EXPECT_EQ(r.fibonacci.size(), 13u);
  EXPECT_EQ(r.fibonacci[12], 144);
}

TEST(CompositionKernel, OppositeWeightsWithPeriodOne) {
  shiftop::CompositionOptions co;
  co.d1 = 0.5;
  co.d2 = -0.5;
  co.period = 1;
  co.depth = 6;
  co.sequence_len = 64;
  const auto T = shiftop::build_composition(co);
  CompositionKernelOptions ko;
  ko.window = 8;
  const auto r = composition_kernel_check(T, ko);
  EXPECT_EQ(r.verdict, Verdict::TrivialKernel);
  ASSERT_TRUE(r.row_tags.count("orbit_vanishing"));
  EXPECT_GT(r.row_tags.at("orbit_vanishing"), 0);
}

TEST(CompositionKernel, ShallowSeedIsCapacityError) {
  shiftop::CompositionOptions co;
  co.depth = 6;
  co.seed_depth = 3;
  co.sequence_len = 64;
  const auto T = shiftop::build_composition(co);
  EXPECT_THROW(composition_kernel_check(T), CapacityError);
}

TEST(Generators, CompositionHasOneGenerator) {
  shiftop::CompositionOptions co;
  co.depth = 6;
  co.sequence_len = 64;
  const auto T = shiftop::build_composition(co);
  const auto g = estimate_generators(T, std::ldexp(1.0, -6), T.composition->span + 64);
  EXPECT_EQ(g.lower, 1);
  EXPECT_EQ(g.upper, 1);
  EXPECT_TRUE(g.complete);
}

TEST(Generators, TinyBudgetLeavesTheCoverIncomplete) {
  shiftop::BlockMethodOptions bm;
  bm.p = {2};
  const auto g = estimate_generators(shiftop::build_block_method(bm), 0.05, 3);
  EXPECT_FALSE(g.complete);
  EXPECT_LT(g.coverage, 1.0);
}

TEST(Counterexamples, EveryFixtureHasAWitness) {
  for (auto f : all_fixtures()) {
    EXPECT_EQ(fixture_from_string(to_string(f)), f);
    const auto r = run_counterexample(f);
    EXPECT_TRUE(r.verified) << to_string(f);
    EXPECT_EQ(r.verdict, kWitnessVerified);
    EXPECT_LE(r.residual, r.tolerance);
    EXPECT_GT(r.witness_norm, 0.0);
    EXPECT_NO_THROW(build_fixture(f).validate()) << to_string(f);
  }
  CounterexampleOptions o;
  o.nde_sequence_only = true;
  EXPECT_TRUE(run_counterexample(Fixture::Nde, o).verified);
  EXPECT_THROW(fixture_from_string("BOGUS"), ValidationError);
}

TEST(Counterexamples, ToreroPigeonholePair) {
  CounterexampleOptions o;
  o.torero_a = {1.0, 1.0, -1.0};
  const auto r = run_counterexample(Fixture::Torero, o);
  EXPECT_TRUE(r.verified);
  EXPECT_EQ(r.pair_i, 1);
  EXPECT_EQ(r.pair_j, 2);
  o.torero_a = {1.0, -1.0};
  EXPECT_THROW(run_counterexample(Fixture::Torero, o), ValidationError);
}
