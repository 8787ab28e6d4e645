#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "shiftlab/dynamics/homeo.hpp"
#include "shiftlab/dynamics/orbit.hpp"
#include "shiftlab/verify/certify.hpp"

using namespace shiftlab;
using namespace shiftlab::dynamics;
using funcspace::BlockPart;
using funcspace::SymbolPoint;

namespace {

BlockPoint angle(double t, int block = 1) { return BlockPoint{block, {t}, std::nullopt}; }

BlockPart random_circle_part(int degree, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  BlockPart p;
  p.circles = 1;
  p.degree = degree;
  for (int k = 0; k < 2 * degree + 1; ++k) p.coef.emplace_back(n(rng), n(rng));
  return p;
}

BlockPart random_symbol_part(int q, std::int64_t lo, int depth, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  BlockPart p;
  p.alphabet = q;
  p.lo = lo;
  p.depth = depth;
  p.coef.resize(funcspace::ipow(static_cast<std::uint64_t>(q), depth));
  for (auto& c : p.coef) c = n(rng);
  return p;
}

}  // namespace

TEST(Homeo, RotationForwardBackward) {
  auto r = make_rotation_flow({0.25});
  auto x = r->forward(angle(0.1));
  EXPECT_NEAR(x.angles[0], 0.1 + kTwoPi / 4, 1e-12);
  auto y = r->backward(x);
  EXPECT_NEAR(angle_distance(y.angles[0], 0.1), 0.0, 1e-12);
}

TEST(Homeo, ComposeAndPowerAgreeWithIteration) {
  auto r = make_rotation_flow({std::sqrt(2.0) - 1});
  auto r3 = power(r, 3);
  auto x = angle(0.4);
  auto z = r->forward(r->forward(r->forward(x)));
  EXPECT_NEAR(angle_distance(r3->forward(x).angles[0], z.angles[0]), 0.0, 1e-12);
  auto id = compose(r, inverse(r));
  EXPECT_NEAR(angle_distance(id->forward(x).angles[0], 0.4), 0.0, 1e-12);
}

TEST(Homeo, CyclicBlockPermutesBlocks) {
  // blocks (j, sub): s = (3, 1, 2) sends j to s[j-1]
  auto c = make_cyclic_block({3, 1, 2}, make_rotation_flow({0.5}));
  EXPECT_EQ(c->block_count(), 3);
  auto x = c->forward(angle(0.0, 1));
  EXPECT_EQ(x.block, 3);
  EXPECT_NEAR(angle_distance(x.angles[0], std::numbers::pi), 0.0, 1e-12);
  EXPECT_EQ(c->backward(x).block, 1);
}

TEST(Homeo, CyclicBlockRejectsNonPermutation) {
  EXPECT_THROW(make_cyclic_block({1, 1}, make_rotation_flow({0.1})), StructuralError);
}

TEST(FiberMap, PullbackMatchesComposition) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, kTwoPi);
  const auto p = random_circle_part(5, rng);
  const auto rot = FiberMap::rotation({0.3});
  const auto pb = rot.pullback(p);
  for (int t = 0; t < 20; ++t) {
    BlockPoint x = angle(u(rng));
    const Scalar direct = pb.value(x.angles, nullptr);
    rot.forward(x);
    EXPECT_NEAR(std::abs(direct - p.value(x.angles, nullptr)), 0.0, 1e-11);
  }
}

TEST(FiberMap, SymbolPullbacksMatchComposition) {
  std::mt19937_64 rng(6);
  const auto p = random_symbol_part(2, -2, 5, rng);
  for (const auto& map : {FiberMap::shift(1), FiberMap::shift(-3), FiberMap::translate(2, {1, 1}, {0, 0, 1})}) {
    const auto pb = map.pullback(p);
    for (int w = 0; w < 200; ++w) {
      std::vector<int> letters;
      std::uint64_t bits = rng();
      for (int i = 0; i < 16; ++i) letters.push_back(static_cast<int>((bits >> i) & 1));
      BlockPoint x{1, {}, SymbolPoint::from_word(-8, letters, static_cast<int>(bits >> 20) & 1)};
      const Scalar direct = pb.value({}, &*x.symbol);
      map.forward(x);
      EXPECT_EQ(direct, p.value({}, &*x.symbol));
    }
  }
}

TEST(BilateralShift, SeedVisitsEveryCylinder) {
  const auto bs = make_bilateral_shift(2, 2'000'000, 6, 4);
  EXPECT_EQ(bs.seed.depth, 6);
  for (int k : {1, 2, 4}) {
    const auto rep = orbit_density(bs.flow, bs.seed.base, std::ldexp(1.0, -6), bs.span + 16, k);
    EXPECT_TRUE(rep.certified) << "power " << k;
  }
}

TEST(BilateralShift, BudgetTooSmallIsCapacityError) {
  EXPECT_THROW(make_bilateral_shift(2, 10, 6, 4), CapacityError);
}

TEST(CantorFlow, FixesL0AndWalksFast) {
  const auto cf = make_cantor_flow(2, 8, {1, 1, 0, 0, 0, 0, 0, 0}, {1, 0, 1, 0, 0, 0, 0, 0}, 6);
  BlockPoint x{1, {}, cf.fixed};
  const auto y = cf.flow->forward(x);
  EXPECT_EQ(symbol_to_padic(*y.symbol, 20), symbol_to_padic(cf.fixed, 20));
  // the conjugated walker agrees with stepping the point itself
  OrbitWalker w(cf.flow, cf.seed.base, 1, 12);
  BlockPoint z = cf.seed.base;
  for (int t = 0; t < 40; ++t) {
    EXPECT_EQ(w.view().word, view_of(z, 12).word) << "step " << t;
    w.step();
    z = cf.flow->forward(z);
  }
}

TEST(CantorFlow, DigitCountIsChecked) {
  EXPECT_THROW(make_cantor_flow(2, 8, {1, 1}, {1, 0, 1}, 6), ValidationError);
}

TEST(Orbit, GoldenRotationIsDenseQuickly) {
  const auto rep = orbit_density(make_rotation_flow({kPhi}), angle(0.0), 0.01, 10000);
  EXPECT_TRUE(rep.certified);
  EXPECT_LE(rep.iterations, 10000);
  // coverage curve is nondecreasing
  for (std::size_t i = 1; i < rep.curve.size(); ++i) EXPECT_GE(rep.curve[i].second, rep.curve[i - 1].second);
}

TEST(Orbit, RationalRotationIsNotDense) {
  const auto rep = orbit_density(make_rotation_flow({0.25}), angle(0.0), 0.01, 10000);
  EXPECT_FALSE(rep.certified);
  EXPECT_LT(rep.coverage, 0.1);
}

TEST(Orbit, SymbolDepthForEps) {
  EXPECT_EQ(symbol_depth(0.05), 5);
  EXPECT_EQ(symbol_depth(1.0 / 64), 6);
}

TEST(ProbeGrid, ExactProbeIsHit) {
  ProbeGrid g({BlockShape{1, 0}, BlockShape{0, 2}}, 0.1);
  EXPECT_GT(g.size(), 0u);
  std::vector<std::size_t> hits;
  g.hits(OrbitView{1, {0.0}, {}}, hits);
  EXPECT_FALSE(hits.empty());
  hits.clear();
  OrbitView v{2, {}, std::vector<int>(static_cast<std::size_t>(g.depth()), 1)};
  g.hits(v, hits);
  EXPECT_EQ(hits.size(), 1u);
}

TEST(LTransitivity, IndependentRotationsPass) {
  const auto rep = certify_L_transitivity(verify::rotation_family({std::sqrt(2.0) - 1, std::sqrt(3.0) - 1}), {2, 4},
                                          0.05, 100000, 3);
  EXPECT_TRUE(rep.certified);
  EXPECT_EQ(rep.cases.size(), 8u);
}

TEST(LTransitivity, ParityFixtureFailsOnOddShift) {
  const auto rep = certify_L_transitivity(verify::parity_family(std::sqrt(2.0) - 1), {2}, 0.05, 20000, 3);
  EXPECT_FALSE(rep.certified);
  for (const auto& c : rep.cases) EXPECT_EQ(c.success, c.i % 2 == 0) << "i = " << c.i;
}
