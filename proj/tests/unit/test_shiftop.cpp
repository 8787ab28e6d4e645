#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "shiftlab/shiftop/variants.hpp"
#include "shiftlab/verify/kernel.hpp"

using namespace shiftlab;
using namespace shiftlab::shiftop;
using funcspace::SeqPoint;
using funcspace::SymbolPoint;

namespace {

BlockPoint random_point(const funcspace::BlockSpace& s, int block, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, kTwoPi);
  const auto& d = s.blocks[static_cast<std::size_t>(block - 1)];
  BlockPoint x{block, {}, std::nullopt};
  for (int j = 0; j < d.circles; ++j) x.angles.push_back(u(rng));
  if (d.symbol) {
    std::uniform_int_distribution<int> letter(0, d.symbol->alphabet - 1);
    std::vector<int> w(48);
    for (auto& c : w) c = letter(rng);
    x.symbol = SymbolPoint::from_word(-24, w, 0);
  }
  return x;
}

std::vector<ShiftOperator> small_operators() {
  std::vector<ShiftOperator> ops;
  BlockMethodOptions bm;
  bm.p = {2, 4};
  bm.degree = 4;
  bm.sequence_len = 64;
  ops.push_back(build_block_method(bm));
  CompositionOptions co;
  co.depth = 6;
  co.sequence_len = 64;
  ops.push_back(build_composition(co));
  GoldenOptions go;
  go.degree = 8;
  go.sequence_len = 64;
  ops.push_back(build_golden_arc(go));
  ComplexOptions cx;
  cx.degree = 4;
  cx.sequence_len = 64;
  ops.push_back(build_complex_family(cx));
  CantorOptions ca;
  ca.depth = 6;
  ca.sequence_len = 64;
  ops.push_back(build_cantor_toallas(ca));
  return ops;
}

}  // namespace

TEST(ApplyT, MatchesPointwiseDefinition) {
  std::mt19937_64 rng(21);
  for (const auto& T : small_operators()) {
    SCOPED_TRACE(T.recipe);
    T.validate();
    const auto f = random_input(T, rng);
    const auto g = apply_T(T, f);
    for (int b = 1; b <= T.space->block_count(); ++b)
      for (int t = 0; t < 4; ++t) {
        const auto x = random_point(*T.space, b, rng);
        const Scalar want = T.a.block[static_cast<std::size_t>(b - 1)] * eval_function(f, T.phi->forward(x));
        EXPECT_NEAR(std::abs(eval_function(g, x) - want), 0.0, 1e-10) << "block " << b;
      }
    EXPECT_NEAR(std::abs(g.seq_value(1) - T.delta.evaluate(f)), 0.0, 1e-14);
    for (std::int64_t n = 1; n < 20; ++n)
      EXPECT_EQ(eval_function(g, SeqPoint{n + 1}), T.a.sequence * eval_function(f, SeqPoint{n}));
  }
}

TEST(ApplyT, InverseUndoesForward) {
  std::mt19937_64 rng(22);
  for (const auto& T : small_operators()) {
    SCOPED_TRACE(T.recipe);
    const auto f = random_input(T, rng);
    const auto tf = apply_T(T, f);
    EXPECT_LE(distance(apply_T_inverse(T, tf, true), f), 1e-12);
    const auto rm = range_membership(T, tf);
    EXPECT_TRUE(rm.in_range);
    EXPECT_LE(distance(apply_T_power(T, apply_T_power(T, f, 3), -3), f), 1e-11);
  }
}

TEST(ApplyT, StrictInverseRejectsOutsideRange) {
  auto T = build_block_method({});
  std::mt19937_64 rng(3);
  auto f = apply_T(T, random_input(T, rng));
  f.head[0] += 0.5;
  EXPECT_FALSE(range_membership(T, f).in_range);
  EXPECT_THROW(apply_T_inverse(T, f, true), ValidationError);
  EXPECT_NO_THROW(apply_T_inverse(T, f, false));
}

TEST(ArcIntegral, ModesMatchQuadrature) {
  for (int k : {-5, -1, 0, 2, 7}) {
    const double s = 0.3, L = kTwoPi * kPhi;
    const int n = 20000;  // Simpson, even panels
    Scalar acc = 0;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
      acc += w * std::polar(1.0, k * (s + L * i / n));
    }
    acc *= L / (3.0 * n);
    EXPECT_NEAR(std::abs(arc_mode_integral(k, s, L) - acc), 0.0, 1e-10) << "k = " << k;
  }
}

TEST(Isometry, HoldsForEveryConstruction) {
  for (const auto& T : small_operators()) {
    const auto rep = check_isometry(T, 6, 1024);
    EXPECT_TRUE(rep.pass) << T.recipe << " deviation " << rep.max_deviation;
  }
}

TEST(Isometry, NonUnimodularWeightIsCaught) {
  auto T = build_block_method({});
  T.a.block[0] = 0.9;
  EXPECT_THROW(T.validate(), ValidationError);
  const auto rep = check_isometry(T, 4, 512);
  EXPECT_FALSE(rep.pass);
  EXPECT_NEAR(rep.max_deviation, 0.1, 1e-12);
}

TEST(Guards, Composition) {
  EXPECT_THROW(check_composition_guards(0.5, 0.5, 1), ValidationError);  // (d1 + d2)^N = 1
  EXPECT_THROW(check_composition_guards(0.0, 0.5, 2), ValidationError);
  EXPECT_THROW(check_composition_guards(0.75, 0.5, 2), ValidationError);
  EXPECT_THROW(check_composition_guards(0.25, 0.25, 0), ValidationError);
  EXPECT_THROW(check_composition_guards(0.5, 0.5, 2), ValidationError);
  EXPECT_THROW(check_composition_guards(-0.5, -0.5, 2), ValidationError);  // (-1)^2 = 1
  EXPECT_NO_THROW(check_composition_guards(-0.5, -0.5, 3));
  EXPECT_NO_THROW(check_composition_guards(0.5, -0.5, 1));
  EXPECT_NO_THROW(check_composition_guards(0.25, 0.5, 2));
  CompositionOptions co;
  co.d1 = Scalar{0, 0.25};
  EXPECT_THROW(build_composition(co), ValidationError);
}

TEST(Guards, ComplexAndGolden) {
  ComplexOptions cx;
  cx.field = ScalarField::Real;
  EXPECT_THROW(build_complex_family(cx), ValidationError);
  cx = {};
  cx.z = {0.6, 0.1};  // |z_1| > 1/2
  EXPECT_THROW(build_complex_family(cx), ValidationError);
  GoldenOptions go;
  go.variant = "SPIRAL";
  EXPECT_THROW(build_golden_arc(go), ValidationError);
  for (const char* v : {"PLAIN", "PRODUCT", "TWO_COPIES"}) {
    go.variant = v;
    go.degree = 6;
    EXPECT_NO_THROW(build_golden_arc(go).validate()) << v;
  }
}

TEST(Constants, ZetaAndTau) {
  EXPECT_NEAR(std::abs(zeta(1) - Scalar{-1, 0}), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(zeta(2) - Scalar{0, 1}), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(std::pow(zeta(4), 8) + 1.0), 0.0, 1e-14);
  EXPECT_EQ(tau(0), 0);
  EXPECT_EQ(tau(1), 0);
  EXPECT_EQ(tau(2), 1);
  EXPECT_EQ(tau(3), 1);
  EXPECT_EQ(tau(4), 0);
  EXPECT_EQ(construction_from_string(to_string(Construction::GoldenArcModel)), Construction::GoldenArcModel);
  EXPECT_THROW(construction_from_string("NOPE"), ValidationError);
}

// a row valid from n vanishes on every T^n g
TEST(ConstraintRows, HoldOnIteratedImages) {
  std::mt19937_64 rng(31);
  BlockMethodOptions bm;
  bm.p = {2};
  bm.degree = 3;
  bm.sequence_len = 64;
  const auto T1 = build_block_method(bm);
  CompositionOptions co;
  co.depth = 5;
  co.sequence_len = 64;
  const auto T2 = build_composition(co);
  verify::CompositionKernelOptions ko;
  ko.window = 8;
  const std::pair<const ShiftOperator*, verify::ConstraintSystem> systems[] = {
      {&T1, verify::suso_constraint_system(T1)}, {&T2, verify::composition_constraint_system(T2, ko)}};
  for (const auto& [T, sys] : systems) {
    int max_from = 0;
    for (const auto& r : sys.rows) max_from = std::max(max_from, r.valid_from);
    ASSERT_GT(max_from, 0) << T->recipe;
    for (int n : {0, 1, max_from / 2, max_from}) {
      auto g = apply_T_power(*T, random_input(*T, rng), n);
      std::size_t checked = 0;
      for (const auto& r : sys.rows) {
        if (r.valid_from < 0 || r.valid_from > n) continue;
        ++checked;
        EXPECT_LE(std::abs(sys.residual(r, g)), 1e-9) << T->recipe << " n = " << n << " row " << r.tag;
      }
      if (n == max_from) EXPECT_GT(checked, 0u);
    }
  }
}
