#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "shiftlab/funcspace/function.hpp"

using namespace shiftlab;
using namespace shiftlab::funcspace;

namespace {

SpacePtr circle_space(int degree = 6, ScalarField field = ScalarField::Real) {
  BlockSpace s;
  s.field = field;
  s.blocks.push_back(BlockDescriptor{1, 1, degree, std::nullopt, "C"});
  return make_space(s);
}

SpacePtr mixed_space() {
  BlockSpace s;
  s.blocks.push_back(BlockDescriptor{1, 1, 3, std::nullopt, "C"});
  s.blocks.push_back(BlockDescriptor{2, 0, 0, SymbolFactor{2, 4}, "Y"});
  s.blocks.push_back(BlockDescriptor{3, 2, 2, std::nullopt, "T2"});
  return make_space(s);
}

// direct sum over modes, no Horner
Scalar brute_value(const BlockPart& p, const std::vector<double>& angles) {
  Scalar s = 0;
  for (std::size_t m = 0; m < p.modes(); ++m) {
    const auto k = mode_degrees(m, p.circles, p.degree);
    double phase = 0;
    for (int j = 0; j < p.circles; ++j) phase += k[j] * angles[j];
    s += p.coef[m] * std::polar(1.0, phase);
  }
  return s;
}

}  // namespace

TEST(SymbolPoint, ShiftMovesCoordinates) {
  auto x = SymbolPoint::from_word(-2, {1, 0, 1, 1}, 0);
  EXPECT_EQ(x.at(-2), 1);
  EXPECT_EQ(x.at(-1), 0);
  EXPECT_EQ(x.at(5), 0);
  auto y = x.shifted(1);
  for (std::int64_t m = -6; m < 6; ++m) EXPECT_EQ(y.at(m), x.at(m + 1));
  EXPECT_EQ(y.shifted(-1), x);
}

TEST(SymbolPoint, WordIndexIsLeastSignificantFirst) {
  auto x = SymbolPoint::from_word(0, {1, 0, 1}, 0);
  EXPECT_EQ(x.word_index(0, 3, 2), 1u + 4u);
  auto t = SymbolPoint::from_word(0, {2, 1}, 0);
  EXPECT_EQ(t.word_index(0, 2, 3), 2u + 3u);
}

TEST(SymbolPoint, PeriodicPointIsFixedByItsPeriod) {
  auto x = SymbolPoint::periodic({1, 0, 0});
  EXPECT_EQ(x.shifted(3), x);
  EXPECT_NE(x.shifted(1).read(0, 6), x.read(0, 6));
}

TEST(Padic, InterleavingIsABijection) {
  for (int k = 0; k < 40; ++k) EXPECT_EQ(position_digit(digit_position(k)), k);
  EXPECT_EQ(centered_lo(5), -2);
  EXPECT_GE(centered_depth_covering(-3, 10), 10);
}

TEST(Padic, RoundTripAndArithmetic) {
  const std::vector<int> d{1, 1, 0, 1, 0, 0};  // 11
  EXPECT_EQ(symbol_to_padic(padic_to_symbol(d), 6), d);
  // 11 + 5 - 3 = 13 mod 64
  const auto r = translate_digits(d, 2, {1, 0, 1}, {1, 1});
  EXPECT_EQ(r, (std::vector<int>{1, 0, 1, 1, 0, 0}));
  // whole-point translation agrees on the low digits
  const auto x = translate_point(padic_to_symbol(d), 2, {1, 0, 1}, {1, 1});
  EXPECT_EQ(symbol_to_padic(x, 6), r);
}

TEST(Padic, NegativeTranslationBorrowsIntoTheTail) {
  // 0 - 1 = ...1111 in Z_2
  const auto x = translate_point(SymbolPoint::constant(0), 2, {}, {1});
  for (int k = 0; k < 12; ++k) EXPECT_EQ(symbol_to_padic(x, 12)[k], 1);
}

TEST(BlockPart, ValueMatchesDirectSum) {
  std::mt19937_64 rng(3);
  auto space = mixed_space();
  const auto f = random_function(space, rng);
  std::uniform_real_distribution<double> u(0, kTwoPi);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> a1{u(rng)}, a3{u(rng), u(rng)};
    EXPECT_NEAR(std::abs(f.parts[0].value(a1, nullptr) - brute_value(f.parts[0], a1)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(f.parts[2].value(a3, nullptr) - brute_value(f.parts[2], a3)), 0.0, 1e-12);
  }
}

TEST(BlockPart, EmbedWindowKeepsValues) {
  std::mt19937_64 rng(5);
  auto space = mixed_space();
  const auto f = random_function(space, rng);
  const auto& p = f.parts[1];
  const auto big = embed_window(p, p.lo - 3, p.depth + 5);
  for (int w = 0; w < 64; ++w) {
    std::vector<int> letters;
    for (int i = 0; i < 12; ++i) letters.push_back((w >> (i % 6)) & 1);
    auto x = SymbolPoint::from_word(-6, letters, 0);
    EXPECT_EQ(p.value({}, &x), big.value({}, &x));
  }
}

TEST(SupNorm, TrigSupOfCosine) {
  // 3 cos(theta) + 1
  std::vector<Scalar> c{1.5, 1.0, 1.5};
  EXPECT_NEAR(trig_sup(c.data(), 1, 64), 4.0, 1e-12);
}

TEST(SupNorm, CylinderBlocksAreExact) {
  BlockSpace s;
  s.blocks.push_back(BlockDescriptor{1, 0, 0, SymbolFactor{2, 3}, "Y"});
  auto space = make_space(s);
  auto f = zero_function(space);
  f.parts[0].coef[5] = -2.5;
  const auto n = sup_norm_detail(f);
  EXPECT_EQ(n.value, 2.5);
  EXPECT_FALSE(n.sampled);
}

TEST(SupNorm, SequenceAndLimitsCount) {
  auto space = circle_space();
  auto f = zero_function(space);
  f.head = {0.1, -3.0};
  EXPECT_NEAR(sup_norm(f), 3.0, 1e-15);
}

TEST(Function, SequenceValueFallsBackToLimits) {
  BlockSpace s;
  s.blocks.push_back(BlockDescriptor{1, 1, 2, std::nullopt, "C"});
  s.limits = {LimitPoint{}, LimitPoint{}};
  auto f = zero_function(make_space(s));
  f.head = {7.0};
  f.limits = {1.0, 2.0};
  EXPECT_EQ(f.seq_value(1), Scalar{7.0});
  EXPECT_EQ(f.seq_value(4), Scalar{1.0});
  EXPECT_EQ(f.seq_value(5), Scalar{2.0});
}

TEST(Function, RandomRealFunctionsAreReal) {
  std::mt19937_64 rng(1);
  auto f = random_function(mixed_space(), rng);
  std::uniform_real_distribution<double> u(0, kTwoPi);
  for (int t = 0; t < 10; ++t) {
    EXPECT_NEAR(eval_function(f, circle_point(1, {u(rng)})).imag(), 0.0, 1e-12);
    EXPECT_NEAR(eval_function(f, circle_point(3, {u(rng), u(rng)})).imag(), 0.0, 1e-12);
  }
  for (auto v : f.head) EXPECT_EQ(v.imag(), 0.0);
}

TEST(Function, CombineIsLinearPointwise) {
  std::mt19937_64 rng(2);
  auto space = mixed_space();
  const auto f = random_function(space, rng);
  const auto g = random_function(space, rng);
  const auto h = combine(2.0, f, -0.5, g);
  const PointRef pts[] = {circle_point(1, {0.3}), symbol_point(2, SymbolPoint::periodic({1, 0})),
                          circle_point(3, {1.0, 2.0}), SeqPoint{3}, LimitRef{0}};
  for (const auto& x : pts)
    EXPECT_NEAR(std::abs(eval_function(h, x) - (2.0 * eval_function(f, x) - 0.5 * eval_function(g, x))), 0.0, 1e-12);
}

TEST(Function, EvaluationRowReproducesValues) {
  std::mt19937_64 rng(8);
  auto space = mixed_space();
  const auto f = random_function(space, rng);
  const auto layout = default_layout(space);
  const auto c = layout_coefficients(layout, f);
  std::vector<BlockPoint> pts{BlockPoint{1, {0.7}, std::nullopt}, BlockPoint{2, {}, SymbolPoint::periodic({0, 1, 1})},
                              BlockPoint{3, {2.0, 5.0}, std::nullopt}};
  for (const auto& x : pts) {
    Scalar s = 0;
    for (const auto& [i, v] : evaluation_row(layout, x)) s += v * c[i];
    EXPECT_NEAR(std::abs(s - eval_function(f, x)), 0.0, 1e-12);
  }
}

TEST(Function, IndicatorsAndGlue) {
  BlockSpace s;
  s.blocks.push_back(BlockDescriptor{1, 0, 0, SymbolFactor{2, 2}, "Y"});
  s.limits = {LimitPoint{BlockPoint{1, {}, SymbolPoint::constant(0)}}};
  auto space = make_space(s);
  const auto f = block_indicator(space, 1);
  EXPECT_EQ(f.limits[0], Scalar{1.0});
  EXPECT_EQ(glue_defect(f), 0.0);
  EXPECT_THROW(sequence_indicator(space), ValidationError);
  EXPECT_EQ(point_one_indicator(space).seq_value(1), Scalar{1.0});
}

TEST(Function, AssembleRejectsGlueViolation) {
  BlockSpace s;
  s.blocks.push_back(BlockDescriptor{1, 0, 0, SymbolFactor{2, 2}, "Y"});
  s.limits = {LimitPoint{BlockPoint{1, {}, SymbolPoint::constant(0)}}};
  auto space = make_space(s);
  auto parts = zero_function(space).parts;
  EXPECT_THROW(assemble_block_function(space, parts, {}, {1.0}), ValidationError);
  EXPECT_NO_THROW(assemble_block_function(space, parts, {}, {0.0}));
}

TEST(Space, BadPointsAreStructuralErrors) {
  auto space = circle_space();
  EXPECT_THROW(space->check_point(circle_point(2, {0.0})), StructuralError);
  EXPECT_THROW(space->check_point(circle_point(1, {0.0, 1.0})), StructuralError);
  EXPECT_THROW(space->check_point(LimitRef{3}), StructuralError);
}

TEST(Space, SamePointComparesAnglesModuloTwoPi) {
  EXPECT_TRUE(same_point(circle_point(1, {0.0}), circle_point(1, {kTwoPi}), 1e-12));
  EXPECT_FALSE(same_point(circle_point(1, {0.0}), circle_point(2, {0.0})));
  EXPECT_TRUE(same_point(SeqPoint{4}, SeqPoint{4}));
}
