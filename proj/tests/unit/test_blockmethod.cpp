#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Dense>

#include "shiftlab/blockmethod/blockmethod.hpp"

using namespace shiftlab;
using namespace shiftlab::blockmethod;

TEST(CompatibleSequence, AcceptsEvenRatios) {
  const auto s = validate_compatible_sequence({2, 4, 16});
  EXPECT_EQ(s.total(), 22);
  EXPECT_EQ(s.max_p(), 16);
}

TEST(CompatibleSequence, NamesTheBadPair) {
  try {
    validate_compatible_sequence({2, 6});
    FAIL() << "expected a ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("(2, 6)"), std::string::npos) << e.what();
  }
}

TEST(CompatibleSequence, SingleFamilyNeedsTwo) {
  EXPECT_THROW(validate_compatible_sequence({1}), ValidationError);
  EXPECT_NO_THROW(validate_compatible_sequence({2}));
  EXPECT_THROW(validate_compatible_sequence({4, 2}), ValidationError);
}

TEST(CompatibleSequence, OddMultipleOnlyWhenRelaxed) {
  EXPECT_THROW(validate_compatible_sequence({3, 9}), ValidationError);
  const auto s = validate_compatible_sequence({3, 9}, false, true);
  EXPECT_TRUE(s.integer_multiple);
}

TEST(BlockIndex, ConsecutiveRunsAndPredecessor) {
  const auto idx = build_block_index(validate_compatible_sequence({2, 4}));
  EXPECT_EQ(idx.a(1, 1), 1);
  EXPECT_EQ(idx.a(1, 2), 2);
  EXPECT_EQ(idx.a(2, 1), 3);
  EXPECT_EQ(idx.a(2, 4), 6);
  EXPECT_EQ(idx.pi(5), 2);
  EXPECT_EQ(idx.position(5), 3);
  // s(a_j) = a_{j-1}, s(a_1) = a_p
  EXPECT_EQ(idx.s(4), 3);
  EXPECT_EQ(idx.s(3), 6);
  EXPECT_EQ(idx.s_table(2), (std::vector<int>{4, 1, 2, 3}));
}

TEST(SkewCirculant, EntriesFollowTheSignedShift) {
  const std::vector<Scalar> g{1.0, 2.0, 3.0, 4.0};
  const auto m = build_skew_circulant(g);
  const int p = 4;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      const Scalar want = j < i ? -g[static_cast<std::size_t>(p - i + j)] : g[static_cast<std::size_t>(j - i)];
      EXPECT_EQ(m.at(i, j), want) << i << "," << j;
    }
  EXPECT_TRUE(check_skew_structure(m));
}

TEST(SkewCirculant, DeterminantMatchesIndependentLU) {
  const std::vector<Scalar> g{0.5, Scalar{0.1, 0.2}, -0.3};
  const auto m = build_skew_circulant(g);
  Eigen::Matrix3cd a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = m.at(i, j);
  EXPECT_NEAR(std::abs(m.det - a.partialPivLu().determinant()), 0.0, 1e-14);
  // order 2: g1^2 + g2^2
  const auto m2 = build_skew_circulant({0.5, Scalar{0, 0.5}});
  EXPECT_NEAR(std::abs(m2.det), 0.0, 1e-15);
}

TEST(SkewCirculant, StructureCheckCatchesTampering) {
  auto m = build_skew_circulant({1.0, 2.0, 3.0});
  m.entries[3] = 3.0;  // row 1, col 0 should be -3
  EXPECT_FALSE(check_skew_structure(m));
}

TEST(Gamma, ConfigGuards) {
  const auto idx = build_block_index(validate_compatible_sequence({2}));
  EXPECT_THROW(make_gamma_config({0.5, 0.0}, idx, ScalarField::Real), ValidationError);  // one nonzero entry
  EXPECT_THROW(make_gamma_config({0.7, 0.7}, idx, ScalarField::Real), ValidationError);  // mass > 1
  EXPECT_THROW(make_gamma_config({0.5, Scalar{0, 0.5}}, idx, ScalarField::Real), ValidationError);
  EXPECT_THROW(make_gamma_config({0.5, Scalar{0, 0.5}}, idx, ScalarField::Complex), ValidationError);  // det = 0
  GammaOptions o;
  o.allow_singular = true;
  const auto g = make_gamma_config({0.5, Scalar{0, 0.5}}, idx, ScalarField::Complex, o);
  EXPECT_TRUE(g.singular);
}

TEST(Gamma, DefaultSearchGivesInvertibleBlocks) {
  const auto seq = validate_compatible_sequence({2, 4, 8});
  const auto g = default_gamma_search(seq, ScalarField::Real, 3);
  EXPECT_LE(g.mass + g.tail_mass, 1.0 + 1e-12);
  const auto idx = build_block_index(seq);
  // determinant clear of zero relative to the block's scale
  for (int n = 1; n <= 3; ++n) {
    double l2 = 0;
    for (auto x : gamma_block(g, idx, n)) l2 += std::norm(x);
    const int p = idx.p[static_cast<std::size_t>(n - 1)];
    EXPECT_GT(std::abs(family_matrix(g, idx, n).det), 1e-10 * std::pow(std::sqrt(l2), p)) << "family " << n;
  }
}

TEST(Gamma, VVectorIsAntiperiodic) {
  const auto seq = validate_compatible_sequence({2, 4});
  const auto idx = build_block_index(seq);
  const auto g = default_gamma_search(seq, ScalarField::Real);
  for (int n = 1; n <= 2; ++n) {
    const int p = idx.p[static_cast<std::size_t>(n - 1)];
    const auto m = family_matrix(g, idx, n);
    for (int i = 0; i < p; ++i) {
      const auto v = v_vector(g, idx, n, i);
      const auto w = v_vector(g, idx, n, i + p);
      for (int j = 0; j < p; ++j) {
        EXPECT_EQ(v[static_cast<std::size_t>(j)], m.at(i, j));
        EXPECT_EQ(w[static_cast<std::size_t>(j)], -m.at(i, j));
      }
    }
    // a full period telescopes to zero
    for (auto x : telescoping_sum(g, idx, n, 2 * p)) EXPECT_NEAR(std::abs(x), 0.0, 1e-15);
  }
}

TEST(Delta, WeightsAndPoints) {
  const auto seq = validate_compatible_sequence({2});
  const auto idx = build_block_index(seq);
  const auto g = make_gamma_config({0.5, 0.25}, idx, ScalarField::Real);
  const auto d = block_delta(g, idx, {funcspace::BlockPoint{1, {0.0}, std::nullopt}});
  EXPECT_EQ(d.points.size(), 2u);
  EXPECT_NEAR(d.norm_bound(), 0.75, 1e-15);
  const auto x = lift_point(2, funcspace::BlockPoint{2, {0.3}, std::nullopt}, 2);
  EXPECT_EQ(x.block, 4);
}
