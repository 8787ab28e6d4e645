#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "shiftlab/blockmethod/blockmethod.hpp"
#include "shiftlab/dynamics/homeo.hpp"
#include "shiftlab/funcspace/function.hpp"
#include "shiftlab/shiftop/functional.hpp"

namespace shiftlab::shiftop {

using dynamics::HomeoPtr;
using funcspace::SpacePtr;

// a as one constant per block; 1 on the sequence, per-limit values for the
// glued case (a limit glued into a block takes that block's value)
struct WeightFunction {
  std::vector<Scalar> block;
  Scalar sequence = 1.0;
  std::vector<Scalar> limits;

  double modulus_defect() const;  // max | |a| - 1 |
};

enum class Construction { BlockMethod, Composition, GoldenArcModel, ComplexFamily, CantorToallas, Counterexample };

std::string to_string(Construction c);
Construction construction_from_string(const std::string& name);

// Z_n, its base point and where (m, z) lives
struct BlockMethodData {
  blockmethod::CompatibleSequence seq;
  blockmethod::BlockIndex index;
  blockmethod::GammaConfig gamma;
  std::vector<HomeoPtr> h;                // h_n on Z_n
  std::vector<funcspace::BlockPoint> base;  // 1_n as a point of Z_n
  int nsub = 1;                           // blocks per copy of Z_n
};

struct CompositionData {
  HomeoPtr chi;     // on Y alone
  int y_block = 1;  // block id of Y in the space
  funcspace::BlockPoint one, zero;  // 1_Y, 0_Y (period N under chi)
  Scalar d1 = 0, d2 = 0;
  int period = 1;
  bool plain_shift = false;  // chi is a power of the bilateral shift
  std::int64_t span = 0;     // orbit length that visits every seed word
  int seed_depth = 0;
};

struct GoldenData {
  std::string variant;  // PLAIN, PRODUCT, TWO_COPIES
  double step = 1.0;    // rotation of the arc circle, radians
  double arc_ratio = kPhi;
  int kappa = 0;        // extra torus factors
  std::vector<double> rho;  // their rotation (turns)
  std::vector<double> v;    // evaluation point
};

struct ComplexData {
  int n = 2;
  std::vector<int> kappa;
  std::vector<Scalar> zeta, z;
  std::vector<funcspace::BlockPoint> v;
};

struct ShiftOperator {
  Construction construction = Construction::BlockMethod;
  std::string recipe;
  SpacePtr space;
  WeightFunction a;
  HomeoPtr phi;
  Functional delta;
  ScalarField field = ScalarField::Real;

  std::optional<BlockMethodData> block;
  std::optional<CompositionData> composition;
  std::optional<GoldenData> golden;
  std::optional<ComplexData> complex;

  // |a| = 1, |Delta| <= 1, phi matches the space and shifts the sequence
  void validate() const;
};

// (Tf)(x) = a(x) f(phi(x)), (Tf)(1) = Delta(f)
BlockFunction apply_T(const ShiftOperator& T, const BlockFunction& f);
// the preimage off the isolated point; strict mode also asks f(1) = Delta(g)
BlockFunction apply_T_inverse(const ShiftOperator& T, const BlockFunction& f, bool strict = false,
                              double tol = 1e-12);
// T^k, negative k through the lenient inverse
BlockFunction apply_T_power(const ShiftOperator& T, const BlockFunction& f, int k);

struct RangeMembership {
  BlockFunction preimage;
  Scalar defect = 0;  // f(1) - Delta(g)
  bool in_range = false;
};

RangeMembership range_membership(const ShiftOperator& T, const BlockFunction& f, double tol = 1e-12);

struct IsometryReport {
  int trials = 0;
  int resolution = 0;
  double tolerance = 0;
  double max_deviation = 0;
  bool sampled = false;
  bool pass = false;
};

IsometryReport check_isometry(const ShiftOperator& T, int trials, int resolution = 4096, std::uint64_t seed = 1,
                              double tol = 1e-9);

// random element of the space with the right field
BlockFunction random_input(const ShiftOperator& T, std::mt19937_64& rng);

// sup |f - g| over the coefficient model
double distance(const BlockFunction& f, const BlockFunction& g, int resolution = 4096);

}  // namespace shiftlab::shiftop
