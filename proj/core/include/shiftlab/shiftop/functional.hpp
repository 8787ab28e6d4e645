#pragma once

#include <string>
#include <vector>

#include "shiftlab/funcspace/function.hpp"

namespace shiftlab::shiftop {

using funcspace::BlockFunction;
using funcspace::BlockPart;
using funcspace::BlockPoint;
using funcspace::PointRef;

// The value written at the isolated point: (Tf)(1) = Delta(f).
struct Functional {
  enum class Kind { PointCombo, GoldenArc, ProductWithEvaluation, CompositionPair, Composite };
  Kind kind = Kind::PointCombo;
  std::string label;

  // PointCombo, CompositionPair: sum_i weights[i] f(points[i])
  std::vector<PointRef> points;
  std::vector<Scalar> weights;
  int period = 0;  // CompositionPair: N of chi^N(1_Y)

  // GoldenArc / ProductWithEvaluation: prefactor * int_{start}^{start+length} f d(theta)
  // over circle `factor` of `block`; the remaining factors are frozen at eval_angles
  // (indexed like the block's factors, entry `factor` ignored)
  int block = 1;
  int factor = 0;
  double start = 0;
  double length = 0;
  Scalar prefactor = 0;
  std::vector<double> eval_angles;

  // Composite: sum_i term_weights[i] terms[i](f)
  std::vector<Functional> terms;
  std::vector<Scalar> term_weights;

  Scalar evaluate(const BlockFunction& f) const;
  // upper bound for the operator norm
  double norm_bound() const;
};

std::string to_string(Functional::Kind k);

Functional point_combo(std::vector<PointRef> points, std::vector<Scalar> weights, std::string label = "points");
// (1 / 2 pi) int over A(start, start + 2 pi Phi) by default
Functional golden_arc(int block, double start = 0.0, double length = kTwoPi * kPhi,
                      Scalar prefactor = 1.0 / kTwoPi);
Functional product_with_evaluation(const Functional& arc, std::vector<double> eval_angles);
Functional composition_pair(const PointRef& one, const PointRef& chi_n_one, Scalar d1, Scalar d2, int period);
Functional composite(std::vector<Functional> terms, std::vector<Scalar> weights);

// prefactor * int_{start}^{start+length} e^{ik theta} d theta
Scalar arc_mode_integral(int k, double start, double length, Scalar prefactor = 1.0);
// the same integral against a whole block part (circle factor `factor`, other
// factors at eval_angles, symbol word of `symbol` if the block has one)
Scalar arc_integral(const BlockPart& part, int factor, double start, double length, Scalar prefactor,
                    const std::vector<double>& eval_angles, const funcspace::SymbolPoint* symbol = nullptr);

}  // namespace shiftlab::shiftop
