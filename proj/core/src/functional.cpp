#include "shiftlab/shiftop/functional.hpp"

namespace shiftlab::shiftop {

std::string to_string(Functional::Kind k) {
  switch (k) {
    case Functional::Kind::PointCombo: return "POINT_COMBO";
    case Functional::Kind::GoldenArc: return "GOLDEN_ARC";
    case Functional::Kind::ProductWithEvaluation: return "PRODUCT_WITH_EVALUATION";
    case Functional::Kind::CompositionPair: return "COMPOSITION_PAIR";
    case Functional::Kind::Composite: return "COMPOSITE";
  }
  return "?";
}

Scalar arc_mode_integral(int k, double start, double length, Scalar prefactor) {
  if (k == 0) return prefactor * length;
  // e^{ik(s + L/2)} 2 sin(kL/2) / k, no cancellation for short arcs
  const double mid = start + 0.5 * length;
  return prefactor * std::polar(2.0 * std::sin(0.5 * k * length) / k, k * mid);
}

Scalar arc_integral(const BlockPart& part, int factor, double start, double length, Scalar prefactor,
                    const std::vector<double>& eval_angles, const funcspace::SymbolPoint* symbol) {
  if (factor < 0 || factor >= part.circles) throw StructuralError("arc functional on a missing circle factor");
  if (part.circles > 1 && static_cast<int>(eval_angles.size()) != part.circles)
    throw StructuralError("arc functional needs one evaluation angle per circle factor");
  std::size_t w = 0;
  if (part.alphabet > 0) {
    if (!symbol) throw StructuralError("arc functional on a symbol block needs a symbol coordinate");
    w = static_cast<std::size_t>(symbol->word_index(part.lo, part.depth, part.alphabet));
  }
  const int M = part.degree;
  std::vector<Scalar> arc(static_cast<std::size_t>(2 * M + 1));
  for (int k = -M; k <= M; ++k) arc[k + M] = arc_mode_integral(k, start, length, prefactor);
  const std::size_t modes = part.modes();
  Scalar acc = 0;
  for (std::size_t m = 0; m < modes; ++m) {
    const Scalar c = part.coef[w * modes + m];
    if (c == Scalar{0}) continue;
    auto k = funcspace::mode_degrees(m, part.circles, M);
    Scalar term = c * arc[k[factor] + M];
    for (int j = 0; j < part.circles; ++j)
      if (j != factor) term *= std::polar(1.0, k[j] * eval_angles[j]);
    acc += term;
  }
  return acc;
}

Scalar Functional::evaluate(const BlockFunction& f) const {
  switch (kind) {
    case Kind::PointCombo:
    case Kind::CompositionPair: {
      Scalar acc = 0;
      for (std::size_t i = 0; i < points.size(); ++i) acc += weights[i] * funcspace::eval_function(f, points[i]);
      return acc;
    }
    case Kind::GoldenArc:
    case Kind::ProductWithEvaluation: {
      if (block < 1 || block > static_cast<int>(f.parts.size()))
        throw StructuralError("arc functional on block " + std::to_string(block) + " outside the space");
      return arc_integral(f.parts[static_cast<std::size_t>(block - 1)], factor, start, length, prefactor,
                          eval_angles);
    }
    case Kind::Composite: {
      Scalar acc = 0;
      for (std::size_t i = 0; i < terms.size(); ++i) acc += term_weights[i] * terms[i].evaluate(f);
      return acc;
    }
  }
  return 0;
}

double Functional::norm_bound() const {
  switch (kind) {
    case Kind::PointCombo:
    case Kind::CompositionPair: {
      double s = 0;
      for (const auto& w : weights) s += std::abs(w);
      return s;
    }
    case Kind::GoldenArc:
    case Kind::ProductWithEvaluation: return std::abs(prefactor) * std::fabs(length);
    case Kind::Composite: {
      double s = 0;
      for (std::size_t i = 0; i < terms.size(); ++i) s += std::abs(term_weights[i]) * terms[i].norm_bound();
      return s;
    }
  }
  return 0;
}

Functional point_combo(std::vector<PointRef> points, std::vector<Scalar> weights, std::string label) {
  if (points.size() != weights.size()) throw ValidationError("point combination needs one weight per point");
  Functional d;
  d.kind = Functional::Kind::PointCombo;
  d.label = std::move(label);
  d.points = std::move(points);
  d.weights = std::move(weights);
  return d;
}

Functional golden_arc(int block, double start, double length, Scalar prefactor) {
  Functional d;
  d.kind = Functional::Kind::GoldenArc;
  d.label = "golden_arc";
  d.block = block;
  d.start = start;
  d.length = length;
  d.prefactor = prefactor;
  return d;
}

Functional product_with_evaluation(const Functional& arc, std::vector<double> eval_angles) {
  if (arc.kind != Functional::Kind::GoldenArc) throw ValidationError("product needs an arc functional");
  Functional d = arc;
  d.kind = Functional::Kind::ProductWithEvaluation;
  d.label = "arc_x_evaluation";
  d.eval_angles = std::move(eval_angles);
  return d;
}

Functional composition_pair(const PointRef& one, const PointRef& chi_n_one, Scalar d1, Scalar d2, int period) {
  Functional d;
  d.kind = Functional::Kind::CompositionPair;
  d.label = "composition_pair";
  d.points = {one, chi_n_one};
  d.weights = {d1, d2};
  d.period = period;
  return d;
}

Functional composite(std::vector<Functional> terms, std::vector<Scalar> weights) {
  if (terms.size() != weights.size()) throw ValidationError("composite functional needs one weight per term");
  Functional d;
  d.kind = Functional::Kind::Composite;
  d.label = "composite";
  d.terms = std::move(terms);
  d.term_weights = std::move(weights);
  return d;
}

}  // namespace shiftlab::shiftop
