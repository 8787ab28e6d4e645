#include "shiftlab/shiftop/shift.hpp"

namespace shiftlab::shiftop {

using funcspace::LimitRef;
using funcspace::SeqPoint;

double WeightFunction::modulus_defect() const {
  double d = std::abs(std::abs(sequence) - 1.0);
  for (const auto& x : block) d = std::max(d, std::abs(std::abs(x) - 1.0));
  for (const auto& x : limits) d = std::max(d, std::abs(std::abs(x) - 1.0));
  return d;
}

std::string to_string(Construction c) {
  switch (c) {
    case Construction::BlockMethod: return "BLOCK_METHOD";
    case Construction::Composition: return "COMPOSITION";
    case Construction::GoldenArcModel: return "GOLDEN_ARC_MODEL";
    case Construction::ComplexFamily: return "COMPLEX_FAMILY";
    case Construction::CantorToallas: return "CANTOR_TOALLAS";
    case Construction::Counterexample: return "COUNTEREXAMPLE";
  }
  return "?";
}

Construction construction_from_string(const std::string& name) {
  for (auto c : {Construction::BlockMethod, Construction::Composition, Construction::GoldenArcModel,
                 Construction::ComplexFamily, Construction::CantorToallas, Construction::Counterexample})
    if (to_string(c) == name) return c;
  throw ValidationError("unknown construction '" + name + "'");
}

void ShiftOperator::validate() const {
  if (!space || !phi) throw StructuralError("operator is missing its space or its map");
  if (phi->block_count() != space->block_count())
    throw StructuralError("map acts on " + std::to_string(phi->block_count()) + " blocks, space has " +
                          std::to_string(space->block_count()));
  for (int b = 0; b < phi->block_count(); ++b) {
    const auto& d = space->blocks[b];
    const dynamics::BlockShape shape{d.circles, d.symbol ? d.symbol->alphabet : 0};
    if (phi->domain[b] != shape) throw StructuralError("map and space disagree on block " + std::to_string(b + 1));
  }
  if (phi->sequence_step != -1) throw StructuralError("map must send n+1 to n on the sequence");
  const int N = space->limit_count();
  if (static_cast<int>(phi->limit_map.size()) != N) throw StructuralError("map and space disagree on limit points");
  for (int k = 0; k < N; ++k) {
    if (phi->limit_map[k] != static_cast<int>(floor_mod(k - 1, N)))
      throw StructuralError("limit " + std::to_string(k) + " must go to limit " + std::to_string(floor_mod(k - 1, N)));
    const auto& adr = space->limits[k].address;
    if (adr) {
      const auto& dst = space->limits[phi->limit_map[k]].address;
      if (!dst || !funcspace::same_point(phi->forward(*adr), *dst, 1e-9))
        throw StructuralError("glued limit " + std::to_string(k) + " is not carried to its image limit");
    }
  }
  if (static_cast<int>(a.block.size()) != space->block_count() || static_cast<int>(a.limits.size()) != N)
    throw StructuralError("weight function does not cover the space");
  if (a.modulus_defect() > 1e-12) throw ValidationError("weight function is not unimodular");
  if (delta.norm_bound() > 1.0 + 1e-12)
    throw ValidationError("functional norm bound " + std::to_string(delta.norm_bound()) + " exceeds 1");
  if (field == ScalarField::Real) {
    for (const auto& x : a.block)
      if (x.imag() != 0) throw ValidationError("complex weight over the real field");
  }
  if (field != space->field) throw StructuralError("operator and space use different fields");
}

namespace {

void check_input(const ShiftOperator& T, const BlockFunction& f) {
  if (!f.space || (f.space != T.space && !funcspace::same_shape(*f.space, *T.space)))
    throw StructuralError("function lives on a different space");
  if (f.parts.size() != T.space->blocks.size() || f.limits.size() != T.space->limits.size())
    throw StructuralError("function does not cover the operator's space");
}

}  // namespace

BlockFunction apply_T(const ShiftOperator& T, const BlockFunction& f) {
  check_input(T, f);
  const auto& phi = *T.phi;
  BlockFunction g;
  g.space = T.space;
  g.parts.resize(f.parts.size());
  for (std::size_t b = 0; b < f.parts.size(); ++b) {
    g.parts[b] = phi.fiber[b].pullback(f.parts[static_cast<std::size_t>(phi.target[b] - 1)]);
    if (T.a.block[b] != Scalar{1})
      for (auto& c : g.parts[b].coef) c *= T.a.block[b];
  }
  g.head.reserve(f.head.size() + 1);
  g.head.push_back(T.delta.evaluate(f));
  for (const auto& v : f.head) g.head.push_back(T.a.sequence * v);
  g.limits.resize(f.limits.size());
  for (std::size_t k = 0; k < f.limits.size(); ++k)
    g.limits[k] = T.a.limits[k] * f.limits[static_cast<std::size_t>(phi.limit_map[k])];
  return g;
}

BlockFunction apply_T_inverse(const ShiftOperator& T, const BlockFunction& f, bool strict, double tol) {
  check_input(T, f);
  const auto& phi = *T.phi;
  BlockFunction g;
  g.space = T.space;
  g.parts.resize(f.parts.size());
  for (std::size_t b = 0; b < f.parts.size(); ++b) {
    auto& dst = g.parts[static_cast<std::size_t>(phi.target[b] - 1)];
    dst = phi.fiber[b].inverse().pullback(f.parts[b]);
    if (T.a.block[b] != Scalar{1}) {
      const Scalar inv = 1.0 / T.a.block[b];
      for (auto& c : dst.coef) c *= inv;
    }
  }
  if (!f.head.empty())
    for (std::size_t i = 1; i < f.head.size(); ++i) g.head.push_back(f.head[i] / T.a.sequence);
  g.limits.resize(f.limits.size());
  for (std::size_t k = 0; k < f.limits.size(); ++k)
    g.limits[static_cast<std::size_t>(phi.limit_map[k])] = f.limits[k] / T.a.limits[k];
  if (strict) {
    const Scalar defect = f.seq_value(1) - T.delta.evaluate(g);
    if (std::abs(defect) > tol)
      throw ValidationError("function is not in the range of T (defect " + std::to_string(std::abs(defect)) + ")");
  }
  return g;
}

BlockFunction apply_T_power(const ShiftOperator& T, const BlockFunction& f, int k) {
  BlockFunction g = f;
  for (int i = 0; i < k; ++i) g = apply_T(T, g);
  for (int i = 0; i > k; --i) g = apply_T_inverse(T, g);
  return g;
}

RangeMembership range_membership(const ShiftOperator& T, const BlockFunction& f, double tol) {
  RangeMembership r;
  r.preimage = apply_T_inverse(T, f);
  r.defect = f.seq_value(1) - T.delta.evaluate(r.preimage);
  r.in_range = std::abs(r.defect) <= tol;
  return r;
}

BlockFunction random_input(const ShiftOperator& T, std::mt19937_64& rng) {
  return funcspace::random_function(T.space, rng);
}

double distance(const BlockFunction& f, const BlockFunction& g, int) {
  // coefficient l1 per word bounds the sup of the difference from above
  const auto d = funcspace::subtract(f, g);
  double out = 0;
  for (const auto& v : d.head) out = std::max(out, std::abs(v));
  for (const auto& v : d.limits) out = std::max(out, std::abs(v));
  for (const auto& p : d.parts) {
    const std::size_t modes = p.modes();
    for (std::size_t w = 0; w < p.words(); ++w) {
      double s = 0;
      for (std::size_t m = 0; m < modes; ++m) s += std::abs(p.coef[w * modes + m]);
      out = std::max(out, s);
    }
  }
  return out;
}

IsometryReport check_isometry(const ShiftOperator& T, int trials, int resolution, std::uint64_t seed, double tol) {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  IsometryReport rep;
  rep.trials = trials;
  rep.resolution = resolution;
  rep.tolerance = tol;
  std::mt19937_64 rng(seed);
  const int nblocks = T.space->block_count();
  for (int t = 0; t < trials; ++t) {
    // block indicators first: they expose a weight that is off on one block
    BlockFunction f = t < nblocks ? funcspace::block_indicator(T.space, t + 1) : random_input(T, rng);
    const auto nf = funcspace::sup_norm_detail(f, resolution);
    const auto ng = funcspace::sup_norm_detail(apply_T(T, f), resolution);
    rep.sampled = rep.sampled || nf.sampled;
    rep.max_deviation = std::max(rep.max_deviation, std::abs(ng.value - nf.value));
  }
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

}  // namespace shiftlab::shiftop
